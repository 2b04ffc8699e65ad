#include "natdim/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace natdim {

LabelSpace::LabelSpace(int d) : d_(d) {
    if (d < 1 || d > kMaxClasses) {
        throw InvalidArgument("label space size must be in [1, 255], got " + std::to_string(d));
    }
}

Sample::Sample(std::size_t p, std::vector<std::vector<double>> points)
    : p_(p), points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != p_) {
            throw InvalidArgument("point " + std::to_string(i) + " has dimension " +
                                  std::to_string(points_[i].size()) + ", expected " +
                                  std::to_string(p_));
        }
    }
}

Sample Sample::subset(std::span<const std::size_t> indices) const {
    std::vector<std::vector<double>> pts;
    pts.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= n()) throw InvalidArgument("sample index out of range");
        pts.push_back(points_[i]);
    }
    return Sample(p_, std::move(pts));
}

Json Sample::to_json() const { return Json{{"p", p_}, {"points", points_}}; }

Sample Sample::from_json(const Json& j) {
    return Sample(j.at("p").get<std::size_t>(),
                  j.at("points").get<std::vector<std::vector<double>>>());
}

BehaviorTable::BehaviorTable(std::size_t n, LabelSpace labels) : n_(n), labels_(labels) {}

void BehaviorTable::attach_sample(std::shared_ptr<const Sample> sample) {
    if (sample && sample->n() != n_) {
        throw InvalidArgument("attached sample size does not match table width");
    }
    sample_ = std::move(sample);
}

bool row_less(std::span<const Label> a, std::span<const Label> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::optional<std::size_t> BehaviorTable::find(std::span<const Label> values) const {
    if (values.size() != n_) return std::nullopt;
    std::size_t lo = 0, hi = row_count_;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (row_less(row(mid), values)) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < row_count_ && std::equal(values.begin(), values.end(), row(lo).begin())) return lo;
    return std::nullopt;
}

std::vector<std::vector<int>> BehaviorTable::rows_as_ints() const {
    std::vector<std::vector<int>> out(row_count_);
    for (std::size_t r = 0; r < row_count_; ++r) {
        auto v = row(r);
        out[r].assign(v.begin(), v.end());
    }
    return out;
}

Json BehaviorTable::to_json() const {
    return Json{{"n", n_}, {"d", d()}, {"rows", rows_as_ints()}};
}

BehaviorTable BehaviorTable::from_json(const Json& j) {
    return dedup_behaviors(j.at("rows").get<std::vector<std::vector<int>>>(),
                           j.at("n").get<std::size_t>(), LabelSpace(j.at("d").get<int>()));
}

BehaviorTable table_from_sorted_cells(std::size_t n, LabelSpace labels, std::vector<Label> cells,
                                      std::size_t row_count) {
    BehaviorTable t(n, labels);
    t.cells_ = std::move(cells);
    t.row_count_ = row_count;
    return t;
}

namespace {

BehaviorTable sort_unique(std::size_t n, LabelSpace labels, std::vector<Label> cells,
                          std::size_t rows) {
    if (n == 0) {
        return table_from_sorted_cells(0, labels, {}, rows > 0 ? 1 : 0);
    }
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    auto row_of = [&](std::size_t r) { return std::span<const Label>(cells.data() + r * n, n); };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return row_less(row_of(a), row_of(b)); });
    std::vector<Label> out;
    out.reserve(cells.size());
    std::size_t count = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        auto r = row_of(order[k]);
        if (k > 0) {
            auto prev = row_of(order[k - 1]);
            if (std::equal(r.begin(), r.end(), prev.begin())) continue;
        }
        out.insert(out.end(), r.begin(), r.end());
        ++count;
    }
    return table_from_sorted_cells(n, labels, std::move(out), count);
}

}  // namespace

BehaviorTable dedup_behaviors(const std::vector<std::vector<int>>& raw_rows, std::size_t n,
                              LabelSpace labels) {
    std::vector<Label> cells;
    cells.reserve(raw_rows.size() * n);
    for (std::size_t r = 0; r < raw_rows.size(); ++r) {
        const auto& row = raw_rows[r];
        if (row.size() != n) {
            throw InvalidArgument("row " + std::to_string(r) + " has length " +
                                  std::to_string(row.size()) + ", expected " + std::to_string(n));
        }
        for (int v : row) {
            if (!labels.contains(v)) {
                throw InvalidArgument("label " + std::to_string(v) + " in row " +
                                      std::to_string(r) + " is outside {1.." +
                                      std::to_string(labels.size()) + "}");
            }
            cells.push_back(static_cast<Label>(v));
        }
    }
    return sort_unique(n, labels, std::move(cells), raw_rows.size());
}

BehaviorTable dedup_behaviors(const std::vector<std::vector<int>>& raw_rows, const Sample& sample,
                              LabelSpace labels) {
    auto t = dedup_behaviors(raw_rows, sample.n(), labels);
    t.attach_sample(std::make_shared<const Sample>(sample));
    return t;
}

BehaviorTable restrict(const BehaviorTable& table, std::span<const std::size_t> subset) {
    for (std::size_t c : subset) {
        if (c >= table.n()) {
            throw InvalidArgument("subset index " + std::to_string(c) + " out of range for n = " +
                                  std::to_string(table.n()));
        }
    }
    const std::size_t k = subset.size();
    std::vector<Label> cells;
    cells.reserve(table.row_count() * k);
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        for (std::size_t c : subset) cells.push_back(table.at(r, c));
    }
    auto out = sort_unique(k, table.label_space(), std::move(cells), table.row_count());
    if (table.sample()) {
        out.attach_sample(std::make_shared<const Sample>(table.sample()->subset(subset)));
    }
    return out;
}

namespace {

bool fits_packed(std::size_t n, int d) {
    // d^n must be representable in 64 bits.
    long double limit = static_cast<long double>(std::numeric_limits<std::uint64_t>::max());
    long double acc = 1;
    for (std::size_t i = 0; i < n; ++i) {
        acc *= d;
        if (acc > limit) return false;
    }
    return true;
}

}  // namespace

RowSet::RowSet(std::size_t n, LabelSpace labels)
    : n_(n), labels_(labels), packed_(fits_packed(n, labels.size())) {}

bool RowSet::insert(std::span<const Label> row) {
    if (packed_) {
        std::uint64_t code = 0;
        const auto d = static_cast<std::uint64_t>(labels_.size());
        for (Label v : row) code = code * d + (v - 1u);
        return codes_.insert(code).second;
    }
    return strings_.emplace(reinterpret_cast<const char*>(row.data()), row.size()).second;
}

std::size_t RowSet::size() const { return packed_ ? codes_.size() : strings_.size(); }

BehaviorTable RowSet::to_table() const {
    std::vector<Label> cells;
    cells.reserve(size() * n_);
    if (packed_) {
        // Mixed-radix codes with the first column most significant sort lexicographically.
        std::vector<std::uint64_t> sorted(codes_.begin(), codes_.end());
        std::sort(sorted.begin(), sorted.end());
        const auto d = static_cast<std::uint64_t>(labels_.size());
        std::vector<Label> buf(n_);
        for (std::uint64_t code : sorted) {
            for (std::size_t i = n_; i-- > 0;) {
                buf[i] = static_cast<Label>(code % d + 1);
                code /= d;
            }
            cells.insert(cells.end(), buf.begin(), buf.end());
        }
    } else {
        std::vector<std::string> sorted(strings_.begin(), strings_.end());
        std::sort(sorted.begin(), sorted.end(), [](const std::string& a, const std::string& b) {
            return std::lexicographical_compare(
                a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
                    return static_cast<unsigned char>(x) < static_cast<unsigned char>(y);
                });
        });
        for (const auto& s : sorted) {
            for (char c : s) cells.push_back(static_cast<Label>(c));
        }
    }
    return table_from_sorted_cells(n_, labels_, std::move(cells), size());
}

}  // namespace natdim
