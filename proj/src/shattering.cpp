#include "natdim/shattering.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace natdim {

std::string to_string(ShatterMode mode) {
    switch (mode) {
        case ShatterMode::N: return "N";
        case ShatterMode::G: return "G";
        case ShatterMode::VC: return "VC";
    }
    return "?";
}

ShatterMode shatter_mode_from_string(const std::string& s) {
    if (s == "N") return ShatterMode::N;
    if (s == "G") return ShatterMode::G;
    if (s == "VC") return ShatterMode::VC;
    throw InvalidArgument("unknown shattering mode '" + s + "' (expected N, G or VC)");
}

std::string to_string(DimensionStatus status) {
    return status == DimensionStatus::exact ? "exact" : "lower_bound";
}

Json ShatterWitness::to_json() const {
    Json j;
    j["mode"] = to_string(mode);
    j["subset"] = subset;
    j["f1"] = std::vector<int>(f1.begin(), f1.end());
    if (mode != ShatterMode::G) j["f2"] = std::vector<int>(f2.begin(), f2.end());
    Json r = Json::object();
    for (std::size_t t = 0; t < realizers.size(); ++t) r[std::to_string(t)] = realizers[t];
    j["realizers"] = std::move(r);
    return j;
}

Json DimensionResult::to_json() const {
    Json j{{"dim", dim}, {"status", to_string(status)}, {"subsets_examined", subsets_examined}};
    j["witness"] = witness ? witness->to_json() : Json(nullptr);
    return j;
}

bool verify_witness(const BehaviorTable& table, const ShatterWitness& w) {
    const std::size_t k = w.subset.size();
    if (k >= 63) return false;
    if (w.realizers.size() != (std::size_t{1} << k)) return false;
    if (w.f1.size() != k) return false;
    for (std::size_t c : w.subset) {
        if (c >= table.n()) return false;
    }
    if (w.mode == ShatterMode::G) {
        if (!w.f2.empty()) return false;
    } else {
        if (w.f2.size() != k) return false;
        for (std::size_t i = 0; i < k; ++i) {
            if (w.f1[i] == w.f2[i]) return false;
        }
        if (w.mode == ShatterMode::VC) {
            if (table.d() != 2) return false;
            for (std::size_t i = 0; i < k; ++i) {
                if (w.f1[i] != 1 || w.f2[i] != 2) return false;
            }
        }
    }
    for (std::size_t t = 0; t < w.realizers.size(); ++t) {
        const std::size_t r = w.realizers[t];
        if (r >= table.row_count()) return false;
        for (std::size_t i = 0; i < k; ++i) {
            const Label v = table.at(r, w.subset[i]);
            const bool in_t = (t >> i) & 1u;
            if (w.mode == ShatterMode::G) {
                if (in_t != (v == w.f1[i])) return false;
            } else {
                if (v != (in_t ? w.f1[i] : w.f2[i])) return false;
            }
        }
    }
    return true;
}

namespace {

enum class SubsetVerdict { shattered, not_shattered, unknown };

/// Distinct projections of the table onto a subset, each with the smallest
/// original row index that produces it.
struct Projection {
    std::size_t k = 0;
    std::vector<Label> cells;            // row-major, k per row
    std::vector<std::size_t> origin;     // original row index
    std::vector<std::vector<Label>> labels_in_column;

    Label at(std::size_t r, std::size_t c) const { return cells[r * k + c]; }
    std::size_t rows() const { return origin.size(); }
};

Projection project(const BehaviorTable& table, std::span<const std::size_t> subset) {
    Projection p;
    p.k = subset.size();
    std::unordered_set<std::string> seen;
    std::string key(p.k, '\0');
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        for (std::size_t i = 0; i < p.k; ++i) key[i] = static_cast<char>(table.at(r, subset[i]));
        if (!seen.insert(key).second) continue;
        for (char c : key) p.cells.push_back(static_cast<Label>(c));
        p.origin.push_back(r);
    }
    p.labels_in_column.resize(p.k);
    for (std::size_t i = 0; i < p.k; ++i) {
        std::vector<bool> present(static_cast<std::size_t>(table.d()) + 1, false);
        for (std::size_t r = 0; r < p.rows(); ++r) present[p.at(r, i)] = true;
        for (int v = 1; v <= table.d(); ++v) {
            if (present[static_cast<std::size_t>(v)]) {
                p.labels_in_column[i].push_back(static_cast<Label>(v));
            }
        }
    }
    return p;
}

/// Depth-first construction of the reference labeling(s) column by column.
/// After fixing j columns the surviving rows must already realize all 2^j
/// membership patterns on those columns, otherwise the branch is dead.
class TemplateSearch {
public:
    TemplateSearch(const Projection& proj, ShatterMode mode, std::size_t template_budget)
        : proj_(proj), mode_(mode), budget_(template_budget), f1_(proj.k), f2_(proj.k) {}

    SubsetVerdict run(ShatterWitness& out) {
        std::vector<std::uint32_t> rows(proj_.rows());
        std::iota(rows.begin(), rows.end(), 0u);
        std::vector<std::uint64_t> masks(proj_.rows(), 0);
        SubsetVerdict v = descend(0, rows, masks);
        if (v == SubsetVerdict::shattered) out = std::move(found_);
        return v;
    }

private:
    SubsetVerdict descend(std::size_t col, const std::vector<std::uint32_t>& rows,
                          const std::vector<std::uint64_t>& masks) {
        if (col == proj_.k) {
            build_witness(rows, masks);
            return SubsetVerdict::shattered;
        }
        const std::size_t need = std::size_t{1} << (col + 1);
        if (rows.size() < need) return SubsetVerdict::not_shattered;

        std::vector<std::pair<Label, Label>> choices;
        const auto& present = proj_.labels_in_column[col];
        switch (mode_) {
            case ShatterMode::VC:
                choices.emplace_back(Label{1}, Label{2});
                break;
            case ShatterMode::G:
                for (Label a : present) choices.emplace_back(a, Label{0});
                break;
            case ShatterMode::N:
                for (Label a : present) {
                    for (Label b : present) {
                        if (a == b) continue;
                        // (f1, f2) and (f2, f1) shatter the same sets.
                        if (col == 0 && a > b) continue;
                        choices.emplace_back(a, b);
                    }
                }
                break;
        }

        std::vector<std::uint32_t> next_rows;
        std::vector<std::uint64_t> next_masks;
        std::vector<char> seen(need);
        for (auto [a, b] : choices) {
            if (++templates_ > budget_) return SubsetVerdict::unknown;
            next_rows.clear();
            next_masks.clear();
            std::fill(seen.begin(), seen.end(), 0);
            std::size_t distinct = 0;
            for (std::size_t idx = 0; idx < rows.size(); ++idx) {
                const Label v = proj_.at(rows[idx], col);
                std::uint64_t bit;
                if (v == a) {
                    bit = 1;
                } else if (mode_ == ShatterMode::G || v == b) {
                    bit = 0;
                } else {
                    continue;
                }
                const std::uint64_t m = masks[idx] | (bit << col);
                next_rows.push_back(rows[idx]);
                next_masks.push_back(m);
                if (!seen[m]) {
                    seen[m] = 1;
                    ++distinct;
                }
            }
            if (distinct != need) continue;
            f1_[col] = a;
            f2_[col] = b;
            SubsetVerdict v = descend(col + 1, next_rows, next_masks);
            if (v != SubsetVerdict::not_shattered) return v;
        }
        return SubsetVerdict::not_shattered;
    }

    void build_witness(const std::vector<std::uint32_t>& rows,
                       const std::vector<std::uint64_t>& masks) {
        const std::size_t total = std::size_t{1} << proj_.k;
        found_.mode = mode_;
        found_.f1 = f1_;
        found_.f2 = mode_ == ShatterMode::G ? std::vector<Label>{} : f2_;
        found_.realizers.assign(total, std::numeric_limits<std::size_t>::max());
        for (std::size_t idx = 0; idx < rows.size(); ++idx) {
            auto& slot = found_.realizers[masks[idx]];
            slot = std::min(slot, proj_.origin[rows[idx]]);
        }
    }

    const Projection& proj_;
    ShatterMode mode_;
    std::size_t budget_;
    std::size_t templates_ = 0;
    std::vector<Label> f1_, f2_;
    ShatterWitness found_;
};

void check_subset(const BehaviorTable& table, std::span<const std::size_t> subset) {
    for (std::size_t c : subset) {
        if (c >= table.n()) {
            throw InvalidArgument("subset index " + std::to_string(c) + " out of range for n = " +
                                  std::to_string(table.n()));
        }
    }
}

SubsetVerdict check(const BehaviorTable& table, std::span<const std::size_t> subset,
                    ShatterMode mode, std::size_t template_budget, ShatterWitness& out) {
    check_subset(table, subset);
    if (mode == ShatterMode::VC && table.d() != 2) {
        throw InvalidArgument("VC shattering requires d = 2, got d = " +
                              std::to_string(table.d()));
    }
    const std::size_t k = subset.size();
    if (table.empty()) return SubsetVerdict::not_shattered;
    if (k >= 63 || (k < 63 && (std::uint64_t{1} << k) > table.row_count())) {
        return SubsetVerdict::not_shattered;
    }
    Projection proj = project(table, subset);
    TemplateSearch search(proj, mode, template_budget);
    SubsetVerdict v = search.run(out);
    if (v == SubsetVerdict::shattered) out.subset.assign(subset.begin(), subset.end());
    return v;
}

}  // namespace

std::optional<ShatterWitness> is_shattered(const BehaviorTable& table,
                                           std::span<const std::size_t> subset, ShatterMode mode) {
    ShatterWitness w;
    if (check(table, subset, mode, std::numeric_limits<std::size_t>::max(), w) ==
        SubsetVerdict::shattered) {
        return w;
    }
    return std::nullopt;
}

std::optional<ShatterWitness> is_n_shattered(const BehaviorTable& table,
                                             std::span<const std::size_t> subset) {
    return is_shattered(table, subset, ShatterMode::N);
}

std::optional<ShatterWitness> is_g_shattered(const BehaviorTable& table,
                                             std::span<const std::size_t> subset) {
    return is_shattered(table, subset, ShatterMode::G);
}

std::optional<ShatterWitness> is_vc_shattered(const BehaviorTable& table,
                                              std::span<const std::size_t> subset) {
    return is_shattered(table, subset, ShatterMode::VC);
}

DimensionResult shatter_dimension(const BehaviorTable& table, ShatterMode mode,
                                  const SearchBudget& budget) {
    if (table.empty()) throw InvalidArgument("dimension search needs a nonempty table");
    if (mode == ShatterMode::VC && table.d() != 2) {
        throw InvalidArgument("VC dimension requires d = 2, got d = " + std::to_string(table.d()));
    }
    if (table.n() > 64) throw InvalidArgument("dimension search supports at most 64 points");

    const auto start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
        return budget.time_limit.count() > 0 &&
               std::chrono::steady_clock::now() - start > budget.time_limit;
    };

    DimensionResult result;
    using Subset = std::vector<std::size_t>;
    auto bits_of = [](const Subset& s) {
        std::uint64_t b = 0;
        for (std::size_t c : s) b |= std::uint64_t{1} << c;
        return b;
    };

    // Level-wise upward search; a k-subset is only examined when all of its
    // (k-1)-subsets are shattered. Candidates are produced in lexicographic
    // order, so the first witness at each level is the smallest subset.
    std::vector<Subset> level{Subset{}};
    std::unordered_set<std::uint64_t> level_bits{0};
    for (std::size_t k = 1; k <= table.n(); ++k) {
        std::vector<Subset> next;
        std::unordered_set<std::uint64_t> next_bits;
        std::optional<ShatterWitness> first;
        for (const Subset& base : level) {
            const std::size_t from = base.empty() ? 0 : base.back() + 1;
            for (std::size_t c = from; c < table.n(); ++c) {
                Subset cand = base;
                cand.push_back(c);
                const std::uint64_t cb = bits_of(cand);
                bool prunable = false;
                for (std::size_t drop = 0; drop + 1 < cand.size(); ++drop) {
                    if (!level_bits.count(cb & ~(std::uint64_t{1} << cand[drop]))) {
                        prunable = true;
                        break;
                    }
                }
                if (prunable) continue;
                if (result.subsets_examined >= budget.max_subsets || out_of_time()) {
                    result.status = DimensionStatus::lower_bound;
                    return result;
                }
                ++result.subsets_examined;
                ShatterWitness w;
                SubsetVerdict v = check(table, cand, mode, budget.max_templates, w);
                if (v == SubsetVerdict::unknown) {
                    result.status = DimensionStatus::lower_bound;
                    return result;
                }
                if (v == SubsetVerdict::shattered) {
                    if (!first) first = std::move(w);
                    next_bits.insert(cb);
                    next.push_back(std::move(cand));
                }
            }
        }
        if (next.empty()) break;
        result.dim = static_cast<int>(k);
        result.witness = std::move(first);
        level = std::move(next);
        level_bits = std::move(next_bits);
    }
    return result;
}

DimensionResult natarajan_dimension(const BehaviorTable& table, const SearchBudget& budget) {
    return shatter_dimension(table, ShatterMode::N, budget);
}

DimensionResult graph_dimension(const BehaviorTable& table, const SearchBudget& budget) {
    return shatter_dimension(table, ShatterMode::G, budget);
}

DimensionResult vc_dimension(const BehaviorTable& table, const SearchBudget& budget) {
    return shatter_dimension(table, ShatterMode::VC, budget);
}

DimensionResult dimension_lower_bound(const BehaviorTable& table, ShatterMode mode,
                                      LowerBoundStrategy strategy, std::uint64_t seed,
                                      std::size_t trials) {
    DimensionResult best;
    best.status = DimensionStatus::lower_bound;
    if (table.empty() || table.n() == 0) return best;

    auto grow = [&](const std::vector<std::size_t>& order) {
        std::vector<std::size_t> chosen;
        std::optional<ShatterWitness> witness;
        for (std::size_t c : order) {
            std::vector<std::size_t> cand = chosen;
            cand.insert(std::upper_bound(cand.begin(), cand.end(), c), c);
            ++best.subsets_examined;
            if (auto w = is_shattered(table, cand, mode)) {
                chosen = std::move(cand);
                witness = std::move(w);
            }
        }
        const int k = static_cast<int>(chosen.size());
        if (k > best.dim || (k == best.dim && k > 0 && chosen < best.witness->subset)) {
            best.dim = k;
            best.witness = std::move(witness);
        }
    };

    std::vector<std::size_t> order(table.n());
    std::iota(order.begin(), order.end(), 0);
    if (strategy == LowerBoundStrategy::random) {
        std::mt19937_64 rng(seed);
        for (std::size_t t = 0; t < trials; ++t) {
            std::shuffle(order.begin(), order.end(), rng);
            grow(order);
        }
    } else {
        // Most label-diverse columns first, then every rotation of that order.
        std::vector<std::size_t> diversity(table.n());
        for (std::size_t c = 0; c < table.n(); ++c) {
            std::vector<bool> present(static_cast<std::size_t>(table.d()) + 1, false);
            for (std::size_t r = 0; r < table.row_count(); ++r) present[table.at(r, c)] = true;
            diversity[c] = static_cast<std::size_t>(std::count(present.begin(), present.end(), true));
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return diversity[a] > diversity[b]; });
        const std::size_t passes = std::max<std::size_t>(1, std::min(trials, table.n()));
        for (std::size_t t = 0; t < passes; ++t) {
            grow(order);
            std::rotate(order.begin(), order.begin() + 1, order.end());
        }
    }
    return best;
}

}  // namespace natdim
