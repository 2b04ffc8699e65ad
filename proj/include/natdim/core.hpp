#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

namespace natdim {

using Json = nlohmann::json;

/// Class label in {1,...,d}. Zero is never a valid label.
using Label = std::uint8_t;

/// Largest class count supported by the packed label storage.
inline constexpr int kMaxClasses = 255;

/// Thrown when an operation's input violates its documented preconditions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Output space {1,...,d}.
class LabelSpace {
public:
    explicit LabelSpace(int d);

    int size() const { return d_; }
    bool contains(int label) const { return label >= 1 && label <= d_; }

    friend bool operator==(const LabelSpace&, const LabelSpace&) = default;

private:
    int d_;
};

/// Ordered list of n points in R^p. Point order fixes the column identity of
/// every behavior table built on the sample.
class Sample {
public:
    Sample() = default;
    Sample(std::size_t p, std::vector<std::vector<double>> points);

    std::size_t n() const { return points_.size(); }
    std::size_t p() const { return p_; }
    std::span<const double> point(std::size_t i) const { return points_.at(i); }
    const std::vector<std::vector<double>>& points() const { return points_; }

    /// Sub-sample keeping the listed point indices, in the listed order.
    Sample subset(std::span<const std::size_t> indices) const;

    Json to_json() const;
    static Sample from_json(const Json& j);

    friend bool operator==(const Sample&, const Sample&) = default;

private:
    std::size_t p_ = 0;
    std::vector<std::vector<double>> points_;
};

/// Set of distinct label vectors a hypothesis class realizes on a sample.
///
/// Rows are stored flat and row-major, sorted lexicographically with no
/// duplicates. A table on n = 0 points holds at most one (empty) row.
class BehaviorTable {
public:
    BehaviorTable(std::size_t n, LabelSpace labels);

    std::size_t n() const { return n_; }
    int d() const { return labels_.size(); }
    const LabelSpace& label_space() const { return labels_; }
    std::size_t row_count() const { return row_count_; }
    bool empty() const { return row_count_ == 0; }

    std::span<const Label> row(std::size_t r) const {
        return {cells_.data() + r * n_, n_};
    }
    Label at(std::size_t r, std::size_t col) const { return cells_[r * n_ + col]; }

    /// Optional sample the columns refer to.
    const std::shared_ptr<const Sample>& sample() const { return sample_; }
    void attach_sample(std::shared_ptr<const Sample> sample);

    /// Index of a row equal to `values`, if present.
    std::optional<std::size_t> find(std::span<const Label> values) const;

    Json to_json() const;
    static BehaviorTable from_json(const Json& j);

    std::vector<std::vector<int>> rows_as_ints() const;

    friend bool operator==(const BehaviorTable& a, const BehaviorTable& b) {
        return a.n_ == b.n_ && a.labels_ == b.labels_ && a.row_count_ == b.row_count_ &&
               a.cells_ == b.cells_;
    }

private:
    friend BehaviorTable table_from_sorted_cells(std::size_t, LabelSpace, std::vector<Label>,
                                                 std::size_t);

    std::size_t n_;
    LabelSpace labels_;
    std::size_t row_count_ = 0;
    std::vector<Label> cells_;
    std::shared_ptr<const Sample> sample_;
};

/// Builds a table from already sorted, duplicate-free flat cells.
BehaviorTable table_from_sorted_cells(std::size_t n, LabelSpace labels, std::vector<Label> cells,
                                      std::size_t row_count);

/// Deduplicates raw rows and returns them in lexicographic order.
/// Throws InvalidArgument on a row of the wrong length or an out-of-range label.
BehaviorTable dedup_behaviors(const std::vector<std::vector<int>>& raw_rows, const Sample& sample,
                              LabelSpace labels);

/// Same as dedup_behaviors without an attached sample; rows have length n.
BehaviorTable dedup_behaviors(const std::vector<std::vector<int>>& raw_rows, std::size_t n,
                              LabelSpace labels);

/// Projects rows onto `subset` columns (in the given order) and deduplicates.
/// Restriction to the empty set of a nonempty table yields one empty row.
BehaviorTable restrict(const BehaviorTable& table, std::span<const std::size_t> subset);

/// Incremental set of distinct label rows of fixed length.
///
/// Rows are packed into a 64-bit mixed-radix code when d^n fits, otherwise
/// kept as byte strings. Memory is proportional to the distinct rows seen.
class RowSet {
public:
    RowSet(std::size_t n, LabelSpace labels);

    /// Inserts a row; returns true if it was new.
    bool insert(std::span<const Label> row);
    std::size_t size() const;

    /// Canonical (sorted) table of everything inserted so far.
    BehaviorTable to_table() const;

private:
    std::size_t n_;
    LabelSpace labels_;
    bool packed_;
    std::unordered_set<std::uint64_t> codes_;
    std::unordered_set<std::string> strings_;
};

/// Lexicographic order of two equal-length rows.
bool row_less(std::span<const Label> a, std::span<const Label> b);

}  // namespace natdim
