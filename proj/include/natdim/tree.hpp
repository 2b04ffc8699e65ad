#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "natdim/core.hpp"

namespace natdim {

/// Depth-L, d-class decision trees over p real features. Depth L means L
/// levels: 2^(L-1) - 1 internal nodes and 2^(L-1) leaves; L = 1 is a constant.
struct TreeClassSpec {
    int L = 1;
    int p = 1;
    int d = 2;

    void validate() const;
    std::size_t internal_nodes() const { return (std::size_t{1} << (L - 1)) - 1; }
    std::size_t leaves() const { return std::size_t{1} << (L - 1); }

    Json to_json() const;
};

struct ForestClassSpec {
    TreeClassSpec tree;
    int T = 1;

    void validate() const;
    Json to_json() const;
};

/// Internal node rule: go left iff x[feature] <= threshold. Feature is 0-based.
struct SplitRule {
    std::size_t feature = 0;
    double threshold = 0.0;
};

/// A fully specified tree. Internal nodes are stored in heap order (children
/// of node v are 2v+1 and 2v+2); leaves are numbered left to right.
struct ConcreteTree {
    int L = 1;
    std::size_t p = 1;
    std::vector<SplitRule> nodes;
    std::vector<Label> leaves;
};

Label eval_tree(const ConcreteTree& tree, std::span<const double> x);

/// One distinct behavior of a single threshold query on the sample, with a
/// rule that realizes it.
struct QueryBehavior {
    SplitRule rule;
    std::vector<std::uint8_t> goes_left;  // 1{x_i[feature] <= threshold}
};

/// Every distinct threshold-query behavior on the sample. Thresholds are
/// canonical: -inf, midpoints between consecutive distinct coordinates, and
/// +inf, per feature. At most p(n+1) entries.
std::vector<QueryBehavior> threshold_behaviors(const Sample& sample);

/// Raised when an enumeration's projected size exceeds the caller's cap.
class EnumerationCapExceeded : public std::runtime_error {
public:
    EnumerationCapExceeded(const std::string& what, long double projected)
        : std::runtime_error(what), projected_(projected) {}
    long double projected() const { return projected_; }

private:
    long double projected_;
};

inline constexpr std::size_t kDefaultEnumerationCap = 50'000'000;

/// Node-query and leaf-label assignment that produced a row.
struct TreeRowOrigin {
    std::vector<std::size_t> queries;  // index into threshold_behaviors, per internal node
    std::vector<Label> leaves;
};

/// Exact set of label vectors realizable by depth-L trees on the sample.
BehaviorTable enumerate_tree_behaviors(const TreeClassSpec& spec, const Sample& sample,
                                       std::size_t cap = kDefaultEnumerationCap);

/// As enumerate_tree_behaviors, additionally returning one origin per row.
BehaviorTable enumerate_tree_behaviors(const TreeClassSpec& spec, const Sample& sample,
                                       std::size_t cap, std::vector<TreeRowOrigin>& origins);

/// Builds the concrete tree described by an origin.
ConcreteTree reconstruct_tree(const TreeClassSpec& spec, const std::vector<QueryBehavior>& queries,
                              const TreeRowOrigin& origin);

/// Plurality vote; ties go to the smallest class index.
Label forest_vote(std::span<const Label> votes, int d);

/// Exact set of vote-aggregated label vectors of T-tree forests.
BehaviorTable enumerate_forest_behaviors(const ForestClassSpec& spec, const Sample& sample,
                                         std::size_t cap = kDefaultEnumerationCap);

}  // namespace natdim
