#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "natdim/core.hpp"

namespace natdim {

/// Shattering notion: Natarajan (two reference labelings), graph (one
/// reference labeling, "equal on T, differ off T") or VC (binary patterns).
enum class ShatterMode { N, G, VC };

std::string to_string(ShatterMode mode);
ShatterMode shatter_mode_from_string(const std::string& s);

/// Evidence that a subset of sample points is shattered.
///
/// Bit i of a realizer key refers to subset[i]; a set bit means the point is
/// in T. For N mode a realizer row equals f1 on T and f2 off T. For G mode
/// `f1` holds the single reference labeling f and `f2` is empty. VC mode
/// uses the fixed reference pair f1 = (1,...,1), f2 = (2,...,2).
struct ShatterWitness {
    ShatterMode mode = ShatterMode::N;
    std::vector<std::size_t> subset;
    std::vector<Label> f1;
    std::vector<Label> f2;
    std::vector<std::size_t> realizers;  // indexed by T bitmask, size 2^|subset|

    Json to_json() const;
};

/// Re-checks every witness invariant directly against the table rows.
bool verify_witness(const BehaviorTable& table, const ShatterWitness& witness);

/// Search limits for the dimension searches. Exceeding any limit stops the
/// search and downgrades the result to a certified lower bound.
struct SearchBudget {
    std::size_t max_subsets = std::numeric_limits<std::size_t>::max();
    std::size_t max_templates = std::numeric_limits<std::size_t>::max();
    std::chrono::milliseconds time_limit{0};  // zero means unlimited

    static SearchBudget unlimited() { return {}; }
};

enum class DimensionStatus { exact, lower_bound };

std::string to_string(DimensionStatus status);

struct DimensionResult {
    int dim = 0;
    std::optional<ShatterWitness> witness;  // present whenever dim >= 1
    DimensionStatus status = DimensionStatus::exact;
    std::size_t subsets_examined = 0;

    bool exact() const { return status == DimensionStatus::exact; }
    Json to_json() const;
};

std::optional<ShatterWitness> is_n_shattered(const BehaviorTable& table,
                                             std::span<const std::size_t> subset);
std::optional<ShatterWitness> is_g_shattered(const BehaviorTable& table,
                                             std::span<const std::size_t> subset);
/// Requires d = 2.
std::optional<ShatterWitness> is_vc_shattered(const BehaviorTable& table,
                                              std::span<const std::size_t> subset);
std::optional<ShatterWitness> is_shattered(const BehaviorTable& table,
                                           std::span<const std::size_t> subset, ShatterMode mode);

DimensionResult natarajan_dimension(const BehaviorTable& table,
                                    const SearchBudget& budget = SearchBudget::unlimited());
DimensionResult graph_dimension(const BehaviorTable& table,
                                const SearchBudget& budget = SearchBudget::unlimited());
/// Requires d = 2.
DimensionResult vc_dimension(const BehaviorTable& table,
                             const SearchBudget& budget = SearchBudget::unlimited());
DimensionResult shatter_dimension(const BehaviorTable& table, ShatterMode mode,
                                  const SearchBudget& budget = SearchBudget::unlimited());

enum class LowerBoundStrategy { random, greedy };

/// Randomized or greedy growth of a shattered subset. Always returns a
/// certified lower bound; never exceeds the exact dimension.
DimensionResult dimension_lower_bound(const BehaviorTable& table, ShatterMode mode,
                                      LowerBoundStrategy strategy, std::uint64_t seed,
                                      std::size_t trials);

}  // namespace natdim
