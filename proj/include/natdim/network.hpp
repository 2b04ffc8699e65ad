#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "natdim/core.hpp"
#include "natdim/growth.hpp"

namespace natdim {

enum class Activation { binary, linear, relu };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// Reference to a node; layer 0 is the input layer (one node per feature).
struct NodeRef {
    std::size_t layer = 0;
    std::size_t index = 0;
    friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct HiddenNode {
    std::vector<NodeRef> inputs;
    Activation activation = Activation::linear;
};

/// Feed-forward structure: hidden layers 1..L-1 followed by a d-node output
/// layer with identity activation, fully connected to the last hidden layer
/// (or to the inputs when there are no hidden layers). The label is the
/// argmax of the outputs.
struct NetworkStructure {
    std::size_t m = 1;
    std::vector<std::vector<HiddenNode>> hidden;
    int d = 2;
    std::size_t p_budget = 0;
    /// Explicit output connections, when given in the source description.
    std::optional<std::vector<std::vector<NodeRef>>> output_inputs;

    std::size_t hidden_parameter_count() const;
    std::size_t last_hidden_width() const;
    std::size_t output_parameter_count() const { return static_cast<std::size_t>(d) * last_hidden_width(); }

    static NetworkStructure from_json(const Json& j);
    Json to_json() const;
};

/// Every violated structural invariant, one message each. Empty means valid.
std::vector<std::string> validate_structure(const NetworkStructure& s);

/// Weights flattened in (layer, node, input) order; output weights are
/// row-major d x last_hidden_width.
struct WeightAssignment {
    std::vector<double> hidden;
    std::vector<double> output;
};

struct ForwardResult {
    std::vector<double> scores;
    Label label = 1;
};

ForwardResult forward(const NetworkStructure& s, const WeightAssignment& w,
                      std::span<const double> x);

/// b_{k,k'} = 1{score_k > score_k'} for k < k', ordered (1,2),(1,3),...,(d-1,d).
std::vector<std::uint8_t> pairwise_comparators(std::span<const double> scores);

/// The class beating every other class under the comparator bits, if any.
std::optional<Label> label_from_comparators(std::span<const std::uint8_t> bits, int d);

struct WeightSampler {
    enum class Kind { uniform, grid } kind = Kind::uniform;
    double lo = -1.0;
    double hi = 1.0;
    std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};

    static WeightSampler from_json(const Json& j);
    Json to_json() const;
    WeightAssignment draw(const NetworkStructure& s, std::mt19937_64& rng) const;
};

/// Distinct label vectors over `trials` sampled weight assignments; trial t
/// draws from trial_rng(seed, t). Always flagged non-exhaustive.
EnumeratedBehaviors sample_behaviors(const NetworkStructure& s, const Sample& sample,
                                     const WeightSampler& sampler, std::size_t trials,
                                     std::uint64_t seed);

/// Every assignment of grid values to all weights; throws when the sweep
/// would exceed `cap` assignments. Exhaustive only with respect to the grid.
EnumeratedBehaviors grid_behaviors(const NetworkStructure& s, const Sample& sample,
                                   std::span<const double> values, std::size_t cap);

}  // namespace natdim
