#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "natdim/core.hpp"

namespace natdim {

/// Behaviors produced for one sample, flagged non-exhaustive when they are
/// only a sampled subset of what the class realizes.
struct EnumeratedBehaviors {
    BehaviorTable table;
    bool exhaustive = true;
};

using BehaviorEnumerator = std::function<EnumeratedBehaviors(const Sample&)>;

/// Draws an n-point sample from the given generator. Samplers must draw
/// points sequentially so that the first n points of an (n+1)-point draw
/// match the n-point draw from the same generator state.
using SampleSampler = std::function<Sample(std::size_t n, std::mt19937_64& rng)>;

struct GrowthReport {
    std::size_t n = 0;
    std::size_t count = 0;
    Sample sample_used;
    bool exhaustive = true;
    std::optional<std::uint64_t> seed;

    Json to_json() const;
};

GrowthReport growth_on_sample(const BehaviorEnumerator& enumerator, const Sample& sample);

/// Maximum distinct-behavior count over `trials` sampled point sets: a
/// certified lower bound on the growth function at n.
GrowthReport growth_estimate(const BehaviorEnumerator& enumerator, std::size_t n,
                             const SampleSampler& sampler, std::size_t trials, std::uint64_t seed);

/// Points with coordinates uniform on [lo, hi), redrawing any coordinate
/// that repeats an earlier value of the same feature.
SampleSampler generic_sampler(std::size_t p, double lo = 0.0, double hi = 1.0);

/// One generic sample of n points in R^p drawn from `seed`.
Sample generic_sample(std::size_t p, std::size_t n, std::uint64_t seed);

/// Per-trial generator derived from (seed, trial) so trials are schedule-independent.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

std::string growth_csv_header();
std::string growth_csv_row(const std::string& class_spec, const GrowthReport& report);

}  // namespace natdim
