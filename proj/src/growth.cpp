#include "natdim/growth.hpp"

#include <cstring>
#include <set>
#include <sstream>

namespace natdim {

Json GrowthReport::to_json() const {
    Json j{{"n", n}, {"count", count}, {"exhaustive", exhaustive}, {"sample", sample_used.to_json()}};
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    return j;
}

GrowthReport growth_on_sample(const BehaviorEnumerator& enumerator, const Sample& sample) {
    EnumeratedBehaviors b = enumerator(sample);
    GrowthReport r;
    r.n = sample.n();
    r.count = b.table.row_count();
    r.sample_used = sample;
    r.exhaustive = b.exhaustive;
    return r;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

namespace {

std::uint64_t sample_hash(const Sample& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& pt : s.points()) {
        for (double v : pt) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        }
    }
    return h;
}

}  // namespace

GrowthReport growth_estimate(const BehaviorEnumerator& enumerator, std::size_t n,
                             const SampleSampler& sampler, std::size_t trials, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("growth_estimate needs n >= 1");
    std::optional<GrowthReport> best;
    std::uint64_t best_hash = 0;
    for (std::size_t t = 0; t < std::max<std::size_t>(trials, 1); ++t) {
        auto rng = trial_rng(seed, t);
        GrowthReport r = growth_on_sample(enumerator, sampler(n, rng));
        const std::uint64_t h = sample_hash(r.sample_used);
        if (!best || r.count > best->count || (r.count == best->count && h < best_hash)) {
            best = std::move(r);
            best_hash = h;
        }
    }
    best->seed = seed;
    return *best;
}

SampleSampler generic_sampler(std::size_t p, double lo, double hi) {
    return [p, lo, hi](std::size_t n, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> coord(lo, hi);
        std::vector<std::set<double>> used(p);
        std::vector<std::vector<double>> pts(n, std::vector<double>(p));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t s = 0; s < p; ++s) {
                double v;
                do {
                    v = coord(rng);
                } while (!used[s].insert(v).second);
                pts[i][s] = v;
            }
        }
        return Sample(p, std::move(pts));
    };
}

Sample generic_sample(std::size_t p, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return generic_sampler(p)(n, rng);
}

std::string growth_csv_header() { return "class_spec,n,count,exhaustive,seed"; }

std::string growth_csv_row(const std::string& class_spec, const GrowthReport& report) {
    std::ostringstream os;
    os << '"';
    for (char c : class_spec) {
        if (c == '"') os << '"';
        os << c;
    }
    os << '"' << ',' << report.n << ',' << report.count << ','
       << (report.exhaustive ? "true" : "false") << ',';
    if (report.seed) os << *report.seed;
    return os.str();
}

}  // namespace natdim
