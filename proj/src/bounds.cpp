#include "natdim/bounds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace natdim {

namespace mp = boost::multiprecision;

namespace {

constexpr std::int64_t kScanCap = 1'000'000'000;
// Largest N for which the exact path is used as a tie-breaker.
constexpr std::int64_t kExactLimit = 2'000'000;

void require_positive(int v, const char* name) {
    if (v < 1) throw InvalidArgument(std::string(name) + " must be >= 1");
}

long double pow2_exponent(int L) { return std::ldexp(1.0L, L - 1); }

long double forest_rhs_log2(int p, int L, int T, int d, std::int64_t N) {
    return static_cast<long double>(T) * tree_growth_bound(p, N, L, d);
}

mp::cpp_int ipow(mp::cpp_int base, std::uint64_t exp) {
    mp::cpp_int result = 1;
    while (exp > 0) {
        if (exp & 1u) result *= base;
        exp >>= 1;
        if (exp) base *= base;
    }
    return result;
}

long double network_rhs_log2(int p, int d, std::int64_t N) {
    const long double lp = p, ld = d;
    const long double vars = lp * (1 + ld);
    return vars * (std::log2(8.0L * std::numbers::e_v<long double>) + std::log2(lp + 1) +
                   std::log2(static_cast<long double>(N)) + std::log2(lp + ld * ld) + lp -
                   std::log2(vars));
}

std::string render(long double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

long double tree_growth_bound(int p, std::int64_t n, int L, int d) {
    require_positive(p, "p");
    require_positive(L, "L");
    require_positive(d, "d");
    if (n < 0) throw InvalidArgument("n must be >= 0");
    const long double leaves = pow2_exponent(L);
    return (leaves - 1) * std::log2(static_cast<long double>(p) * static_cast<long double>(n + 1)) +
           leaves * std::log2(static_cast<long double>(d));
}

bool forest_inequality_holds_log(int p, int L, int T, int d, std::int64_t N) {
    return static_cast<long double>(N) <= forest_rhs_log2(p, L, T, d, N);
}

bool forest_inequality_holds_exact(int p, int L, int T, int d, std::int64_t N) {
    require_positive(p, "p");
    require_positive(L, "L");
    require_positive(T, "T");
    require_positive(d, "d");
    if (L > 40) throw InvalidArgument("exact evaluation supports L <= 40");
    const std::uint64_t leaves = std::uint64_t{1} << (L - 1);
    const auto t = static_cast<std::uint64_t>(T);
    const mp::cpp_int lhs = mp::cpp_int(1) << static_cast<unsigned>(N);
    // Stop multiplying once the right side already dominates.
    mp::cpp_int rhs = ipow(mp::cpp_int(d), t * leaves);
    if (rhs >= lhs) return true;
    const mp::cpp_int base = mp::cpp_int(p) * mp::cpp_int(N + 1);
    if (base == 1) return false;
    std::uint64_t remaining = t * (leaves - 1);
    while (remaining > 0 && rhs < lhs) {
        rhs *= base;
        --remaining;
    }
    return rhs >= lhs;
}

bool forest_inequality_holds(int p, int L, int T, int d, std::int64_t N) {
    const long double rhs = forest_rhs_log2(p, L, T, d, N);
    const long double lhs = static_cast<long double>(N);
    const long double margin = 1e-9L * std::max<long double>(1, lhs);
    if (std::abs(rhs - lhs) < margin && N <= kExactLimit && L <= 40) {
        return forest_inequality_holds_exact(p, L, T, d, N);
    }
    return lhs <= rhs;
}

bool network_inequality_holds(int p, int d, std::int64_t N) {
    require_positive(p, "p");
    if (d < 2) throw InvalidArgument("d must be >= 2");
    if (N <= 0) return false;  // right side is 0 at N = 0
    return static_cast<long double>(N) <= network_rhs_log2(p, d, N);
}

namespace {

/// Largest N >= start with pred(N), given pred(start) and that the set of
/// N >= start satisfying pred is an interval.
template <class Pred>
std::int64_t last_true_from(std::int64_t start, Pred pred) {
    std::int64_t lo = start;
    std::int64_t step = 1;
    std::int64_t hi = start + step;
    while (pred(hi)) {
        lo = hi;
        step *= 2;
        hi = start + step;
        if (hi > kScanCap) {
            throw std::runtime_error("bound scan exceeded cap of " + std::to_string(kScanCap));
        }
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (pred(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

BoundReport solve_thm2(int p, int L, int T, int d) {
    require_positive(p, "p");
    require_positive(L, "L");
    require_positive(T, "T");
    require_positive(d, "d");
    if (L > 62) throw InvalidArgument("L must be <= 62");
    auto holds = [&](std::int64_t N) { return forest_inequality_holds(p, L, T, d, N); };
    // N - log2(RHS) is convex in N and the inequality holds at N = 0, so the
    // solutions form an interval starting at 0.
    BoundReport r;
    r.theorem = 2;
    r.p = p;
    r.L = L;
    r.d = d;
    r.T = T;
    r.max_N = last_true_from(0, holds);
    if (!holds(r.max_N) || holds(r.max_N + 1)) {
        throw std::logic_error("forest bound flip certification failed");
    }
    if (r.max_N + 1 <= 4096 && L <= 40) {
        const bool a = forest_inequality_holds_exact(p, L, T, d, r.max_N);
        const bool b = forest_inequality_holds_exact(p, L, T, d, r.max_N + 1);
        if (!a || b) throw std::logic_error("forest bound disagrees with exact arithmetic");
        r.exact_cross_checked = true;
    }
    const std::string leaves = "2^" + std::to_string(L - 1);
    r.inequality_text = "2^N <= (" + std::to_string(p) + "(N+1))^(" + std::to_string(T) + "*(" +
                        leaves + "-1)) * " + std::to_string(d) + "^(" + std::to_string(T) + "*" +
                        leaves + ")";
    r.asymptotic = {"O(L T 2^L log(pd)) [theorem statement]",
                    "O(L T 2^L log(pdT)) [proof conclusion]"};
    return r;
}

BoundReport solve_thm1(int p, int L, int d) {
    BoundReport r = solve_thm2(p, L, 1, d);
    r.theorem = 1;
    r.T = 0;
    const std::string leaves = "2^" + std::to_string(L - 1);
    r.inequality_text = "2^N <= (" + std::to_string(p) + "(N+1))^(" + leaves + "-1) * " +
                        std::to_string(d) + "^(" + leaves + ")";
    r.asymptotic = {"O(L 2^L log(pd))"};
    return r;
}

BoundReport solve_thm34(int p, int d, int theorem) {
    require_positive(p, "p");
    if (d < 2) throw InvalidArgument("d must be >= 2");
    if (theorem != 3 && theorem != 4) throw InvalidArgument("theorem must be 3 or 4");
    auto holds = [&](std::int64_t N) { return network_inequality_holds(p, d, N); };
    // log2 of the right side is concave in N with slope p(1+d)/(N ln 2), so
    // N - RHS is smallest near N = p(1+d)/ln 2 and the solutions form an
    // interval around that point.
    const auto vars = static_cast<long double>(p) * (1 + d);
    std::int64_t peak = std::max<std::int64_t>(1, std::llround(vars / std::numbers::ln2_v<long double>));
    if (!holds(peak)) {
        if (holds(peak + 1)) ++peak;
        else if (peak > 1 && holds(peak - 1)) --peak;
        else throw std::logic_error("network inequality has no positive solution");
    }
    BoundReport r;
    r.theorem = theorem;
    r.p = p;
    r.d = d;
    r.max_N = last_true_from(peak, holds);
    if (!holds(r.max_N) || holds(r.max_N + 1)) {
        throw std::logic_error("network bound flip certification failed");
    }
    r.inequality_text = "2^N <= (8e*" + std::to_string(p + 1) + "*N*" + std::to_string(p + d * d) +
                        "*2^" + std::to_string(p) + "/" + std::to_string(p * (1 + d)) + ")^" +
                        std::to_string(p * (1 + d));
    r.asymptotic = {"O(d p^2)"};
    return r;
}

Json BoundReport::to_json() const {
    Json params{{"p", p}, {"d", d}};
    if (theorem == 1 || theorem == 2) params["L"] = L;
    if (theorem == 2) params["T"] = T;
    return Json{{"theorem", theorem},
                {"params", params},
                {"max_N", max_N},
                {"inequality", inequality_text},
                {"log_domain", log_domain},
                {"exact_cross_checked", exact_cross_checked},
                {"asymptotic", asymptotic}};
}

long double BenDavidBound::value() const {
    return 4.67L * std::log2(static_cast<long double>(d)) * static_cast<long double>(d_N);
}

bool BenDavidBound::admits(std::int64_t d_G) const {
    if (d_G < 0) return true;
    if (d_N == 0) return d_G == 0;
    const mp::cpp_int lhs = mp::cpp_int(1) << static_cast<unsigned>(100 * d_G);
    const mp::cpp_int rhs = ipow(mp::cpp_int(d), 467u * static_cast<std::uint64_t>(d_N));
    return lhs <= rhs;
}

std::int64_t BenDavidBound::max_graph_dimension() const {
    if (d_N == 0) return 0;
    const mp::cpp_int rhs = ipow(mp::cpp_int(d), 467u * static_cast<std::uint64_t>(d_N));
    // 2^(100 g) <= X  <=>  100 g <= floor(log2 X).
    return static_cast<std::int64_t>(mp::msb(rhs) / 100);
}

std::string BenDavidBound::text() const {
    return "(467/100)*log2(" + std::to_string(d) + ")*" + std::to_string(d_N) + " = " + render(value());
}

Json BenDavidBound::to_json() const {
    return Json{{"d_N", d_N},
                {"d", d},
                {"value", static_cast<double>(value())},
                {"max_graph_dimension", max_graph_dimension()},
                {"expression", text()}};
}

BenDavidBound bendavid_gap(int d_N, int d) {
    if (d < 2) throw InvalidArgument("the graph-dimension bound needs d >= 2");
    if (d_N < 0) throw InvalidArgument("d_N must be >= 0");
    return BenDavidBound{d_N, d};
}

}  // namespace natdim
