#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "natdim/core.hpp"

namespace natdim {

/// Solution of one of the dimension-bound inequalities: the largest integer
/// N for which 2^N does not exceed the growth bound at N. Construction
/// asserts that the inequality holds at max_N and fails at max_N + 1.
struct BoundReport {
    int theorem = 0;  // 1 tree, 2 forest, 3 binary/linear network, 4 ReLU network
    int p = 0;
    int L = 0;
    int d = 0;
    int T = 0;
    std::int64_t max_N = 0;
    std::string inequality_text;
    bool log_domain = true;
    bool exact_cross_checked = false;  // verdicts at the flip also confirmed in big-integer arithmetic
    std::vector<std::string> asymptotic;

    Json to_json() const;
};

/// log2 of (p(n+1))^(2^(L-1)-1) * d^(2^(L-1)).
long double tree_growth_bound(int p, std::int64_t n, int L, int d);

/// 2^N <= (p(N+1))^(T(2^(L-1)-1)) * d^(T 2^(L-1)), decided in the log domain
/// with a big-integer fallback near equality.
bool forest_inequality_holds(int p, int L, int T, int d, std::int64_t N);
/// The same inequality decided purely in long double log2 arithmetic.
bool forest_inequality_holds_log(int p, int L, int T, int d, std::int64_t N);
/// The same inequality in exact big-integer arithmetic.
bool forest_inequality_holds_exact(int p, int L, int T, int d, std::int64_t N);

/// N <= p(1+d) log2(8e(p+1) N (p+d^2) 2^p / (p(1+d))).
bool network_inequality_holds(int p, int d, std::int64_t N);

BoundReport solve_thm1(int p, int L, int d);
BoundReport solve_thm2(int p, int L, int T, int d);
/// Theorems 3 and 4 share one inequality; `theorem` only labels the report.
BoundReport solve_thm34(int p, int d, int theorem = 3);

/// Upper bound (467/100) log2(d) d_N on the graph dimension, compared
/// exactly: d_G is admitted iff 2^(100 d_G) <= d^(467 d_N).
struct BenDavidBound {
    int d_N = 0;
    int d = 2;

    long double value() const;
    bool admits(std::int64_t d_G) const;
    /// Largest admitted integer d_G.
    std::int64_t max_graph_dimension() const;
    std::string text() const;
    Json to_json() const;
};

BenDavidBound bendavid_gap(int d_N, int d);

}  // namespace natdim
