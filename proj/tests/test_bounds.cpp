#include <doctest.h>

#include "natdim/bounds.hpp"
#include "oracles.hpp"

using namespace natdim;

TEST_CASE("closed-form tree growth bound") {
    CHECK(static_cast<double>(tree_growth_bound(1, 3, 2, 2)) == doctest::Approx(4.0));
    CHECK(static_cast<double>(tree_growth_bound(2, 10, 1, 3)) == doctest::Approx(std::log2(3.0)));
    const long double base = tree_growth_bound(2, 4, 2, 2);
    CHECK(tree_growth_bound(3, 4, 2, 2) >= base);
    CHECK(tree_growth_bound(2, 5, 2, 2) >= base);
    CHECK(tree_growth_bound(2, 4, 3, 2) >= base);
    CHECK(tree_growth_bound(2, 4, 2, 3) >= base);
    CHECK_THROWS_AS(tree_growth_bound(0, 4, 2, 2), InvalidArgument);
}

TEST_CASE("tree and forest bound values") {
    CHECK(solve_thm1(1, 2, 2).max_N == 4);
    CHECK(solve_thm1(1, 1, 1).max_N == 0);
    CHECK(solve_thm2(1, 2, 2, 2).max_N == 11);
    auto r = solve_thm2(1, 2, 2, 2);
    CHECK(r.exact_cross_checked);
    CHECK(r.asymptotic.size() == 2);
    for (int p = 1; p <= 3; ++p) {
        for (int L = 1; L <= 4; ++L) {
            for (int d = 1; d <= 4; ++d) {
                CHECK(solve_thm2(p, L, 1, d).max_N == solve_thm1(p, L, d).max_N);
                std::int64_t prev = -1;
                for (int T = 1; T <= 3; ++T) {
                    const auto m = solve_thm2(p, L, T, d).max_N;
                    CHECK(m >= prev);
                    prev = m;
                }
            }
        }
    }
}

TEST_CASE("solver agrees with a direct 128-bit scan") {
    for (int p = 1; p <= 3; ++p)
        for (int L = 1; L <= 3; ++L)
            for (int T = 1; T <= 3; ++T)
                for (int d = 1; d <= 3; ++d)
                    CHECK(solve_thm2(p, L, T, d).max_N == oracle::forest_max_n_scan(p, L, T, d));
}

TEST_CASE("log-domain and exact verdicts agree") {
    for (int p = 1; p <= 3; ++p)
        for (int L = 1; L <= 3; ++L)
            for (int T = 1; T <= 2; ++T)
                for (int d = 1; d <= 4; ++d)
                    for (int N = 0; N <= 30; ++N) {
                        const bool exact = forest_inequality_holds_exact(p, L, T, d, N);
                        CHECK(forest_inequality_holds_log(p, L, T, d, N) == exact);
                        CHECK(forest_inequality_holds(p, L, T, d, N) == exact);
                        CHECK(oracle::forest_inequality_small(p, L, T, d, N) == exact);
                    }
}

TEST_CASE("large trees stay solvable and certified") {
    auto r = solve_thm1(5, 12, 7);
    CHECK(forest_inequality_holds(5, 12, 1, 7, r.max_N));
    CHECK_FALSE(forest_inequality_holds(5, 12, 1, 7, r.max_N + 1));
    CHECK(solve_thm1(5, 13, 7).max_N >= r.max_N);
}

TEST_CASE("network bound values") {
    // Reference values from a 50-digit scan of the displayed inequality.
    CHECK(solve_thm34(1, 2).max_N == 37);
    CHECK(solve_thm34(2, 2).max_N == 86);
    CHECK(solve_thm34(2, 3).max_N == 123);
    CHECK(solve_thm34(4, 2).max_N == 215);
    CHECK(solve_thm34(6, 3, 4).max_N == 518);
    CHECK(solve_thm34(6, 3, 4).theorem == 4);
    for (int p = 1; p <= 8; ++p) {
        for (int d = 2; d <= 6; ++d) {
            const auto m = solve_thm34(p, d).max_N;
            CHECK(network_inequality_holds(p, d, m));
            CHECK_FALSE(network_inequality_holds(p, d, m + 1));
            CHECK(solve_thm34(p + 1, d).max_N >= m);
            CHECK(solve_thm34(p, d + 1).max_N >= m);
        }
    }
    CHECK_FALSE(network_inequality_holds(2, 2, 0));
    CHECK_THROWS_AS(solve_thm34(2, 1), InvalidArgument);
    CHECK_THROWS_AS(solve_thm34(2, 2, 5), InvalidArgument);
}

TEST_CASE("graph-dimension bound") {
    auto b = bendavid_gap(2, 2);
    CHECK(static_cast<double>(b.value()) == doctest::Approx(9.34));
    CHECK(b.admits(9));
    CHECK_FALSE(b.admits(10));
    CHECK(b.max_graph_dimension() == 9);
    CHECK(static_cast<double>(bendavid_gap(3, 4).value()) == doctest::Approx(28.02));
    CHECK(bendavid_gap(3, 4).max_graph_dimension() == 28);
    auto zero = bendavid_gap(0, 3);
    CHECK(zero.admits(0));
    CHECK_FALSE(zero.admits(1));
    for (int dn = 1; dn <= 5; ++dn)
        for (int d = 2; d <= 9; ++d) {
            auto g = bendavid_gap(dn, d);
            CHECK(g.admits(g.max_graph_dimension()));
            CHECK_FALSE(g.admits(g.max_graph_dimension() + 1));
        }
    CHECK_THROWS_AS(bendavid_gap(1, 1), InvalidArgument);
    CHECK_THROWS_AS(bendavid_gap(-1, 2), InvalidArgument);
}

TEST_CASE("bound report json") {
    auto j = solve_thm2(1, 2, 2, 2).to_json();
    CHECK(j["theorem"] == 2);
    CHECK(j["max_N"] == 11);
    CHECK(j["params"]["T"] == 2);
}
