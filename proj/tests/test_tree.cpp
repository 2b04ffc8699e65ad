#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "natdim/bounds.hpp"
#include "natdim/shattering.hpp"
#include "natdim/tree.hpp"
#include "oracles.hpp"

using namespace natdim;

namespace {

oracle::Rows as_set(const BehaviorTable& t) {
    auto v = t.rows_as_ints();
    return {v.begin(), v.end()};
}

Sample small_sample(std::mt19937_64& rng, std::size_t p, std::size_t n) {
    // Small integer grid so repeated coordinates occur.
    std::vector<std::vector<double>> pts(n, std::vector<double>(p));
    for (auto& x : pts) for (auto& c : x) c = static_cast<double>(rng() % 5);
    return Sample(p, pts);
}

}  // namespace

TEST_CASE("eval_tree follows <= to the left") {
    ConcreteTree constant{1, 1, {}, {3}};
    std::vector<double> x{42.0};
    CHECK(eval_tree(constant, x) == 3);

    ConcreteTree stump{2, 1, {{0, 1.5}}, {1, 2}};
    std::vector<double> a{1.0}, b{2.0}, edge{1.5};
    CHECK(eval_tree(stump, a) == 1);
    CHECK(eval_tree(stump, b) == 2);
    CHECK(eval_tree(stump, edge) == 1);
    std::vector<double> wrong{1.0, 2.0};
    CHECK_THROWS(eval_tree(stump, wrong));
}

TEST_CASE("threshold behaviors on a line") {
    auto q = threshold_behaviors(Sample(1, {{1.0}, {2.0}, {3.0}}));
    REQUIRE(q.size() == 4);
    std::set<std::vector<std::uint8_t>> got;
    for (const auto& b : q) got.insert(b.goes_left);
    CHECK(got == std::set<std::vector<std::uint8_t>>{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
}

TEST_CASE("threshold behaviors collapse on a repeated coordinate") {
    auto q = threshold_behaviors(Sample(2, {{1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}}));
    CHECK(q.size() == 4);  // feature 2 only adds all-left and all-right, already present
    CHECK(q.size() < 2 * 4);
}

TEST_CASE("threshold behaviors are realized by their rules and bounded by p(n+1)") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t p = 1 + rng() % 3, n = 1 + rng() % 6;
        Sample s = small_sample(rng, p, n);
        auto q = threshold_behaviors(s);
        CHECK(q.size() <= p * (n + 1));
        std::set<std::vector<std::uint8_t>> distinct;
        for (const auto& b : q) {
            distinct.insert(b.goes_left);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(b.goes_left[i] == (s.point(i)[b.rule.feature] <= b.rule.threshold ? 1 : 0));
            }
        }
        CHECK(distinct.size() == q.size());
        // Oracle: every threshold from a dense sweep gives a listed behavior.
        for (std::size_t f = 0; f < p; ++f) {
            for (double th = -1.0; th <= 6.0; th += 0.25) {
                std::vector<std::uint8_t> b(n);
                for (std::size_t i = 0; i < n; ++i) b[i] = s.point(i)[f] <= th;
                CHECK(distinct.count(b) == 1);
            }
        }
    }
}

TEST_CASE("small tree tables") {
    Sample two(1, {{1.0}, {2.0}});
    for (int d = 1; d <= 4; ++d) {
        CHECK(enumerate_tree_behaviors(TreeClassSpec{1, 1, d}, two).row_count() == static_cast<std::size_t>(d));
    }
    CHECK(enumerate_tree_behaviors(TreeClassSpec{2, 1, 2}, two).row_count() == 4);
}

TEST_CASE("tree tables stay under the closed-form count") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        TreeClassSpec spec{1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 2),
                           2 + static_cast<int>(rng() % 2)};
        Sample s = small_sample(rng, static_cast<std::size_t>(spec.p), 1 + rng() % 5);
        auto t = enumerate_tree_behaviors(spec, s);
        const long double bound = std::exp2(tree_growth_bound(spec.p, static_cast<std::int64_t>(s.n()), spec.L, spec.d));
        CHECK(static_cast<long double>(t.row_count()) <= bound + 1e-6L);
    }
}

TEST_CASE("every row has a reconstructible concrete tree") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        TreeClassSpec spec{1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 2),
                           2 + static_cast<int>(rng() % 2)};
        Sample s = small_sample(rng, static_cast<std::size_t>(spec.p), 1 + rng() % 4);
        std::vector<TreeRowOrigin> origins;
        auto t = enumerate_tree_behaviors(spec, s, kDefaultEnumerationCap, origins);
        REQUIRE(origins.size() == t.row_count());
        auto q = threshold_behaviors(s);
        for (std::size_t r = 0; r < t.row_count(); ++r) {
            ConcreteTree tree = reconstruct_tree(spec, q, origins[r]);
            for (std::size_t i = 0; i < s.n(); ++i) CHECK(eval_tree(tree, s.point(i)) == t.at(r, i));
        }
    }
}

TEST_CASE("enumeration equals saturated random-tree sampling") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        TreeClassSpec spec{1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 2),
                           2 + static_cast<int>(rng() % 2)};
        Sample s = small_sample(rng, static_cast<std::size_t>(spec.p), 1 + rng() % 4);
        auto t = enumerate_tree_behaviors(spec, s);
        auto sampled = oracle::sample_tree_behaviors(spec.L, s.p(), spec.d, s.points(), 1000 + trial);
        CHECK(sampled.saturated);
        CHECK(sampled.rows == as_set(t));
    }
}

TEST_CASE("enumeration cap is enforced") {
    Sample s(2, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    CHECK_THROWS_AS(enumerate_tree_behaviors(TreeClassSpec{3, 2, 3}, s, 100), EnumerationCapExceeded);
}

TEST_CASE("forest vote breaks ties toward the smallest label") {
    std::vector<Label> a{1, 2, 2}, b{1, 2}, c{3, 3, 1, 1, 2};
    CHECK(forest_vote(a, 2) == 2);
    CHECK(forest_vote(b, 2) == 1);
    CHECK(forest_vote(c, 3) == 1);
    CHECK_THROWS(forest_vote(std::span<const Label>{}, 2));
}

TEST_CASE("forest tables") {
    Sample two(1, {{1.0}, {2.0}});
    TreeClassSpec stump{2, 1, 2};
    auto tree = enumerate_tree_behaviors(stump, two);
    CHECK(enumerate_forest_behaviors(ForestClassSpec{stump, 1}, two) == tree);
    auto pair = enumerate_forest_behaviors(ForestClassSpec{stump, 2}, two);
    CHECK(pair.row_count() <= 16);
    CHECK(as_set(pair) == oracle::forest_from_tree_rows(as_set(tree), 2, 2));

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        TreeClassSpec spec{1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2),
                           2 + static_cast<int>(rng() % 2)};
        const int T = 1 + static_cast<int>(rng() % 3);
        Sample s = small_sample(rng, static_cast<std::size_t>(spec.p), 1 + rng() % 4);
        auto rows = as_set(enumerate_tree_behaviors(spec, s));
        auto forest = enumerate_forest_behaviors(ForestClassSpec{spec, T}, s);
        CHECK(as_set(forest) == oracle::forest_from_tree_rows(rows, T, spec.d));
        CHECK(static_cast<double>(forest.row_count()) <= std::pow(static_cast<double>(rows.size()), T));
    }
}

TEST_CASE("tree and forest dimensions stay under their theorem bounds") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        TreeClassSpec spec{2 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 2), 2 + static_cast<int>(rng() % 2)};
        Sample s = small_sample(rng, static_cast<std::size_t>(spec.p), 5);
        auto t = enumerate_tree_behaviors(spec, s);
        CHECK(natarajan_dimension(t).dim <= solve_thm1(spec.p, spec.L, spec.d).max_N);
        ForestClassSpec f{TreeClassSpec{2, spec.p, spec.d}, 2};
        auto ft = enumerate_forest_behaviors(f, s);
        CHECK(natarajan_dimension(ft).dim <= solve_thm2(spec.p, 2, 2, spec.d).max_N);
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(TreeClassSpec({0, 1, 2}).validate(), InvalidArgument);
    CHECK_THROWS_AS(TreeClassSpec({2, 0, 2}).validate(), InvalidArgument);
    CHECK_THROWS_AS(ForestClassSpec({TreeClassSpec{2, 1, 2}, 0}).validate(), InvalidArgument);
    CHECK(TreeClassSpec{3, 1, 2}.internal_nodes() == 3);
    CHECK(TreeClassSpec{3, 1, 2}.leaves() == 4);
}
