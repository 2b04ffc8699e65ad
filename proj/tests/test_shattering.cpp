#include <doctest.h>

#include <random>

#include "natdim/bounds.hpp"
#include "natdim/shattering.hpp"
#include "natdim/tree.hpp"
#include "oracles.hpp"

using namespace natdim;

namespace {

BehaviorTable full_table(std::size_t n, int d) {
    std::vector<std::vector<int>> rows;
    oracle::for_each_labeling(n, d, [&](const oracle::Row& r) { rows.push_back(r); });
    return dedup_behaviors(rows, n, LabelSpace(d));
}

oracle::Rows as_set(const BehaviorTable& t) {
    auto v = t.rows_as_ints();
    return {v.begin(), v.end()};
}

BehaviorTable random_table(std::mt19937_64& rng, std::size_t n, int d, std::size_t m) {
    std::vector<std::vector<int>> raw;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<int> r;
        for (std::size_t j = 0; j < n; ++j) r.push_back(1 + static_cast<int>(rng() % d));
        raw.push_back(r);
    }
    return dedup_behaviors(raw, n, LabelSpace(d));
}

// 1{x <= theta} on sorted distinct points, label 2 for "true".
BehaviorTable threshold_table(std::size_t n) {
    std::vector<std::vector<int>> rows;
    for (std::size_t cut = 0; cut <= n; ++cut) {
        std::vector<int> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = i < cut ? 2 : 1;
        rows.push_back(r);
    }
    return dedup_behaviors(rows, n, LabelSpace(2));
}

}  // namespace

TEST_CASE("complete class N-shatters with the lowest reference pair") {
    auto t = full_table(2, 2);
    std::vector<std::size_t> both{0, 1};
    auto w = is_n_shattered(t, both);
    REQUIRE(w);
    CHECK(w->f1 == std::vector<Label>{1, 1});
    CHECK(w->f2 == std::vector<Label>{2, 2});
    CHECK(verify_witness(t, *w));
}

TEST_CASE("single-row tables shatter nothing nonempty") {
    auto t = dedup_behaviors({{1, 2, 3}}, 3, LabelSpace(3));
    std::vector<std::size_t> one{1};
    CHECK_FALSE(is_n_shattered(t, one));
    CHECK_FALSE(is_g_shattered(t, one));
    CHECK(natarajan_dimension(t).dim == 0);
    CHECK(graph_dimension(t).dim == 0);
    CHECK(natarajan_dimension(t).exact());
}

TEST_CASE("stump behaviors on two and three points") {
    TreeClassSpec stump{2, 1, 2};
    auto two = enumerate_tree_behaviors(stump, Sample(1, {{1.0}, {2.0}}));
    std::vector<std::size_t> s2{0, 1};
    CHECK(is_n_shattered(two, s2));
    auto three = enumerate_tree_behaviors(stump, Sample(1, {{1.0}, {2.0}, {3.0}}));
    std::vector<std::size_t> s3{0, 1, 2};
    CHECK_FALSE(is_n_shattered(three, s3));
    CHECK(oracle::n_shattered(as_set(two), s2, 2));
    CHECK_FALSE(oracle::n_shattered(as_set(three), s3, 2));
}

TEST_CASE("stump on six generic points has dimension 2 in every notion") {
    auto t = enumerate_tree_behaviors(TreeClassSpec{2, 1, 2},
                                      Sample(1, {{0.11}, {0.27}, {0.38}, {0.52}, {0.69}, {0.83}}));
    CHECK(natarajan_dimension(t).dim == 2);
    CHECK(graph_dimension(t).dim == 2);
    CHECK(vc_dimension(t).dim == 2);
}

TEST_CASE("G-shattering of the full ternary class on one point") {
    auto t = full_table(1, 3);
    std::vector<std::size_t> s{0};
    auto w = is_g_shattered(t, s);
    REQUIRE(w);
    CHECK(w->f2.empty());
    CHECK(verify_witness(t, *w));
}

TEST_CASE("binary tables: G agrees with N and VC") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto t = random_table(rng, 1 + rng() % 5, 2, 1 + rng() % 24);
        const int n = natarajan_dimension(t).dim;
        CHECK(graph_dimension(t).dim == n);
        CHECK(vc_dimension(t).dim == n);
    }
}

TEST_CASE("threshold, stump and full classes: VC dimension") {
    for (std::size_t n = 2; n <= 6; ++n) CHECK(vc_dimension(threshold_table(n)).dim == 1);
    for (std::size_t n = 1; n <= 4; ++n) CHECK(vc_dimension(full_table(n, 2)).dim == static_cast<int>(n));
    CHECK_THROWS_AS(vc_dimension(full_table(2, 3)), InvalidArgument);
}

TEST_CASE("complete classes have full dimension") {
    for (int d = 2; d <= 4; ++d) {
        for (std::size_t n = 1; n <= 3; ++n) {
            auto t = full_table(n, d);
            CHECK(natarajan_dimension(t).dim == static_cast<int>(n));
            CHECK(graph_dimension(t).dim == static_cast<int>(n));
        }
    }
}

TEST_CASE("searches match the brute-force oracle on random tables") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 120; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 3);
        const std::size_t n = 1 + rng() % 5;
        auto t = random_table(rng, n, d, 1 + rng() % 60);
        const auto rows = as_set(t);
        auto rn = natarajan_dimension(t);
        auto rg = graph_dimension(t);
        CHECK(rn.dim == oracle::dimension(rows, n, d, oracle::Notion::N));
        CHECK(rg.dim == oracle::dimension(rows, n, d, oracle::Notion::G));
        if (rn.witness) CHECK(verify_witness(t, *rn.witness));
        if (rg.witness) CHECK(verify_witness(t, *rg.witness));
        CHECK(rn.dim <= rg.dim);
        if (rn.dim >= 1) CHECK(bendavid_gap(rn.dim, d).admits(rg.dim));
    }
}

TEST_CASE("witness is the first shattered subset in lexicographic order") {
    // Columns 1 and 2 form the only shattered pair.
    auto t = dedup_behaviors({{1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {1, 2, 2}}, 3, LabelSpace(2));
    auto r = natarajan_dimension(t);
    CHECK(r.dim == 2);
    REQUIRE(r.witness);
    CHECK(r.witness->subset == std::vector<std::size_t>{1, 2});
}

TEST_CASE("tampered witnesses are rejected") {
    auto t = full_table(2, 2);
    auto w = *natarajan_dimension(t).witness;
    auto bad = w;
    std::swap(bad.realizers[0], bad.realizers[1]);
    CHECK_FALSE(verify_witness(t, bad));
    bad = w;
    bad.f2 = bad.f1;
    CHECK_FALSE(verify_witness(t, bad));
}

TEST_CASE("shattered subsets are downward closed") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        auto t = random_table(rng, 4, 3, 30 + rng() % 30);
        for (std::uint64_t mask = 1; mask < 16; ++mask) {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < 4; ++i) if (mask >> i & 1) s.push_back(i);
            if (!is_n_shattered(t, s)) continue;
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                auto sub = s;
                sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                CHECK(is_n_shattered(t, sub));
            }
        }
    }
}

TEST_CASE("budgets downgrade to a lower bound") {
    auto t = full_table(5, 2);
    SearchBudget b;
    b.max_subsets = 3;
    auto r = natarajan_dimension(t, b);
    CHECK(r.status == DimensionStatus::lower_bound);
    CHECK(r.dim <= 5);
    if (r.witness) CHECK(verify_witness(t, *r.witness));
}

TEST_CASE("lower-bound strategies never exceed the exact dimension") {
    auto full = full_table(5, 3);
    auto r = dimension_lower_bound(full, ShatterMode::N, LowerBoundStrategy::random, 1, 100);
    CHECK(r.dim == 5);
    REQUIRE(r.witness);
    CHECK(verify_witness(full, *r.witness));

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        auto t = random_table(rng, 5, 3, 20 + rng() % 80);
        for (auto mode : {ShatterMode::N, ShatterMode::G}) {
            const int exact = shatter_dimension(t, mode).dim;
            for (auto strat : {LowerBoundStrategy::random, LowerBoundStrategy::greedy}) {
                auto lb = dimension_lower_bound(t, mode, strat, trial, 20);
                CHECK(lb.dim <= exact);
                CHECK(lb.status == DimensionStatus::lower_bound);
                if (lb.witness) CHECK(verify_witness(t, *lb.witness));
            }
        }
    }
}

TEST_CASE("empty tables are rejected") {
    BehaviorTable empty(3, LabelSpace(2));
    CHECK_THROWS_AS(natarajan_dimension(empty), InvalidArgument);
}

TEST_CASE("witness json uses T-keyed realizers") {
    auto t = full_table(2, 2);
    auto j = natarajan_dimension(t).to_json();
    CHECK(j["dim"] == 2);
    CHECK(j["witness"]["realizers"].size() == 4);
}
