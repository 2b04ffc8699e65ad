#include <doctest.h>

#include <cmath>
#include <set>

#include "natdim/bounds.hpp"
#include "natdim/growth.hpp"
#include "natdim/tree.hpp"

using namespace natdim;

namespace {

// Single threshold queries as a two-label class.
EnumeratedBehaviors query_class(const Sample& s) {
    std::vector<std::vector<int>> rows;
    for (const auto& q : threshold_behaviors(s)) {
        std::vector<int> r;
        for (auto b : q.goes_left) r.push_back(1 + b);
        rows.push_back(r);
    }
    return {dedup_behaviors(rows, s, LabelSpace(2)), true};
}

BehaviorEnumerator tree_class(TreeClassSpec spec) {
    return [spec](const Sample& s) { return EnumeratedBehaviors{enumerate_tree_behaviors(spec, s), true}; };
}

}  // namespace

TEST_CASE("growth on fixed samples") {
    CHECK(growth_on_sample(query_class, Sample(1, {{1.0}, {2.0}, {3.0}})).count == 4);
    Sample two(1, {{1.0}, {2.0}});
    CHECK(growth_on_sample(tree_class({1, 1, 3}), two).count == 3);
    CHECK(growth_on_sample(tree_class({2, 1, 2}), two).count == 4);
}

TEST_CASE("query class on generic points has n+1 behaviors") {
    auto r = growth_estimate(query_class, 5, generic_sampler(1), 5, 9);
    CHECK(r.count == 6);
    CHECK(r.seed == 9u);
    CHECK(r.sample_used.n() == 5);
}

TEST_CASE("estimates are monotone in n with nested samples") {
    auto en = tree_class({2, 2, 2});
    std::size_t prev = 0;
    for (std::size_t n = 1; n <= 6; ++n) {
        auto r = growth_estimate(en, n, generic_sampler(2), 4, 77);
        CHECK(r.count >= prev);
        prev = r.count;
    }
}

TEST_CASE("generic samples are prefix-nested and distinct per feature") {
    Sample a = generic_sample(2, 5, 3), b = generic_sample(2, 6, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a.point(i)[0] == b.point(i)[0]);
        CHECK(a.point(i)[1] == b.point(i)[1]);
    }
    for (std::size_t f = 0; f < 2; ++f) {
        std::set<double> seen;
        for (std::size_t i = 0; i < 6; ++i) seen.insert(b.point(i)[f]);
        CHECK(seen.size() == 6);
    }
}

TEST_CASE("tree estimates stay under the closed form and under d^n") {
    for (int L = 1; L <= 3; ++L) {
        for (int d = 2; d <= 3; ++d) {
            for (std::size_t n = 1; n <= 5; ++n) {
                auto r = growth_estimate(tree_class({L, 2, d}), n, generic_sampler(2), 3, 5);
                CHECK(std::log2(static_cast<long double>(r.count)) <=
                      tree_growth_bound(2, static_cast<std::int64_t>(n), L, d) + 1e-9L);
                CHECK(static_cast<double>(r.count) <= std::pow(d, n));
            }
        }
    }
}

TEST_CASE("estimates are reproducible") {
    auto en = tree_class({2, 2, 3});
    auto a = growth_estimate(en, 4, generic_sampler(2), 6, 123);
    auto b = growth_estimate(en, 4, generic_sampler(2), 6, 123);
    CHECK(a.to_json() == b.to_json());
    CHECK_THROWS_AS(growth_estimate(en, 0, generic_sampler(2), 1, 1), InvalidArgument);
}

TEST_CASE("growth csv") {
    CHECK(growth_csv_header() == "class_spec,n,count,exhaustive,seed");
    GrowthReport r;
    r.n = 3;
    r.count = 4;
    r.seed = 7;
    CHECK(growth_csv_row("tree", r) == "\"tree\",3,4,true,7");
}
