#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "natdim/sign_patterns.hpp"

using namespace natdim;

namespace {

PolynomialFamily family(std::vector<Polynomial> polys, std::size_t nvars) {
    PolynomialFamily f;
    for (std::size_t i = 0; i < nvars; ++i) f.variables.push_back("w" + std::to_string(i));
    f.polys = std::move(polys);
    int deg = 0;
    for (const auto& p : f.polys) for (const auto& m : p) deg = std::max(deg, m.degree());
    f.max_degree = deg;
    return f;
}

}  // namespace

TEST_CASE("strict sign vectors") {
    auto lin = family({{{1.0, {1}}}}, 1);
    std::vector<double> two{2.0}, neg{-1.0}, zero{0.0};
    CHECK(eval_sign_vector(lin, two) == SignVector{1});
    CHECK(eval_sign_vector(lin, neg) == SignVector{0});
    CHECK(eval_sign_vector(lin, zero) == SignVector{0});

    auto sq = family({{{1.0, {2}}}, {{-1.0, {2}}}}, 1);
    std::vector<double> w{0.7};
    CHECK(eval_sign_vector(sq, w) == SignVector{1, 0});

    auto constant = family({{{5.0, {0}}}}, 1);
    CHECK(eval_sign_vector(constant, neg) == SignVector{1});
    std::vector<double> wrong{1.0, 2.0};
    CHECK_THROWS(eval_sign_vector(lin, wrong));
}

TEST_CASE("compensated evaluation keeps a cancelling sum at zero") {
    Polynomial p{{1e16, {0}}, {1.0, {0}}, {-1e16, {0}}, {-1.0, {0}}};
    std::vector<double> w{0.0};
    CHECK(eval_polynomial(p, w) == 0.0);
}

TEST_CASE("a single linear polynomial has two configurations") {
    auto lin = family({{{1.0, {1}}, {-0.3, {0}}}}, 1);
    CHECK(count_sign_configs(lin, SignSearch{}, 1).count == 2);
}

TEST_CASE("lemma bound values and preconditions") {
    const long double e = std::numbers::e_v<long double>;
    CHECK(static_cast<double>(lemma1_bound(1, 1, 1)) == doctest::Approx(static_cast<double>(8 * e)));
    CHECK(static_cast<double>(lemma1_bound(4, 2, 2)) == doctest::Approx(static_cast<double>(32 * e * 32 * e)));
    CHECK(static_cast<double>(lemma1_bound(4, 2, 2)) == doctest::Approx(7566.2).epsilon(1e-4));
    CHECK_THROWS_AS(lemma1_bound(1, 1, 2), InvalidArgument);
    CHECK_THROWS_AS(lemma1_bound(2, 0, 1), InvalidArgument);
}

TEST_CASE("counts respect 2^R and the lemma on random families") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t nv = 1 + rng() % 2;
        const std::size_t R = nv + rng() % 4;
        auto f = random_polynomial_family(R, 1 + static_cast<int>(rng() % 3), nv, rng);
        SignSearch search;
        search.grid_points = 21;
        search.random_trials = 2000;
        auto c = count_sign_configs(f, search, trial);
        CHECK(c.count <= (std::size_t{1} << R));
        CHECK(static_cast<long double>(c.count) <= lemma1_bound(R, static_cast<std::size_t>(f.max_degree), nv));
        for (const auto& [signs, w] : c.witnesses) CHECK(eval_sign_vector(f, w) == signs);
    }
}

TEST_CASE("more search effort never lowers the count") {
    std::mt19937_64 rng(13);
    auto f = random_polynomial_family(5, 2, 2, rng);
    SignSearch coarse;
    coarse.grid_points = 5;
    coarse.random_trials = 100;
    SignSearch fine = coarse;
    fine.random_trials = 5000;
    CHECK(count_sign_configs(f, fine, 1).count >= count_sign_configs(f, coarse, 1).count);
}

TEST_CASE("family json") {
    auto j = Json::parse(R"({"vars":["a","b"],"polys":[[{"coef":1,"exps":[1,1]}],[{"coef":-2,"exps":[0,2]}]]})");
    auto f = PolynomialFamily::from_json(j);
    CHECK(f.size() == 2);
    CHECK(f.nvars() == 2);
    CHECK(f.max_degree == 2);
    CHECK(PolynomialFamily::from_json(f.to_json()).to_json() == f.to_json());
    auto bad = j;
    bad["polys"][0][0]["exps"] = Json::array({1});
    CHECK_THROWS(PolynomialFamily::from_json(bad));
    CHECK_THROWS(SignSearch::from_json(Json{{"grid", 3}}));
}
