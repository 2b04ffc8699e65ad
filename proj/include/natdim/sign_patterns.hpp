#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "natdim/core.hpp"

namespace natdim {

struct Monomial {
    double coef = 0.0;
    std::vector<int> exps;  // one exponent per variable

    int degree() const;
};

using Polynomial = std::vector<Monomial>;

/// R polynomials of total degree at most max_degree in nvars real variables.
struct PolynomialFamily {
    std::vector<std::string> variables;
    std::vector<Polynomial> polys;
    int max_degree = 0;

    std::size_t nvars() const { return variables.size(); }
    std::size_t size() const { return polys.size(); }

    /// Throws InvalidArgument on shape or degree violations.
    void validate() const;

    /// {vars: [name], polys: [[{coef, exps}]], max_degree?}; max_degree
    /// defaults to the largest monomial degree present.
    static PolynomialFamily from_json(const Json& j);
    Json to_json() const;
};

using SignVector = std::vector<std::uint8_t>;

/// Value of one polynomial, summed with Neumaier compensation.
double eval_polynomial(const Polynomial& poly, std::span<const double> assignment);

/// Bit r is 1{P_r(assignment) > 0}; zero maps to 0.
SignVector eval_sign_vector(const PolynomialFamily& family, std::span<const double> assignment);

struct SignSearch {
    std::size_t grid_points = 41;  // per axis; 0 disables the grid
    double lo = -2.0;
    double hi = 2.0;
    std::size_t random_trials = 10'000;
    std::size_t grid_cap = 10'000'000;

    static SignSearch from_json(const Json& j);
    Json to_json() const;
};

struct SignCount {
    std::size_t count = 0;
    /// One assignment per observed sign vector: the first found, grid points
    /// before random draws.
    std::map<SignVector, std::vector<double>> witnesses;

    Json to_json() const;
};

/// Distinct sign vectors found by the search: a lower bound on the number of
/// realizable configurations.
SignCount count_sign_configs(const PolynomialFamily& family, const SignSearch& search,
                             std::uint64_t seed);

/// (8e * max_degree * R / nvars)^nvars. Requires R >= nvars >= 1 and degree >= 1.
long double lemma1_bound(std::size_t R, std::size_t max_degree, std::size_t nvars);

/// log2 of lemma1_bound, usable where the bound itself overflows.
long double lemma1_log2_bound(std::size_t R, std::size_t max_degree, std::size_t nvars);

/// Random family with `R` polynomials of degree <= max_degree in `nvars`
/// variables; coefficients uniform on [-1, 1], 1-4 monomials each.
PolynomialFamily random_polynomial_family(std::size_t R, int max_degree, std::size_t nvars,
                                          std::mt19937_64& rng);

}  // namespace natdim
