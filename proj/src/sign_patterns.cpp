#include "natdim/sign_patterns.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "natdim/growth.hpp"

namespace natdim {

int Monomial::degree() const { return std::accumulate(exps.begin(), exps.end(), 0); }

void PolynomialFamily::validate() const {
    if (variables.empty()) throw InvalidArgument("polynomial family needs at least one variable");
    if (polys.empty()) throw InvalidArgument("polynomial family needs at least one polynomial");
    for (std::size_t r = 0; r < polys.size(); ++r) {
        for (const auto& m : polys[r]) {
            if (m.exps.size() != variables.size()) {
                throw InvalidArgument("monomial in polynomial " + std::to_string(r) + " has " +
                                      std::to_string(m.exps.size()) + " exponents, expected " +
                                      std::to_string(variables.size()));
            }
            for (int e : m.exps) {
                if (e < 0) throw InvalidArgument("negative exponent in polynomial " + std::to_string(r));
            }
            if (m.degree() > max_degree) {
                throw InvalidArgument("polynomial " + std::to_string(r) + " has a monomial of degree " +
                                      std::to_string(m.degree()) + " > max_degree " +
                                      std::to_string(max_degree));
            }
        }
    }
}

PolynomialFamily PolynomialFamily::from_json(const Json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "vars" && it.key() != "polys" && it.key() != "max_degree") {
            throw InvalidArgument("unknown field '" + it.key() + "' in polynomial family");
        }
    }
    PolynomialFamily f;
    f.variables = j.at("vars").get<std::vector<std::string>>();
    int observed = 0;
    for (const auto& pj : j.at("polys")) {
        Polynomial p;
        for (const auto& mj : pj) {
            Monomial m{mj.at("coef").get<double>(), mj.at("exps").get<std::vector<int>>()};
            observed = std::max(observed, m.degree());
            p.push_back(std::move(m));
        }
        f.polys.push_back(std::move(p));
    }
    f.max_degree = j.contains("max_degree") ? j.at("max_degree").get<int>() : observed;
    f.validate();
    return f;
}

Json PolynomialFamily::to_json() const {
    Json polys_j = Json::array();
    for (const auto& p : polys) {
        Json pj = Json::array();
        for (const auto& m : p) pj.push_back(Json{{"coef", m.coef}, {"exps", m.exps}});
        polys_j.push_back(std::move(pj));
    }
    return Json{{"vars", variables}, {"polys", polys_j}, {"max_degree", max_degree}};
}

double eval_polynomial(const Polynomial& poly, std::span<const double> assignment) {
    double sum = 0.0;
    double comp = 0.0;
    for (const auto& m : poly) {
        double term = m.coef;
        for (std::size_t v = 0; v < m.exps.size(); ++v) {
            for (int e = 0; e < m.exps[v]; ++e) term *= assignment[v];
        }
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

SignVector eval_sign_vector(const PolynomialFamily& family, std::span<const double> assignment) {
    if (assignment.size() != family.nvars()) {
        throw InvalidArgument("assignment has " + std::to_string(assignment.size()) +
                              " values, family has " + std::to_string(family.nvars()) +
                              " variables");
    }
    SignVector bits(family.size());
    for (std::size_t r = 0; r < family.size(); ++r) {
        bits[r] = eval_polynomial(family.polys[r], assignment) > 0.0 ? 1 : 0;
    }
    return bits;
}

SignSearch SignSearch::from_json(const Json& j) {
    SignSearch s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k == "grid_points") s.grid_points = it->get<std::size_t>();
        else if (k == "lo") s.lo = it->get<double>();
        else if (k == "hi") s.hi = it->get<double>();
        else if (k == "random_trials") s.random_trials = it->get<std::size_t>();
        else if (k == "grid_cap") s.grid_cap = it->get<std::size_t>();
        else throw InvalidArgument("unknown field '" + k + "' in sign search");
    }
    if (!(s.lo < s.hi)) throw InvalidArgument("sign search needs lo < hi");
    return s;
}

Json SignSearch::to_json() const {
    return Json{{"grid_points", grid_points}, {"lo", lo},           {"hi", hi},
                {"random_trials", random_trials}, {"grid_cap", grid_cap}};
}

Json SignCount::to_json() const {
    Json w = Json::array();
    for (const auto& [bits, at] : witnesses) {
        w.push_back(Json{{"signs", std::vector<int>(bits.begin(), bits.end())}, {"assignment", at}});
    }
    return Json{{"count", count}, {"witnesses", w}};
}

SignCount count_sign_configs(const PolynomialFamily& family, const SignSearch& search,
                             std::uint64_t seed) {
    family.validate();
    const std::size_t nv = family.nvars();
    SignCount out;
    auto visit = [&](const std::vector<double>& at) {
        out.witnesses.try_emplace(eval_sign_vector(family, at), at);
    };

    if (search.grid_points > 0) {
        const long double cells =
            std::pow(static_cast<long double>(search.grid_points), static_cast<long double>(nv));
        if (cells > static_cast<long double>(search.grid_cap)) {
            throw InvalidArgument("sign grid of " + std::to_string(search.grid_points) + "^" +
                                  std::to_string(nv) + " points exceeds grid_cap");
        }
        const double step = search.grid_points > 1
                                ? (search.hi - search.lo) / static_cast<double>(search.grid_points - 1)
                                : 0.0;
        std::vector<std::size_t> idx(nv, 0);
        std::vector<double> at(nv);
        while (true) {
            for (std::size_t v = 0; v < nv; ++v) at[v] = search.lo + step * static_cast<double>(idx[v]);
            visit(at);
            std::size_t pos = 0;
            while (pos < nv && ++idx[pos] == search.grid_points) idx[pos++] = 0;
            if (pos == nv) break;
        }
    }
    std::vector<double> at(nv);
    for (std::size_t t = 0; t < search.random_trials; ++t) {
        auto rng = trial_rng(seed, t);
        std::uniform_real_distribution<double> dist(search.lo, search.hi);
        for (double& x : at) x = dist(rng);
        visit(at);
    }
    out.count = out.witnesses.size();
    return out;
}

long double lemma1_log2_bound(std::size_t R, std::size_t max_degree, std::size_t nvars) {
    if (nvars < 1) throw InvalidArgument("Lemma bound needs at least one variable");
    if (max_degree < 1) throw InvalidArgument("Lemma bound needs degree >= 1");
    if (R < nvars) {
        throw InvalidArgument("Lemma bound requires R >= number of variables (R = " +
                              std::to_string(R) + ", variables = " + std::to_string(nvars) + ")");
    }
    const long double base = 8.0L * std::numbers::e_v<long double> *
                             static_cast<long double>(max_degree) * static_cast<long double>(R) /
                             static_cast<long double>(nvars);
    return static_cast<long double>(nvars) * std::log2(base);
}

long double lemma1_bound(std::size_t R, std::size_t max_degree, std::size_t nvars) {
    return std::exp2(lemma1_log2_bound(R, max_degree, nvars));
}

PolynomialFamily random_polynomial_family(std::size_t R, int max_degree, std::size_t nvars,
                                          std::mt19937_64& rng) {
    PolynomialFamily f;
    for (std::size_t v = 0; v < nvars; ++v) f.variables.push_back("w" + std::to_string(v + 1));
    f.max_degree = max_degree;
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> terms(1, 4);
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> var(0, nvars - 1);
    for (std::size_t r = 0; r < R; ++r) {
        Polynomial p;
        const int count = terms(rng);
        for (int t = 0; t < count; ++t) {
            Monomial m{coef(rng), std::vector<int>(nvars, 0)};
            const int total = deg(rng);
            for (int e = 0; e < total; ++e) ++m.exps[var(rng)];
            p.push_back(std::move(m));
        }
        f.polys.push_back(std::move(p));
    }
    return f;
}

}  // namespace natdim
