#include "subcir/errors.hpp"
#include "subcir/quadrature.hpp"
#include "subcir/specfun.hpp"

#include "doctest.h"

#include <cmath>

using namespace subcir;
using quadrature::Budget;
using quadrature::integrate_adaptive;

TEST_CASE("integrate_adaptive on smooth integrands") {
    CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 1e-10) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 10.0,
                             1e-10) ==
          doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-10));
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                             M_PI, 1e-10) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("integrate_adaptive resolves an integrable endpoint singularity") {
    // nodes are interior, so 1/sqrt(x) is evaluated safely
    CHECK(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0,
                             1.0, 1e-8) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("integrate_adaptive signals budget exhaustion") {
    Budget tiny;
    tiny.max_evals = 60;
    CHECK_THROWS_AS(integrate_adaptive(
                        [](double x) { return std::sin(1000.0 * x); }, 0.0,
                        1.0, 1e-12, 0.0, tiny),
                    ConvergenceError);
}

TEST_CASE("gauss_gamma integrates monomials exactly") {
    const double nu = 2.2;
    const int m = 8;
    const auto rule = quadrature::gauss_gamma(m, nu);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(m));
    // int u^k u^nu e^{-u} du = Gamma(nu + k + 1), exact for k <= 2m-1
    for (int k = 0; k <= 2 * m - 1; ++k) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i)
            sum += rule.weights[i] * std::pow(rule.nodes[i], k);
        const double exact = std::exp(specfun::log_gamma(nu + k + 1.0));
        CHECK(sum == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("gauss_gamma nodes are positive and sorted") {
    const auto rule = quadrature::gauss_gamma(40, 0.5);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        CHECK(rule.nodes[i] > 0.0);
        CHECK(rule.weights[i] > 0.0);
        if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
}
