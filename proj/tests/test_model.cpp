#include "subcir/errors.hpp"
#include "subcir/model.hpp"
#include "subcir/quadrature.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>

using namespace subcir;

namespace {

const CirParams kPaper(1.0, 0.1, 0.25);

SubCirModel paper_model() {
    return SubCirModel(kPaper, SubordinatorSpec(0.0, TemperedStable{0.5, 0.5, 1.0}));
}

SubCirModel trivial_model() {
    return SubCirModel(kPaper, SubordinatorSpec::trivial());
}

} // namespace

TEST_CASE("constructor admissibility and policy validation") {
    CHECK_NOTHROW(paper_model());
    CHECK_NOTHROW(trivial_model());
    // driftless compound Poisson: bounded Laplace exponent, never trace class
    CHECK_THROWS_AS(SubCirModel(kPaper,
                                SubordinatorSpec(0.0, TemperedStable{0.5, -1.0, 1.0})),
                    std::domain_error);
    // driftless gamma at t_min = 1e-3 needs C t > 1
    CHECK_THROWS_AS(SubCirModel(kPaper,
                                SubordinatorSpec(0.0, TemperedStable{0.5, 0.0, 1.0})),
                    std::domain_error);
    Truncation loose;
    loose.t_min = 3.0;
    CHECK_NOTHROW(SubCirModel(kPaper,
                              SubordinatorSpec(0.0, TemperedStable{0.5, 0.0, 1.0}),
                              loose));
    Truncation bad;
    bad.n_max = 4;
    CHECK_THROWS_AS(SubCirModel(kPaper, SubordinatorSpec::trivial(), bad),
                    std::domain_error);
}

TEST_CASE("apply_semigroup: constants are invariant under beta = 0") {
    const auto m = paper_model();
    const auto delta1 = [](int n) { return n == 1 ? 1.0 : 0.0; };
    for (double t : {0.01, 0.5, 3.0})
        for (double x : {0.0, 0.1, 0.4})
            CHECK(m.apply_semigroup(0.0, t, delta1, x) ==
                  doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(m.apply_semigroup(0.0, 1e-4, delta1, 0.1),
                    BelowResolutionError);
    CHECK_THROWS_AS(m.apply_semigroup(0.5, 1.0, delta1, 0.1),
                    std::domain_error);
}

TEST_CASE("survival probability: contracts and monotonicity") {
    const auto m = paper_model();
    CHECK(m.survival_probability(5.0, 0.1, 1) == 0.0);
    CHECK(m.survival_probability(0.0, 0.1, 0) == 1.0);
    CHECK_THROWS_AS(m.survival_probability(1e-4, 0.1, 0), BelowResolutionError);

    double prev = 1.0;
    for (double T : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double q = m.survival_probability(T, 0.1, 0);
        CHECK(q >= 0.0);
        CHECK(q <= prev + 1e-12); // nonincreasing in horizon
        prev = q;
    }
    for (double T : {0.5, 2.0}) {
        double prev_x = 1.0;
        for (double x : {0.02, 0.1, 0.3, 0.6}) {
            const double q = m.survival_probability(T, x, 0);
            CHECK(q <= prev_x + 1e-12); // nonincreasing in the state
            prev_x = q;
        }
    }
}

TEST_CASE("trivial subordinator reduces to the affine CIR formulas") {
    const auto m = trivial_model();
    for (double t : {0.25, 1.0, 5.0})
        for (double x : {0.02, 0.1, 0.3}) {
            const double affine = charfun_affine(kPaper, t, 1.0, 0.0, x).real();
            CHECK(m.survival_probability(t, x, 0) ==
                  doctest::Approx(affine).epsilon(1e-9));
            CHECK(m.credit_spread(t, x) ==
                  doctest::Approx(-std::log(affine) / t).epsilon(1e-9));
        }
    // long-horizon spread approaches the principal eigenvalue
    CHECK(std::abs(m.credit_spread(30.0, 0.1) - m.asymptotic_spread()) < 1e-3);
}

TEST_CASE("asymptotic spread") {
    CHECK(trivial_model().asymptotic_spread() ==
          doctest::Approx(0.09705627484771406).epsilon(1e-13));
    const SubCirModel doubled(kPaper, SubordinatorSpec(2.0, std::nullopt));
    CHECK(doubled.asymptotic_spread() ==
          doctest::Approx(2.0 * 0.09705627484771406).epsilon(1e-13));
    CHECK(paper_model().asymptotic_spread() ==
          doctest::Approx(0.08402236322602074).epsilon(1e-12));
}

TEST_CASE("charfun_sub: bounds and the stationary limit") {
    const auto m = paper_model();
    for (double t : {0.5, 2.0})
        for (double x : {0.05, 0.2}) {
            const auto v = m.charfun_sub(t, 1.0, std::complex<double>(1.0, 0.5), x);
            CHECK(std::abs(v) <= 1.0 + 1e-10);
        }
    // t -> inf under beta = 0: only the constant mode survives and the
    // limit is the stationary gamma Laplace transform (1 + z/a)^{-b}
    for (double z : {0.5, 2.0}) {
        const double limit =
            std::pow(1.0 + z / kPaper.a(), -kPaper.b());
        const auto v = m.charfun_sub(60.0, 0.0, z, 0.1);
        CHECK(v.real() == doctest::Approx(limit).epsilon(1e-8));
        CHECK(std::abs(v.imag()) < 1e-12);
    }
    // z = 0, beta = 1 is the survival probability by definition
    CHECK(m.charfun_sub(2.0, 1.0, 0.0, 0.1).real() ==
          doctest::Approx(m.survival_probability(2.0, 0.1, 0)).epsilon(1e-12));
}

TEST_CASE("killing rate") {
    const auto trivial = trivial_model();
    for (double x : {0.0, 0.1, 0.5})
        CHECK(std::abs(trivial.killing_rate(x) - x) < 1e-12);

    const auto m = paper_model();
    CHECK(m.killing_rate(0.0) > 0.0);
    double prev = -1.0;
    for (double x = 0.0; x <= 0.4; x += 0.02) {
        const double k = m.killing_rate(x);
        CHECK(k >= prev - 1e-12); // nondecreasing
        prev = k;
    }
}

TEST_CASE("state-dependent Levy density") {
    const auto m = paper_model();
    CHECK(m.levy_density_state(0.0, 0.1, -0.1) == 0.0);
    CHECK(m.levy_density_state(0.0, 0.1, -0.2) == 0.0);
    CHECK_THROWS_AS(m.levy_density_state(0.0, 0.1, 1e-8), std::domain_error);
    CHECK_THROWS_AS(m.levy_density_state(0.0, -0.1, 0.05), std::domain_error);
    CHECK(m.levy_density_state(0.0, 0.1, 0.05) > 0.0);
    CHECK(m.levy_density_state(1.0, 0.1, 0.05) > 0.0);

    SUBCASE("detailed balance through the stationary density") {
        for (auto [x, xp] : {std::pair{0.05, 0.2}, std::pair{0.02, 0.1}}) {
            const double lhs = stationary_density(kPaper, x) *
                               m.levy_density_state(0.0, x, xp - x);
            const double rhs = stationary_density(kPaper, xp) *
                               m.levy_density_state(0.0, xp, x - xp);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
        }
    }

    SUBCASE("small-jump integrability: int (y^2 ^ 1) pi dy converges") {
        const double x = 0.1;
        const auto integrand = [&](double y) {
            return std::min(y * y, 1.0) * m.levy_density_state(0.0, x, y);
        };
        const auto piece = [&](double lo, double hi) {
            return quadrature::integrate_adaptive(integrand, lo, hi, 1e-6);
        };
        const double coarse = piece(1e-5, 1.0) + piece(-x + 1e-7, -1e-5);
        const double finer = piece(1e-6, 1.0) + piece(-x + 1e-7, -1e-6) +
                             piece(1.0, 3.0);
        CHECK(std::isfinite(finer));
        // refining the inner cutoff barely moves the value
        CHECK(std::abs(finer - coarse) < 0.05 * std::abs(finer) + 1e-6);
    }
}

TEST_CASE("subordinate drift") {
    const auto trivial = trivial_model();
    for (double x : {0.02, 0.1, 0.3})
        CHECK(trivial.drift_sub(0.0, x) ==
              doctest::Approx(kPaper.kappa * (kPaper.theta - x)).epsilon(1e-12));

    const auto m = paper_model();
    const double at_low = m.drift_sub(0.0, 0.01);
    const double at_mean = m.drift_sub(0.0, kPaper.theta);
    const double at_high = m.drift_sub(0.0, 0.3);
    CHECK(at_low > 0.0);  // pulled up toward theta
    CHECK(at_high < 0.0); // pulled down toward theta
    CHECK(std::abs(at_mean) < std::abs(at_low));
}
