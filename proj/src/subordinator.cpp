#include "subcir/subordinator.hpp"
#include "subcir/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace subcir {

SubordinatorSpec::SubordinatorSpec(double drift, std::optional<TemperedStable> fam)
    : gamma_drift(drift), family(std::move(fam)) {
    if (gamma_drift < 0.0)
        throw std::domain_error("SubordinatorSpec: drift must be nonnegative");
    if (!family && !(gamma_drift > 0.0))
        throw std::domain_error("SubordinatorSpec: pure-drift spec needs positive drift");
    if (family) {
        if (!(family->C > 0.0) || !(family->eta > 0.0) || !(family->alpha < 1.0))
            throw std::domain_error(
                "SubordinatorSpec: need C > 0, eta > 0, alpha < 1");
    }
}

double laplace_exponent(const SubordinatorSpec& s, double lam) {
    if (lam < 0.0)
        throw std::domain_error("laplace_exponent: lambda must be nonnegative");
    double phi = s.gamma_drift * lam;
    if (s.family) {
        const auto& f = *s.family;
        if (f.alpha == 0.0) {
            phi += f.C * std::log1p(lam / f.eta);
        } else {
            phi -= f.C * std::tgamma(-f.alpha) *
                   (std::pow(lam + f.eta, f.alpha) - std::pow(f.eta, f.alpha));
        }
    }
    return phi;
}

double levy_density(const SubordinatorSpec& s, double u) {
    if (!s.family)
        throw std::domain_error("levy_density: pure-drift subordinator has no Levy density");
    if (!(u > 0.0))
        throw std::domain_error("levy_density: u must be positive");
    const auto& f = *s.family;
    return f.C * std::pow(u, -f.alpha - 1.0) * std::exp(-f.eta * u);
}

double levy_integrate(const SubordinatorSpec& s,
                      const std::function<double(double)>& g,
                      double rel_tol, long budget_evals, double abs_tol) {
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-4))
        throw std::domain_error("levy_integrate: rel_tol out of [1e-12, 1e-4]");
    if (!s.family) return 0.0;
    const auto& f = *s.family;
    quadrature::Budget budget;
    budget.max_evals = budget_evals;

    // (0, 1]: for alpha > 0 substitute u = v^{1/(1-alpha)}, which turns
    // the integrand into C/(1-alpha) * (g(u)/u) * e^{-eta u} in v.
    double head;
    if (f.alpha > 0.0) {
        const double p = 1.0 / (1.0 - f.alpha);
        head = quadrature::integrate_adaptive(
            [&](double v) {
                const double u = std::pow(v, p);
                return f.C * p * (g(u) / u) * std::exp(-f.eta * u);
            },
            0.0, 1.0, rel_tol, abs_tol, budget);
    } else {
        head = quadrature::integrate_adaptive(
            [&](double u) { return g(u) * levy_density(s, u); }, 0.0, 1.0,
            rel_tol, abs_tol, budget);
    }

    // [1, inf): doubling panels, stopped on the exponential tail decay.
    double total = head;
    double lo = 1.0;
    for (int k = 0; k < 64; ++k) {
        const double hi = 2.0 * lo;
        const double panel = quadrature::integrate_adaptive(
            [&](double u) { return g(u) * levy_density(s, u); }, lo, hi,
            rel_tol, abs_tol, budget);
        total += panel;
        // Remaining tail is bounded by sup|g| nu((hi,inf)); the measure
        // tail decays like e^{-eta hi}, so stop once panels are negligible.
        if (std::abs(panel) <= rel_tol * std::abs(total) &&
            f.eta * hi > -std::log(rel_tol) + 2.0)
            break;
        lo = hi;
        if (k == 63)
            throw ConvergenceError("levy_integrate: tail did not converge");
    }
    return total;
}

namespace {

// Inverse Gaussian IG(mu, shape) by the two-root transform method.
double sample_inverse_gaussian(double mu, double shape, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double nu = normal(rng);
    const double y = nu * nu;
    const double x = mu + mu * mu * y / (2.0 * shape) -
                     mu / (2.0 * shape) *
                         std::sqrt(4.0 * mu * shape * y + mu * mu * y * y);
    const double u = unif(rng);
    return (u <= mu / (mu + x)) ? x : mu * mu / x;
}

} // namespace

double sample_increment(const SubordinatorSpec& s, double dt, std::mt19937_64& rng) {
    if (!(dt > 0.0))
        throw std::domain_error("sample_increment: dt must be positive");
    double inc = s.gamma_drift * dt;
    if (!s.family) return inc;
    const auto& f = *s.family;
    if (f.alpha == 0.5) {
        // Parameters matched to E[e^{-s T_t}] = e^{-t phi(s)}; see
        // docs/ig_sampler.md for the algebra.
        const double mu = f.C * std::sqrt(M_PI / f.eta) * dt;
        const double shape = 2.0 * M_PI * f.C * f.C * dt * dt;
        inc += sample_inverse_gaussian(mu, shape, rng);
    } else if (f.alpha == 0.0) {
        std::gamma_distribution<double> gamma(f.C * dt, 1.0 / f.eta);
        inc += gamma(rng);
    } else if (f.alpha == -1.0) {
        std::poisson_distribution<long> poisson(f.C / f.eta * dt);
        std::exponential_distribution<double> expo(f.eta);
        const long n = poisson(rng);
        for (long i = 0; i < n; ++i) inc += expo(rng);
    } else {
        throw std::domain_error(
            "sample_increment: exact sampler only for alpha in {0.5, 0, -1}");
    }
    return inc;
}

TraceClass trace_class_check(const SubordinatorSpec& s, const SpectralData& sd,
                             double t) {
    if (!(t > 0.0))
        throw std::domain_error("trace_class_check: t must be positive");
    double sum = 0.0;
    for (long n = 1; n <= 100000; ++n) {
        const double term =
            std::exp(-laplace_exponent(s, sd.eigenvalue(static_cast<int>(n))) * t);
        sum += term;
        if (term < 1e-15) return TraceClass::Admissible;
    }
    return TraceClass::Inadmissible;
}

} // namespace subcir
