#include "subcir/pricing.hpp"
#include "subcir/errors.hpp"
#include "subcir/quadrature.hpp"
#include "subcir/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace subcir {

namespace {

// int f(x)^2 pi(x) dx by gamma-weight quadrature; used only as a
// finiteness check at claim construction.
bool square_integrable(const CirParams& p,
                       const std::function<double(double)>& f) {
    const double b = p.b();
    const auto rule = quadrature::gauss_gamma(96, b - 1.0);
    const double inv_mass = std::exp(-specfun::log_gamma(b));
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i] / p.a();
        const double v = f(x);
        sum += inv_mass * rule.weights[i] * v * v;
    }
    return std::isfinite(sum);
}

} // namespace

Claim::Claim(const SubCirModel& m, double maturity, double rate,
             std::function<double(double)> promised,
             std::function<double(double)> recovery, Timing timing,
             std::function<double(double)> default_payment)
    : maturity_(maturity), rate_(rate), promised_(std::move(promised)),
      recovery_(std::move(recovery)), timing_(timing),
      default_payment_(std::move(default_payment)) {
    if (!(maturity_ > 0.0))
        throw std::domain_error("Claim: maturity must be positive");
    if (rate_ < 0.0) throw std::domain_error("Claim: rate must be nonnegative");
    if (!promised_ || !recovery_)
        throw std::domain_error("Claim: payoff functions must be callable");
    if (timing_ == Timing::AtDefault && !default_payment_)
        throw std::domain_error("Claim: AtDefault timing needs a payment function");
    if (!square_integrable(m.cir(), promised_))
        throw std::domain_error("Claim: promised payoff is not square-integrable");
    if (!square_integrable(m.cir(), recovery_))
        throw std::domain_error("Claim: recovery payoff is not square-integrable");
}

Claim::Claim(const SubCirModel& m, double maturity, double rate,
             std::function<double(double)> promised, double recovery_constant)
    : Claim(m, maturity, rate, std::move(promised),
            [recovery_constant](double) { return recovery_constant; }) {
    if (recovery_constant < 0.0 || recovery_constant > 1.0)
        throw std::domain_error("Claim: constant recovery must lie in [0, 1]");
}

std::vector<double> payoff_coefficients(const SubCirModel& m, double beta,
                                        const std::function<double(double)>& f,
                                        int N) {
    if (N < 1) throw std::domain_error("payoff_coefficients: N must be >= 1");
    const SpectralData& sd = m.spectral(beta);
    if (N > sd.n_max())
        throw std::domain_error("payoff_coefficients: N exceeds spectral range");
    const CirParams& p = m.cir();
    const double b = p.b();
    const double s2 = p.sigma * p.sigma;
    const double rho = sd.rho();

    // Fold the eigenfunction exponential e^{(kappa-rho)x/sigma^2} into
    // the gamma weight: the effective rate is ap = (kappa+rho)/sigma^2
    // and the Laguerre argument becomes c u with c = 2 rho/(kappa+rho).
    const double ap = (p.kappa + rho) / s2;
    const double c = 2.0 * rho / (p.kappa + rho);
    const double log_mass = b * std::log(p.a() / ap) - specfun::log_gamma(b);

    const int M = 2 * N + 16;
    const auto rule = quadrature::gauss_gamma(M, b - 1.0);

    std::vector<double> coeffs(N, 0.0);
    std::vector<double> lag(N);
    const double nu = b - 1.0;
    for (int i = 0; i < M; ++i) {
        const double u = rule.nodes[i];
        const double t = c * u;
        lag[0] = 1.0;
        if (N > 1) lag[1] = 1.0 + nu - t;
        for (int k = 2; k < N; ++k)
            lag[k] = ((2.0 * k - 1.0 + nu - t) * lag[k - 1] -
                      (k - 1.0 + nu) * lag[k - 2]) /
                     k;
        const double wf = rule.weights[i] * f(u / ap);
        for (int n = 0; n < N; ++n) coeffs[n] += wf * lag[n];
    }
    for (int n = 0; n < N; ++n)
        coeffs[n] *= std::exp(sd.log_norm(n + 1) + log_mass);
    return coeffs;
}

double price_claim(const SubCirModel& m, const Claim& c, double t, double x,
                   int d) {
    if (d != 0 && d != 1)
        throw std::domain_error("price_claim: d must be 0 or 1");
    const double tau = c.maturity() - t;
    if (tau < m.truncation().t_min)
        throw BelowResolutionError("price_claim: T - t below t_min");

    const int N = m.truncation().n_max;
    const auto f1 = payoff_coefficients(m, 0.0, c.recovery(), N);
    double v = m.apply_semigroup(
        0.0, tau, [&](int n) { return f1[n - 1]; }, x);
    if (d == 0) {
        const auto diff = payoff_coefficients(
            m, 1.0,
            [&](double y) { return c.promised()(y) - c.recovery()(y); }, N);
        v += m.apply_semigroup(
            1.0, tau, [&](int n) { return diff[n - 1]; }, x);
    }
    v *= std::exp(-c.rate() * tau);

    if (c.timing() == Claim::Timing::AtDefault && d == 0) {
        const auto g = payoff_coefficients(
            m, 1.0,
            [&](double y) { return c.default_payment()(y) * m.killing_rate(y); },
            N);
        const double t_min = m.truncation().t_min;
        const auto integrand = [&](double u) {
            return std::exp(-c.rate() * u) *
                   m.apply_semigroup(
                       1.0, u, [&](int n) { return g[n - 1]; }, x);
        };
        double rec = t_min * integrand(t_min); // [0, t_min] strip
        if (tau > t_min)
            rec += quadrature::integrate_adaptive(integrand, t_min, tau,
                                                  m.quad().rel_tol);
        v += rec;
    }
    return v;
}

double zcb_defaultable(const SubCirModel& m, double t, double T, double x,
                       int d, double r, double R) {
    if (T < t) throw std::domain_error("zcb_defaultable: need T >= t");
    if (R < 0.0 || R > 1.0)
        throw std::domain_error("zcb_defaultable: recovery must lie in [0, 1]");
    if (d != 0 && d != 1)
        throw std::domain_error("zcb_defaultable: d must be 0 or 1");
    const double q = (d == 1) ? 0.0 : m.survival_probability(T - t, x, 0);
    return std::exp(-r * (T - t)) * (q + R * (1.0 - q));
}

double riskfree_bond_subcir(const SubCirModel& m, double t, double T, double x) {
    if (T < t) throw std::domain_error("riskfree_bond_subcir: need T >= t");
    return m.survival_probability(T - t, x, 0);
}

} // namespace subcir
