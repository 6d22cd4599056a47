#include "subcir/cir.hpp"
#include "subcir/errors.hpp"
#include "subcir/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subcir {

CirParams::CirParams(double kappa_, double theta_, double sigma_)
    : kappa(kappa_), theta(theta_), sigma(sigma_) {
    if (!(kappa > 0.0) || !(theta > 0.0) || !(sigma > 0.0))
        throw std::domain_error("CirParams: kappa, theta, sigma must be positive");
    a_ = 2.0 * kappa / (sigma * sigma);
    b_ = 2.0 * kappa * theta / (sigma * sigma);
}

Boundary classify_boundary(const CirParams& p) {
    return (2.0 * p.kappa * p.theta >= p.sigma * p.sigma) ? Boundary::Entrance
                                                          : Boundary::Reflecting;
}

double stationary_density(const CirParams& p, double x) {
    if (x < 0.0) throw std::domain_error("stationary_density: x must be nonnegative");
    const double a = p.a();
    const double b = p.b();
    if (x == 0.0) {
        if (b > 1.0) return 0.0;
        if (b == 1.0) return a;
        return std::numeric_limits<double>::infinity();
    }
    const double lp = b * std::log(a) + (b - 1.0) * std::log(x) - a * x -
                      specfun::log_gamma(b);
    return std::exp(lp);
}

double rho(const CirParams& p, double beta) {
    if (beta < 0.0) throw std::domain_error("rho: beta must be nonnegative");
    return std::sqrt(p.kappa * p.kappa + 2.0 * beta * p.sigma * p.sigma);
}

std::complex<double> charfun_affine(const CirParams& p, double t, double beta,
                                    std::complex<double> z, double x) {
    if (t < 0.0) throw std::domain_error("charfun_affine: t must be nonnegative");
    if (z.real() < 0.0) throw std::domain_error("charfun_affine: Re z must be >= 0");
    if (x < 0.0) throw std::domain_error("charfun_affine: x must be nonnegative");
    const double r = rho(p, beta);
    const double s2 = p.sigma * p.sigma;
    const double u = std::exp(-r * t);  // e^{-rho t}, avoids overflow at large t
    const std::complex<double> w = p.kappa + r + s2 * z;
    const std::complex<double> denom = w + (2.0 * r - w) * u;
    const std::complex<double> logA =
        p.b() * (std::log(2.0 * r) + 0.5 * (p.kappa - r) * t - std::log(denom));
    const std::complex<double> B =
        (2.0 * beta + z * (r - p.kappa) + (z * (r + p.kappa) - 2.0 * beta) * u) / denom;
    return std::exp(logA - B * x);
}

SpectralData::SpectralData(const CirParams& p, double beta, int n_max)
    : p_(p), beta_(beta), rho_(subcir::rho(p, beta)) {
    if (n_max < 1) throw std::domain_error("SpectralData: n_max must be >= 1");
    lambda1_ = 0.5 * p_.b() * (rho_ - p_.kappa);
    const double half_b_log_ratio = 0.5 * p_.b() * std::log(rho_ / p_.kappa);
    log_norm_.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        log_norm_[n - 1] = 0.5 * (specfun::log_gamma(static_cast<double>(n)) -
                                  specfun::log_pochhammer(p_.b(), n - 1)) +
                           half_b_log_ratio;
    }
}

double SpectralData::eigenvalue(int n) const {
    if (n < 1) throw std::domain_error("eigenvalue: n must be >= 1");
    return (n - 1) * rho_ + lambda1_;
}

double SpectralData::log_norm(int n) const {
    if (n < 1 || n > n_max())
        throw std::domain_error("log_norm: n out of precomputed range");
    return log_norm_[n - 1];
}

double SpectralData::eigenfunction(int n, double x) const {
    if (x < 0.0) throw std::domain_error("eigenfunction: x must be nonnegative");
    const double s2 = p_.sigma * p_.sigma;
    const double pre = std::exp(log_norm(n) + (p_.kappa - rho_) * x / s2);
    return pre * specfun::laguerre(n - 1, p_.b() - 1.0, 2.0 * x * rho_ / s2);
}

std::complex<double> SpectralData::coeff_exp(int n, std::complex<double> z) const {
    if (n < 1) throw std::domain_error("coeff_exp: n must be >= 1");
    if (z.real() < 0.0) throw std::domain_error("coeff_exp: Re z must be >= 0");
    const double s2 = p_.sigma * p_.sigma;
    const std::complex<double> denom = p_.kappa + rho_ + s2 * z;
    const std::complex<double> r2 = 2.0 * rho_ / denom;
    std::complex<double> f = std::exp(-log_norm(n)) * std::pow(r2, p_.b());
    if (n > 1) {
        const std::complex<double> r1 = (p_.kappa - rho_ + s2 * z) / denom;
        f *= std::pow(r1, n - 1);
    }
    return f;
}

namespace detail {

double log_transition_density_m(const CirParams& p, double beta, double t,
                                double x, double y) {
    if (!(x > 0.0) || !(y > 0.0))
        throw std::domain_error("transition_density_m: x, y must be positive");
    if (t < 1e-12) return -std::numeric_limits<double>::infinity();
    const double r = rho(p, beta);
    const double s2 = p.sigma * p.sigma;
    const double b = p.b();
    const double h = 0.5 * t * r;
    const double log_sinh =
        (h > 20.0) ? h - std::log(2.0) + std::log1p(-std::exp(-2.0 * h))
                   : std::log(std::sinh(h));
    const double sqrt_xy = std::sqrt(x * y);
    const double z = 2.0 * r * sqrt_xy / s2 * std::exp(-log_sinh);
    const double lambda1 = 0.5 * b * (r - p.kappa);

    // Combined exponent z + (x+y)(kappa - rho coth h)/sigma^2, grouped so
    // the two large terms cancel before exponentiation.
    double decay;
    if (h > 20.0) {
        decay = (r / s2) * (4.0 * sqrt_xy * std::exp(-h) - (x + y)) +
                (x + y) * p.kappa / s2;
    } else {
        decay = (r / s2) * (2.0 * sqrt_xy - (x + y) * std::cosh(h)) /
                    std::sinh(h) +
                (x + y) * p.kappa / s2;
    }

    return std::log(r) + specfun::log_gamma(b) + std::log(sqrt_xy) -
           std::log(s2) - log_sinh + b * (h - std::log(p.a() * sqrt_xy)) +
           specfun::log_bessel_i_scaled(b - 1.0, z) + decay - lambda1 * t;
}

} // namespace detail

double transition_density_m(const CirParams& p, double beta, double t,
                            double x, double y) {
    if (t < kDensityTimeFloor)
        throw BelowResolutionError("transition_density_m: t below resolution floor");
    // underflow to zero is acceptable
    return std::exp(detail::log_transition_density_m(p, beta, t, x, y));
}

} // namespace subcir
