// Scalar special functions used by the spectral and density code:
// log-gamma, Pochhammer symbols, generalized Laguerre polynomials and
// modified Bessel functions of the first kind.
//
// All functions are pure and reentrant.

#ifndef SUBCIR_SPECFUN_HPP
#define SUBCIR_SPECFUN_HPP

namespace subcir::specfun {

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// ln (a)_n = ln Gamma(a+n) - ln Gamma(a), a > 0, n >= 0.
double log_pochhammer(double a, int n);

/// Pochhammer symbol (a)_n computed in log space.
/// Throws std::overflow_error if the result is not representable.
double pochhammer(double a, int n);

/// Generalized Laguerre polynomial L_n^nu(x), nu > -1, x >= 0, by the
/// stable forward three-term recurrence.
double laguerre(int n, double nu, double x);

/// Modified Bessel function of the first kind I_nu(x), nu > -1, x >= 0.
/// Throws std::overflow_error when the value exceeds double range; use
/// bessel_i_scaled for large arguments.
double bessel_i(double nu, double x);

/// Exponentially scaled value e^{-x} I_nu(x). Well behaved for all x >= 0.
double bessel_i_scaled(double nu, double x);

/// ln of the scaled Bessel value, i.e. ln I_nu(x) - x. Used by the
/// transition density, whose exponent must be assembled in log space.
double log_bessel_i_scaled(double nu, double x);

} // namespace subcir::specfun

#endif
