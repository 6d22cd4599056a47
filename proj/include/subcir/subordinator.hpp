// Levy subordinators of the tempered-stable family: Laplace exponent,
// Levy density, integration against the Levy measure, exact increment
// sampling for alpha in {1/2, 0, -1}, and the trace-class admissibility
// check for subordinated spectral expansions.

#ifndef SUBCIR_SUBORDINATOR_HPP
#define SUBCIR_SUBORDINATOR_HPP

#include "subcir/cir.hpp"
#include "subcir/quadrature.hpp"

#include <functional>
#include <optional>
#include <random>

namespace subcir {

/// Levy measure nu(ds) = C s^{-alpha-1} e^{-eta s} ds with C > 0,
/// eta > 0, alpha < 1. alpha = 1/2 is the inverse Gaussian process,
/// alpha = 0 the gamma process, alpha < 0 compound Poisson with gamma
/// jumps (alpha = -1: exponential jumps with rate eta, arrival rate C/eta).
struct TemperedStable {
    double C;
    double alpha;
    double eta;
};

/// A subordinator: nonnegative drift plus an optional tempered-stable
/// jump part. A pure-drift spec must have positive drift.
struct SubordinatorSpec {
    double gamma_drift = 0.0;
    std::optional<TemperedStable> family;

    SubordinatorSpec(double drift, std::optional<TemperedStable> fam);

    /// The identity clock T_t = t (phi(lambda) = lambda).
    static SubordinatorSpec trivial() { return SubordinatorSpec(1.0, std::nullopt); }
};

/// Laplace exponent phi(lambda) = gamma lambda
///   - C Gamma(-alpha) [(lambda+eta)^alpha - eta^alpha]   (alpha != 0)
///   + C ln(1 + lambda/eta)                               (alpha = 0).
double laplace_exponent(const SubordinatorSpec& s, double lam);

/// Levy density C u^{-alpha-1} e^{-eta u}, u > 0. Throws
/// std::domain_error for pure-drift specs.
double levy_density(const SubordinatorSpec& s, double u);

/// Integral of g against nu(ds) over (0, inf), for g with g(u) = O(u)
/// near zero and bounded on [1, inf). Split at u = 1; the integrable
/// endpoint singularity is removed by the substitution u = v^{1/(1-alpha)}
/// when alpha > 0; the tail uses the exponential decay of the measure.
/// abs_tol floors the tolerance, for integrands whose value nearly
/// cancels and whose evaluation carries quadrature noise of its own.
/// Throws ConvergenceError when the evaluation budget is exhausted.
double levy_integrate(const SubordinatorSpec& s,
                      const std::function<double(double)>& g,
                      double rel_tol, long budget = 1000000,
                      double abs_tol = 0.0);

/// One increment T_{t+dt} - T_t. Exact samplers exist only for
/// alpha in {1/2, 0, -1}; other alphas throw std::domain_error.
double sample_increment(const SubordinatorSpec& s, double dt, std::mt19937_64& rng);

enum class TraceClass { Admissible, Inadmissible };

/// Practical surrogate for the trace-class condition
/// sum_n exp(-phi(lambda_n) t) < inf: partial sums must numerically
/// converge (increments below 1e-15) before N = 1e5 terms.
TraceClass trace_class_check(const SubordinatorSpec& s, const SpectralData& sd,
                             double t);

} // namespace subcir

#endif
