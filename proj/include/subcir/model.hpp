// The subordinate model: eigenfunction expansions with phi(lambda_n)
// eigenvalues, survival probability, credit spreads, and the jump
// process local characteristics (killing rate, drift, state-dependent
// Levy density).
//
// Model objects are immutable after construction; all evaluations are
// pure and safe to run concurrently.

#ifndef SUBCIR_MODEL_HPP
#define SUBCIR_MODEL_HPP

#include "subcir/cir.hpp"
#include "subcir/subordinator.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace subcir {

/// Series truncation policy for the eigenfunction expansions.
struct Truncation {
    int n_max = 200;
    double tol = 1e-10;
    double t_min = 1e-3;
};

/// Quadrature policy for Levy-measure and inner-product integrals.
struct QuadPolicy {
    double rel_tol = 1e-8;
    long budget = 1000000;
};

class SubCirModel {
public:
    /// Throws std::domain_error if the policy is invalid (need
    /// n_max >= 8, tol > 0, t_min > 0) or if the subordinated expansion
    /// fails the trace-class admissibility check at t_min.
    SubCirModel(CirParams cir, SubordinatorSpec sub,
                Truncation trunc = {}, QuadPolicy quad = {});

    const CirParams& cir() const { return cir_; }
    const SubordinatorSpec& sub() const { return sub_; }
    const Truncation& truncation() const { return trunc_; }
    const QuadPolicy& quad() const { return quad_; }

    /// Spectral data of the background semigroup, beta in {0, 1}.
    const SpectralData& spectral(double beta) const;

    /// phi(lambda_n^beta), cached at construction for n <= n_max.
    double phi_eigenvalue(double beta, int n) const;

    /// Sum_n e^{-phi(lambda_n^beta) t} f_n phi_n^beta(x) with adaptive
    /// truncation: stop once |term| < tol (1 + |partial|) for three
    /// consecutive n. coeff is 1-based. Requires t >= t_min (throws
    /// BelowResolutionError); throws ConvergenceError if the stopping
    /// rule has not fired by n_max.
    double apply_semigroup(double beta, double t,
                           const std::function<double(int)>& coeff,
                           double x) const;
    std::complex<double> apply_semigroup_complex(
        double beta, double t,
        const std::function<std::complex<double>(int)>& coeff, double x) const;

    /// (1-d) P^{1,phi}_horizon(x, I), clamped to [0, 1]. horizon = 0
    /// returns 1-d; horizon in (0, t_min) throws BelowResolutionError.
    double survival_probability(double horizon, double x, int d) const;

    /// -(1/horizon) ln survival_probability(horizon, x, 0), horizon >=
    /// t_min. Returns +infinity when the survival probability
    /// underflows to zero.
    double credit_spread(double horizon, double x) const;

    /// Long-maturity spread phi(lambda_1^1).
    double asymptotic_spread() const;

    /// Subordinate characteristic function
    /// Psi^phi_t(x, beta, z) = Sum e^{-phi(lambda_n) t} f_n(z) phi_n(x),
    /// Re z >= 0.
    std::complex<double> charfun_sub(double t, double beta,
                                     std::complex<double> z, double x) const;

    /// Killing rate k^phi(x) = gamma x + int (1 - Psi_s(x,1,0)) nu(ds),
    /// x >= 0.
    double killing_rate(double x) const;

    /// State-dependent Levy density pi^{beta,phi}(x, y) =
    /// pi(x+y) int p_m^beta(s, x, x+y) nu(ds). Requires x > 0 and
    /// |y| >= 1e-6 (the s-integral diverges at y = 0 for
    /// infinite-activity subordinators); returns 0 for x + y <= 0.
    double levy_density_state(double beta, double x, double y) const;

    /// Drift with respect to the truncation function y 1{|y| <= 1}:
    /// b^{beta,phi}(x) = gamma kappa (theta - x)
    ///   + int ( int_{|y|<=1} y p^beta(s, x, x+y) dy ) nu(ds), x > 0.
    double drift_sub(double beta, double x) const;

private:
    int beta_slot(double beta) const;

    CirParams cir_;
    SubordinatorSpec sub_;
    Truncation trunc_;
    QuadPolicy quad_;
    std::vector<SpectralData> spectral_;   // slot 0: beta=0, slot 1: beta=1
    std::vector<std::vector<double>> phi_; // phi(lambda_n), same slots
};

} // namespace subcir

#endif
