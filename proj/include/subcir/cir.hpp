// The background CIR square-root diffusion: parameters, boundary
// classification, stationary density, closed-form transition density,
// affine characteristic function, and the spectral data (eigenvalues,
// eigenfunctions, expansion coefficients) of its Feynman-Kac semigroups.

#ifndef SUBCIR_CIR_HPP
#define SUBCIR_CIR_HPP

#include <complex>
#include <vector>

namespace subcir {

/// Parameters of dX = kappa (theta - X) dt + sigma sqrt(X) dB.
/// All three must be strictly positive so the gamma stationary law exists.
struct CirParams {
    double kappa;
    double theta;
    double sigma;

    CirParams(double kappa_, double theta_, double sigma_);

    /// a = 2 kappa / sigma^2, the stationary gamma rate.
    double a() const { return a_; }
    /// b = 2 kappa theta / sigma^2, the stationary gamma shape.
    double b() const { return b_; }

private:
    double a_;
    double b_;
};

enum class Boundary { Entrance, Reflecting };

/// Feller classification of the boundary at zero. The tie 2 kappa theta
/// = sigma^2 classifies as Entrance.
Boundary classify_boundary(const CirParams& p);

/// Stationary gamma density pi(x) = a^b x^{b-1} e^{-a x} / Gamma(b).
/// At x = 0: returns 0 if b > 1, a if b = 1, +infinity if b < 1.
double stationary_density(const CirParams& p, double x);

/// rho(beta) = sqrt(kappa^2 + 2 beta sigma^2), beta >= 0.
double rho(const CirParams& p, double beta);

/// Affine characteristic function Psi_t(x, beta, z) =
/// E_x[exp(-beta int_0^t X du) exp(-z X_t)] = A e^{-B x}, Re z >= 0.
std::complex<double> charfun_affine(const CirParams& p, double t, double beta,
                                    std::complex<double> z, double x);

/// Spectral data of the killed semigroup with killing rate beta*x:
/// eigenvalues lambda_n, normalization constants N_n and eigenfunctions
/// phi_n. Indexing is 1-based as in the eigenvalue ladder; constants are
/// precomputed up to n_max at construction.
class SpectralData {
public:
    SpectralData(const CirParams& p, double beta, int n_max = 512);

    const CirParams& params() const { return p_; }
    double beta() const { return beta_; }
    double rho() const { return rho_; }
    int n_max() const { return static_cast<int>(log_norm_.size()); }

    /// lambda_n = (n-1) rho + (b/2)(rho - kappa), n >= 1.
    double eigenvalue(int n) const;

    /// phi_n(x) = N_n e^{(kappa-rho)x/sigma^2} L_{n-1}^{b-1}(2 x rho / sigma^2).
    double eigenfunction(int n, double x) const;

    /// ln N_n; N_n = sqrt((n-1)!/(b)_{n-1}) (rho/kappa)^{b/2}.
    double log_norm(int n) const;

    /// Expansion coefficient f_n(z) of e^{-z x} in the eigenbasis,
    /// f_n(z) = (1/N_n) ((kappa-rho+sigma^2 z)/(kappa+rho+sigma^2 z))^{n-1}
    ///          (2 rho/(kappa+rho+sigma^2 z))^b, valid for Re z >= 0.
    std::complex<double> coeff_exp(int n, std::complex<double> z) const;

private:
    CirParams p_;
    double beta_;
    double rho_;
    double lambda1_;
    std::vector<double> log_norm_;
};

/// Symmetric transition density p_m(t, x, y) with respect to the
/// stationary measure pi(y) dy, for the semigroup killed at rate beta*x.
/// Requires t >= 1e-4 (throws BelowResolutionError below that floor),
/// x > 0, y > 0. Underflows to zero for extreme arguments.
double transition_density_m(const CirParams& p, double beta, double t,
                            double x, double y);

/// Lower floor on t accepted by transition_density_m.
inline constexpr double kDensityTimeFloor = 1e-4;

namespace detail {
/// ln p_m(t, x, y) without the public time floor; -inf on underflow.
/// Assembles the exponent so that the Bessel argument and the Gaussian
/// decay cancel analytically, which keeps t down to ~1e-12 computable.
double log_transition_density_m(const CirParams& p, double beta, double t,
                                double x, double y);
} // namespace detail

} // namespace subcir

#endif
