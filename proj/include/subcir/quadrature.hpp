// Quadrature utilities: adaptive Gauss-Kronrod integration on finite
// intervals and generalized Gauss-Laguerre rules for the gamma weight
// u^nu e^{-u} on (0, inf).

#ifndef SUBCIR_QUADRATURE_HPP
#define SUBCIR_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace subcir::quadrature {

struct Budget {
    long max_evals = 1000000;
    long used = 0;
};

/// Adaptive 7-15 Gauss-Kronrod integration of f on [a, b].
/// Throws ConvergenceError when the evaluation budget is exhausted
/// before the requested tolerance is met.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b,
                          double rel_tol, double abs_tol, Budget& budget);

/// Convenience overload with a fresh default budget.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double rel_tol);

/// Nodes and weights of the m-point Gauss rule for the weight
/// u^nu e^{-u} on (0, inf), nu > -1. Exact for polynomials of degree
/// 2m-1. Throws ConvergenceError if the eigenvalue iteration fails.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_gamma(int m, double nu);

} // namespace subcir::quadrature

#endif
