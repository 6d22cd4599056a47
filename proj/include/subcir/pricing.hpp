// Risk-neutral pricing of credit-sensitive claims: payoff expansion
// coefficients against the stationary measure, the general claim price,
// and the defaultable / risk-free zero-coupon bond wrappers.

#ifndef SUBCIR_PRICING_HPP
#define SUBCIR_PRICING_HPP

#include "subcir/model.hpp"

#include <functional>
#include <vector>

namespace subcir {

/// A credit-sensitive claim: promised payoff f0 at maturity, recovery
/// payoff f1 (paid at maturity), and optionally a payment R(x) made at
/// the default time instead. Square-integrability of f0 and f1 against
/// the stationary density is checked numerically at construction.
class Claim {
public:
    enum class Timing { AtMaturity, AtDefault };

    Claim(const SubCirModel& m, double maturity, double rate,
          std::function<double(double)> promised,
          std::function<double(double)> recovery,
          Timing timing = Timing::AtMaturity,
          std::function<double(double)> default_payment = {});

    /// Constant-recovery convenience: f1 = R in [0, 1].
    Claim(const SubCirModel& m, double maturity, double rate,
          std::function<double(double)> promised, double recovery_constant);

    double maturity() const { return maturity_; }
    double rate() const { return rate_; }
    const std::function<double(double)>& promised() const { return promised_; }
    const std::function<double(double)>& recovery() const { return recovery_; }
    Timing timing() const { return timing_; }
    const std::function<double(double)>& default_payment() const {
        return default_payment_;
    }

private:
    double maturity_;
    double rate_;
    std::function<double(double)> promised_;
    std::function<double(double)> recovery_;
    Timing timing_;
    std::function<double(double)> default_payment_;
};

/// Expansion coefficients f_n = int f(x) phi_n^beta(x) pi(x) dx for
/// n = 1..N, by gamma-weight Gauss quadrature with 2N+16 nodes. The
/// eigenfunction exponential is absorbed into the weight's rate
/// parameter, so polynomial payoffs integrate exactly.
std::vector<double> payoff_coefficients(const SubCirModel& m, double beta,
                                        const std::function<double(double)>& f,
                                        int N);

/// Price at valuation time t of the claim, state x, default flag d:
///   e^{-r(T-t)} [ P^{0,phi}_{T-t} f1(x) + (1-d) P^{1,phi}_{T-t}(f0-f1)(x) ]
/// plus, for default-time payments,
///   (1-d) int_t^T e^{-r(u-t)} P^{1,phi}_{u-t}(R k^phi)(x) du.
/// Requires T - t >= t_min.
double price_claim(const SubCirModel& m, const Claim& c, double t, double x,
                   int d);

/// Defaultable zero-coupon bond with constant recovery R:
///   e^{-r(T-t)} [ (1-d) Q + R (1 - (1-d) Q) ],  Q = P^{1,phi}_{T-t}(x, I).
double zcb_defaultable(const SubCirModel& m, double t, double T, double x,
                       int d, double r, double R);

/// Default-free zero-coupon bond when the model is read as a short-rate
/// model: the same semigroup evaluation as the survival probability.
double riskfree_bond_subcir(const SubCirModel& m, double t, double T, double x);

} // namespace subcir

#endif
