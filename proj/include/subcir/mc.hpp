// Monte Carlo engine: exact simulation of the background CIR process,
// the default time, the subordinator clock, and the composed pair
// (X^phi, D^phi); estimators that cross-validate the spectral results.
//
// Paths are embarrassingly parallel. Per-path random streams are
// derived deterministically from (seed, path index), so results are
// bit-identical for a fixed configuration regardless of worker count.

#ifndef SUBCIR_MC_HPP
#define SUBCIR_MC_HPP

#include "subcir/model.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

namespace subcir {

struct PathConfig {
    std::vector<double> business_times; // strictly increasing, first >= 0
    double h = 1.0 / 500.0;             // background step (years)
    long n_paths = 10000;
    std::uint64_t seed = 0;
    bool antithetic = false; // pairs share (X, clock); n_paths must be even
    int threads = 0;         // worker hint; 0 = hardware concurrency
};

/// Observations at the business times, row-major [path * n_times + i].
struct PathSet {
    std::vector<double> business_times;
    long n_paths = 0;
    std::vector<double> clock;   // subordinator T_t
    std::vector<double> x;       // X^phi
    std::vector<std::uint8_t> d; // D^phi
    std::vector<double> zeta;    // per path; +inf if not defaulted in range

    std::size_t n_times() const { return business_times.size(); }
    std::size_t idx(long path, std::size_t i) const {
        return static_cast<std::size_t>(path) * business_times.size() + i;
    }
};

/// One draw from the exact CIR transition over dt: a scaled noncentral
/// chi-square, implemented as a Poisson-mixed central chi-square.
double sample_cir_exact(const CirParams& p, double x0, double dt,
                        std::mt19937_64& rng);

/// Background trajectory on the fine grid 0, h, 2h, ... together with
/// the trapezoid hazard integral of k(x) = x and the default time.
struct BackgroundPath {
    double h = 0.0;
    std::vector<double> x;
    std::vector<double> hazard; // cumulative, hazard[0] = 0
    double zeta = 0.0;          // +inf sentinel when not crossed in range
};

/// Simulate to at least `horizon`. With extend_until_crossed the grid
/// grows until the hazard integral crosses `threshold` (throws
/// ConvergenceError past a hard cap of 1e4 years); otherwise zeta is
/// the +inf sentinel when the threshold is not reached by `horizon`.
BackgroundPath simulate_background(const CirParams& p, double x0,
                                   double horizon, double h, double threshold,
                                   std::mt19937_64& rng,
                                   bool extend_until_crossed = false);

/// First time the hazard integral reaches `threshold`, by linear
/// interpolation inside the crossing step; +inf if not crossed.
double hazard_crossing(const BackgroundPath& bg, double threshold);

/// Simulate (X^phi, D^phi) started at (x0, 0) on the business grid.
PathSet simulate_subcir(const SubCirModel& m, double x0, const PathConfig& cfg);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Mean and standard error of 1{D^phi_T = 0}; T must be a business time.
Estimate estimate_survival(const SubCirModel& m, double T, double x,
                           const PathConfig& cfg);

/// Doob-Meyer check: lhs = mean D^phi_T, rhs = mean of the integrated
/// intensity int_0^T (1 - D^phi_s) k^phi(X^phi_s) ds over the same
/// paths, with the pooled standard error of the per-path difference.
/// The time grid is uniform on [0, T] with step <= 1/50.
struct CompensatorReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double diff = 0.0;
    double std_error = 0.0;
};
CompensatorReport compensator_check(const SubCirModel& m, double T, double x,
                                    const PathConfig& cfg);

/// CSV export, one row per (path, business time):
/// path_id, t, T_t, X_phi, D_phi, k_phi_of_X.
void export_csv(const PathSet& ps, const std::function<double(double)>& k_phi,
                std::ostream& os);

} // namespace subcir

#endif
