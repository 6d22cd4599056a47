#include "subcir/mc.hpp"
#include "subcir/errors.hpp"
#include "subcir/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace subcir {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void validate_config(const PathConfig& cfg) {
    if (!(cfg.h > 0.0)) throw std::domain_error("PathConfig: h must be positive");
    if (cfg.n_paths < 1)
        throw std::domain_error("PathConfig: n_paths must be positive");
    if (cfg.business_times.empty())
        throw std::domain_error("PathConfig: business_times must be nonempty");
    if (cfg.business_times.front() < 0.0)
        throw std::domain_error("PathConfig: business times must be nonnegative");
    for (std::size_t i = 1; i < cfg.business_times.size(); ++i)
        if (!(cfg.business_times[i] > cfg.business_times[i - 1]))
            throw std::domain_error(
                "PathConfig: business_times must be strictly increasing");
    if (cfg.antithetic && cfg.n_paths % 2 != 0)
        throw std::domain_error("PathConfig: antithetic needs an even n_paths");
}

struct OnePath {
    std::vector<double> clock;
    std::vector<double> x;
    std::vector<std::uint8_t> d;
    double zeta;
};

// Simulate one unit (a path, or an antithetic pair sharing the
// background and the clock) and hand each finished path to the visitor.
template <typename Visit>
void simulate_unit(const SubCirModel& m, double x0,
                   const std::vector<double>& times, const PathConfig& cfg,
                   long unit, Visit&& visit) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ static_cast<std::uint64_t>(unit)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    u = std::min(std::max(u, 1e-300), 1.0 - 1e-16);
    const double threshold1 = -std::log1p(-u);
    const double threshold2 = -std::log(u); // antithetic partner

    const std::size_t n = times.size();
    OnePath path;
    path.clock.resize(n);
    double clk = 0.0, t_prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = times[i] - t_prev;
        if (dt > 0.0) clk += sample_increment(m.sub(), dt, rng);
        path.clock[i] = clk;
        t_prev = times[i];
    }

    BackgroundPath bg =
        simulate_background(m.cir(), x0, clk, cfg.h, threshold1, rng);

    path.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = path.clock[i];
        auto j = static_cast<std::size_t>(std::floor(ti / cfg.h + 1e-12));
        j = std::min(j, bg.x.size() - 1);
        const double dt_extra = ti - static_cast<double>(j) * cfg.h;
        path.x[i] = (dt_extra > 1e-12)
                        ? sample_cir_exact(m.cir(), bg.x[j], dt_extra, rng)
                        : bg.x[j];
    }

    path.d.resize(n);
    path.zeta = bg.zeta;
    for (std::size_t i = 0; i < n; ++i)
        path.d[i] = (bg.zeta <= path.clock[i]) ? 1 : 0;
    visit(cfg.antithetic ? 2 * unit : unit, path);

    if (cfg.antithetic) {
        path.zeta = hazard_crossing(bg, threshold2);
        for (std::size_t i = 0; i < n; ++i)
            path.d[i] = (path.zeta <= path.clock[i]) ? 1 : 0;
        visit(2 * unit + 1, path);
    }
}

// Run all paths, possibly across worker threads. The visitor is called
// once per path with disjoint path indices, so writes into preallocated
// per-path slots need no locking.
template <typename Visit>
void run_paths(const SubCirModel& m, double x0,
               const std::vector<double>& times, const PathConfig& cfg,
               Visit&& visit) {
    const long units = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    long n_workers = cfg.threads > 0
                         ? cfg.threads
                         : static_cast<long>(std::thread::hardware_concurrency());
    n_workers = std::max(1L, std::min(n_workers, units));

    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&](long lo, long hi) {
        try {
            for (long unit = lo; unit < hi; ++unit)
                simulate_unit(m, x0, times, cfg, unit, visit);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    if (n_workers == 1) {
        work(0, units);
    } else {
        std::vector<std::thread> workers;
        const long per = (units + n_workers - 1) / n_workers;
        for (long w = 0; w < n_workers; ++w) {
            const long lo = w * per;
            const long hi = std::min(units, lo + per);
            if (lo >= hi) break;
            workers.emplace_back(work, lo, hi);
        }
        for (auto& t : workers) t.join();
    }
    if (error) std::rethrow_exception(error);
}

} // namespace

double sample_cir_exact(const CirParams& p, double x0, double dt,
                        std::mt19937_64& rng) {
    if (!(dt > 0.0)) throw std::domain_error("sample_cir_exact: dt must be positive");
    if (x0 < 0.0) throw std::domain_error("sample_cir_exact: x0 must be nonnegative");
    const double em = std::exp(-p.kappa * dt);
    const double c = p.sigma * p.sigma * (1.0 - em) / (4.0 * p.kappa);
    const double delta = 4.0 * p.kappa * p.theta / (p.sigma * p.sigma);
    const double lambda_nc = x0 * em / c;
    long n = 0;
    if (lambda_nc > 0.0) {
        std::poisson_distribution<long> poisson(0.5 * lambda_nc);
        n = poisson(rng);
    }
    std::gamma_distribution<double> gamma(0.5 * delta + static_cast<double>(n), 2.0);
    return c * gamma(rng);
}

BackgroundPath simulate_background(const CirParams& p, double x0,
                                   double horizon, double h, double threshold,
                                   std::mt19937_64& rng,
                                   bool extend_until_crossed) {
    if (!(h > 0.0)) throw std::domain_error("simulate_background: h must be positive");
    if (horizon < 0.0)
        throw std::domain_error("simulate_background: horizon must be nonnegative");
    if (x0 < 0.0)
        throw std::domain_error("simulate_background: x0 must be nonnegative");

    BackgroundPath bg;
    bg.h = h;
    bg.x.push_back(x0);
    bg.hazard.push_back(0.0);
    const auto step = [&] {
        const double xn = sample_cir_exact(p, bg.x.back(), h, rng);
        bg.hazard.push_back(bg.hazard.back() + 0.5 * h * (bg.x.back() + xn));
        bg.x.push_back(xn);
    };

    const auto n_steps = static_cast<long>(std::ceil(horizon / h - 1e-9));
    for (long i = 0; i < n_steps; ++i) step();

    if (extend_until_crossed) {
        constexpr double cap = 1e4;
        while (bg.hazard.back() < threshold) {
            if (static_cast<double>(bg.x.size() - 1) * h > cap)
                throw ConvergenceError(
                    "simulate_background: no default within the 1e4-year cap");
            step();
        }
    }
    bg.zeta = hazard_crossing(bg, threshold);
    return bg;
}

double hazard_crossing(const BackgroundPath& bg, double threshold) {
    if (!(threshold > 0.0)) return 0.0;
    const auto it =
        std::lower_bound(bg.hazard.begin(), bg.hazard.end(), threshold);
    if (it == bg.hazard.end()) return kInf;
    const auto j = static_cast<std::size_t>(it - bg.hazard.begin());
    if (j == 0) return 0.0;
    const double lo = bg.hazard[j - 1];
    const double hi = bg.hazard[j];
    const double frac = (hi > lo) ? (threshold - lo) / (hi - lo) : 1.0;
    return (static_cast<double>(j - 1) + frac) * bg.h;
}

PathSet simulate_subcir(const SubCirModel& m, double x0, const PathConfig& cfg) {
    validate_config(cfg);
    if (x0 < 0.0) throw std::domain_error("simulate_subcir: x0 must be nonnegative");

    PathSet ps;
    ps.business_times = cfg.business_times;
    ps.n_paths = cfg.n_paths;
    const std::size_t n = ps.business_times.size();
    ps.clock.resize(static_cast<std::size_t>(cfg.n_paths) * n);
    ps.x.resize(ps.clock.size());
    ps.d.resize(ps.clock.size());
    ps.zeta.resize(static_cast<std::size_t>(cfg.n_paths));

    run_paths(m, x0, cfg.business_times, cfg, [&](long path, const OnePath& p) {
        const std::size_t base = static_cast<std::size_t>(path) * n;
        std::copy(p.clock.begin(), p.clock.end(), ps.clock.begin() + base);
        std::copy(p.x.begin(), p.x.end(), ps.x.begin() + base);
        std::copy(p.d.begin(), p.d.end(), ps.d.begin() + base);
        ps.zeta[static_cast<std::size_t>(path)] = p.zeta;
    });
    return ps;
}

Estimate estimate_survival(const SubCirModel& m, double T, double x,
                           const PathConfig& cfg) {
    validate_config(cfg);
    if (T == 0.0) return {1.0, 0.0};
    std::size_t i_T = cfg.business_times.size();
    for (std::size_t i = 0; i < cfg.business_times.size(); ++i)
        if (std::abs(cfg.business_times[i] - T) < 1e-12) i_T = i;
    if (i_T == cfg.business_times.size())
        throw std::domain_error("estimate_survival: T must be a business time");

    std::vector<std::uint8_t> alive(static_cast<std::size_t>(cfg.n_paths));
    run_paths(m, x, cfg.business_times, cfg, [&](long path, const OnePath& p) {
        alive[static_cast<std::size_t>(path)] = p.d[i_T] ? 0 : 1;
    });

    Estimate est;
    if (cfg.antithetic) {
        const long pairs = cfg.n_paths / 2;
        double sum = 0.0, sumsq = 0.0;
        for (long k = 0; k < pairs; ++k) {
            const double mk = 0.5 * (alive[2 * k] + alive[2 * k + 1]);
            sum += mk;
            sumsq += mk * mk;
        }
        est.value = sum / pairs;
        if (pairs > 1) {
            const double var =
                (sumsq - sum * sum / pairs) / (pairs - 1.0);
            est.std_error = std::sqrt(std::max(0.0, var) / pairs);
        }
    } else {
        double sum = 0.0;
        for (auto a : alive) sum += a;
        est.value = sum / static_cast<double>(cfg.n_paths);
        if (cfg.n_paths > 1)
            est.std_error = std::sqrt(est.value * (1.0 - est.value) /
                                      static_cast<double>(cfg.n_paths));
    }
    return est;
}

CompensatorReport compensator_check(const SubCirModel& m, double T, double x,
                                    const PathConfig& cfg) {
    if (!(T > 0.0))
        throw std::domain_error("compensator_check: T must be positive");
    PathConfig run_cfg = cfg;
    const auto n_steps = static_cast<long>(std::ceil(50.0 * T));
    const double step = T / static_cast<double>(n_steps);
    run_cfg.business_times.resize(static_cast<std::size_t>(n_steps));
    for (long i = 0; i < n_steps; ++i)
        run_cfg.business_times[static_cast<std::size_t>(i)] =
            static_cast<double>(i + 1) * step;
    validate_config(run_cfg);

    // k^phi is evaluated through a cached linear-interpolation grid: the
    // drift part gamma*x is exact and only the bounded jump part is
    // tabulated (clamped beyond the grid, where it has flattened out).
    const double gamma = m.sub().gamma_drift;
    const int grid_n = 801;
    const double grid_hi = 4.0;
    std::vector<double> jump_part(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        const double xi = grid_hi * i / (grid_n - 1.0);
        jump_part[static_cast<std::size_t>(i)] = m.killing_rate(xi) - gamma * xi;
    }
    const auto k_phi = [&](double xv) {
        const double pos = std::min(xv, grid_hi) / grid_hi * (grid_n - 1.0);
        const auto j = std::min(static_cast<std::size_t>(pos),
                                static_cast<std::size_t>(grid_n - 2));
        const double frac = pos - static_cast<double>(j);
        return gamma * xv +
               (1.0 - frac) * jump_part[j] + frac * jump_part[j + 1];
    };

    const std::size_t n = run_cfg.business_times.size();
    std::vector<double> defaulted(static_cast<std::size_t>(run_cfg.n_paths));
    std::vector<double> integral(static_cast<std::size_t>(run_cfg.n_paths));
    run_paths(m, x, run_cfg.business_times, run_cfg,
              [&](long path, const OnePath& p) {
                  double acc = 0.0;
                  double g_prev = k_phi(x); // t = 0: X = x, D = 0
                  for (std::size_t i = 0; i < n; ++i) {
                      const double g =
                          p.d[i] ? 0.0 : k_phi(p.x[i]);
                      acc += 0.5 * step * (g_prev + g);
                      g_prev = g;
                  }
                  defaulted[static_cast<std::size_t>(path)] = p.d[n - 1];
                  integral[static_cast<std::size_t>(path)] = acc;
              });

    CompensatorReport rep;
    double sum_d = 0.0, sum_i = 0.0;
    for (long p = 0; p < run_cfg.n_paths; ++p) {
        sum_d += defaulted[static_cast<std::size_t>(p)];
        sum_i += integral[static_cast<std::size_t>(p)];
    }
    const auto np = static_cast<double>(run_cfg.n_paths);
    rep.lhs = sum_d / np;
    rep.rhs = sum_i / np;
    rep.diff = rep.lhs - rep.rhs;

    double var = 0.0;
    for (long p = 0; p < run_cfg.n_paths; ++p) {
        const double d = defaulted[static_cast<std::size_t>(p)] -
                         integral[static_cast<std::size_t>(p)] - rep.diff;
        var += d * d;
    }
    if (run_cfg.n_paths > 1)
        rep.std_error = std::sqrt(var / (np - 1.0) / np);
    return rep;
}

void export_csv(const PathSet& ps, const std::function<double(double)>& k_phi,
                std::ostream& os) {
    os << "path_id,t,T_t,X_phi,D_phi,k_phi_of_X\n";
    char buf[256];
    for (long p = 0; p < ps.n_paths; ++p) {
        for (std::size_t i = 0; i < ps.n_times(); ++i) {
            const std::size_t j = ps.idx(p, i);
            std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%d,%.17g\n",
                          p, ps.business_times[i], ps.clock[j], ps.x[j],
                          static_cast<int>(ps.d[j]), k_phi(ps.x[j]));
            os << buf;
        }
    }
}

} // namespace subcir
