// Batch CLI: configure a model from JSON, run spectral / pricing /
// simulation computations, and emit CSV or JSON artifacts.

#include "subcir/cir.hpp"
#include "subcir/config.hpp"
#include "subcir/errors.hpp"
#include "subcir/mc.hpp"
#include "subcir/model.hpp"
#include "subcir/pricing.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace subcir;

void diagnostic(const std::string& level, const std::string& message) {
    json line;
    line["level"] = level;
    line["message"] = message;
    std::cerr << line.dump() << "\n";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// A small column-oriented result table with CSV and JSON writers.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write_csv(std::ostream& os) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << columns[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << fmt(row[i]);
            os << "\n";
        }
    }

    void write_json(std::ostream& os) const {
        json out = json::array();
        for (const auto& row : rows) {
            json rec;
            for (std::size_t i = 0; i < row.size(); ++i)
                rec[columns[i]] = row[i];
            out.push_back(rec);
        }
        os << out.dump(2) << "\n";
    }

    void write(std::ostream& os, const std::string& format) const {
        if (format == "json")
            write_json(os);
        else
            write_csv(os);
    }
};

Table run_spectrum(const SubCirModel& m, const SpectrumConfig& sc) {
    Table t;
    t.columns = {"n",        "lambda_beta1", "phi_lambda_beta1",
                 "norm_beta1", "lambda_beta0", "phi_lambda_beta0",
                 "norm_beta0"};
    const int count = std::min(sc.count, m.truncation().n_max);
    for (int n = 1; n <= count; ++n)
        t.rows.push_back({static_cast<double>(n),
                          m.spectral(1.0).eigenvalue(n), m.phi_eigenvalue(1.0, n),
                          std::exp(m.spectral(1.0).log_norm(n)),
                          m.spectral(0.0).eigenvalue(n), m.phi_eigenvalue(0.0, n),
                          std::exp(m.spectral(0.0).log_norm(n))});
    return t;
}

Table run_survival(const SubCirModel& m, const GridConfig& g) {
    Table t;
    t.columns = {"T", "Q"};
    for (double T : g.horizons)
        t.rows.push_back({T, m.survival_probability(T, g.x, 0)});
    return t;
}

Table run_spreads(const SubCirModel& m, const GridConfig& g) {
    Table t;
    t.columns = {"T", "S"};
    for (double T : g.horizons) t.rows.push_back({T, m.credit_spread(T, g.x)});
    t.rows.push_back(
        {std::numeric_limits<double>::infinity(), m.asymptotic_spread()});
    return t;
}

Table run_price(const SubCirModel& m, const PriceConfig& pc) {
    Table t;
    t.columns = {"T", "r", "R", "x", "d", "price"};
    const double price = zcb_defaultable(m, 0.0, pc.maturity, pc.x, pc.d,
                                         pc.rate, pc.recovery);
    t.rows.push_back({pc.maturity, pc.rate, pc.recovery, pc.x,
                      static_cast<double>(pc.d), price});
    return t;
}

Table run_levy(const SubCirModel& m, const LevyConfig& lc) {
    Table t;
    t.columns = {"x", "y", "pi0_phi"};
    for (double x : lc.x_values) {
        for (int i = 0; i < lc.y_count; ++i) {
            const double y =
                lc.y_min + (lc.y_max - lc.y_min) * i / (lc.y_count - 1.0);
            if (std::abs(y) < 1e-6 || x + y <= 0.0) continue;
            t.rows.push_back({x, y, m.levy_density_state(0.0, x, y)});
        }
    }
    return t;
}

Table run_intensity(const SubCirModel& m, const IntensityConfig& ic) {
    Table t;
    t.columns = {"x", "k_phi"};
    for (int i = 0; i < ic.x_count; ++i) {
        const double x =
            ic.x_min + (ic.x_max - ic.x_min) * i / (ic.x_count - 1.0);
        t.rows.push_back({x, m.killing_rate(x)});
    }
    return t;
}

void run_simulate(const SubCirModel& m, const RunConfig& cfg,
                  std::ostream& os, const std::string& format) {
    const PathSet ps = simulate_subcir(m, cfg.simulate.x0, cfg.mc);
    const auto k = [&](double x) { return m.killing_rate(x); };
    if (format == "json") {
        json out = json::array();
        for (long p = 0; p < ps.n_paths; ++p)
            for (std::size_t i = 0; i < ps.n_times(); ++i) {
                const std::size_t j = ps.idx(p, i);
                json rec;
                rec["path_id"] = p;
                rec["t"] = ps.business_times[i];
                rec["T_t"] = ps.clock[j];
                rec["X_phi"] = ps.x[j];
                rec["D_phi"] = static_cast<int>(ps.d[j]);
                rec["k_phi_of_X"] = k(ps.x[j]);
                out.push_back(rec);
            }
        os << out.dump(2) << "\n";
    } else {
        export_csv(ps, k, os);
    }
}

// Machine-readable validation report; returns true when every check
// passes.
bool run_validate(const SubCirModel& m, const RunConfig& cfg,
                  std::ostream& os) {
    json report;

    {
        const SubCirModel trivial(m.cir(), SubordinatorSpec::trivial(),
                                  m.truncation(), m.quad());
        double worst = 0.0;
        for (double t : {0.25, 1.0, 5.0})
            for (double x : {0.02, 0.1, 0.3})
                for (double z : {0.0, 1.0, 5.0})
                    for (double beta : {0.0, 1.0}) {
                        const auto spectral = trivial.charfun_sub(t, beta, z, x);
                        const auto affine =
                            charfun_affine(m.cir(), t, beta, z, x);
                        worst = std::max(worst, std::abs(spectral - affine));
                    }
        report["affine_parity"] = {{"max_abs_diff", worst},
                                   {"tolerance", 1e-8},
                                   {"pass", worst < 1e-8}};
    }

    {
        PathConfig pc = cfg.mc;
        pc.business_times = {cfg.validate.T};
        const Estimate est =
            estimate_survival(m, cfg.validate.T, cfg.validate.x, pc);
        const double analytic =
            m.survival_probability(cfg.validate.T, cfg.validate.x, 0);
        const double err = std::abs(est.value - analytic);
        report["mc_survival"] = {{"mc", est.value},
                                 {"spectral", analytic},
                                 {"std_error", est.std_error},
                                 {"pass", err <= 3.0 * est.std_error}};
    }

    {
        const CompensatorReport rep =
            compensator_check(m, cfg.validate.T, cfg.validate.x, cfg.mc);
        report["compensator"] = {{"lhs", rep.lhs},
                                 {"rhs", rep.rhs},
                                 {"diff", rep.diff},
                                 {"std_error", rep.std_error},
                                 {"pass",
                                  std::abs(rep.diff) <= 3.0 * rep.std_error}};
    }

    bool pass = true;
    for (const auto& item : report.items())
        pass = pass && item.value().at("pass").get<bool>();
    report["pass"] = pass;
    os << report.dump(2) << "\n"; // nlohmann::json orders keys
    return pass;
}

int run(int argc, char** argv) {
    CLI::App app{"SubCIR default-intensity model: batch computations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    int threads = 0;
    app.add_option("--config", config_path, "JSON configuration file")
        ->required();
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads,
                   "worker-count hint (does not change results)");

    const std::vector<std::string> commands = {
        "spectrum", "survival", "spreads",  "price",
        "levy",     "intensity", "simulate", "validate"};
    for (const auto& name : commands) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        diagnostic("error", std::string("argument error: ") + e.what());
        return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = load_config(config_path);
        if (const char* env_seed = std::getenv("SUBCIR_SEED")) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(env_seed, &end, 10);
            if (end == env_seed || *end != '\0')
                throw ConfigError({"SUBCIR_SEED: must be a nonnegative integer"});
            cfg.mc.seed = v;
        }
        if (threads > 0) cfg.mc.threads = threads;

        diagnostic("info", "running command: " + command);
        const SubCirModel model = cfg.make_model();

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) throw ConfigError({"cannot open output file: " + out_path});
        }
        std::ostream& os = out_path.empty() ? std::cout : file;

        if (command == "spectrum") {
            run_spectrum(model, cfg.spectrum).write(os, format);
        } else if (command == "survival") {
            run_survival(model, cfg.survival).write(os, format);
        } else if (command == "spreads") {
            run_spreads(model, cfg.spreads).write(os, format);
        } else if (command == "price") {
            run_price(model, cfg.price).write(os, format);
        } else if (command == "levy") {
            run_levy(model, cfg.levy).write(os, format);
        } else if (command == "intensity") {
            run_intensity(model, cfg.intensity).write(os, format);
        } else if (command == "simulate") {
            run_simulate(model, cfg, os, format);
        } else if (command == "validate") {
            if (!run_validate(model, cfg, os)) {
                diagnostic("error", "validation failed");
                return 1;
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        diagnostic("error", e.what());
        return 2;
    } catch (const BelowResolutionError& e) {
        diagnostic("error", std::string("below resolution: ") + e.what());
        return 3;
    } catch (const std::domain_error& e) {
        diagnostic("error", std::string("configuration rejected: ") + e.what());
        return 2;
    } catch (const ConvergenceError& e) {
        diagnostic("error", std::string("did not converge: ") + e.what());
        return 3;
    } catch (const std::exception& e) {
        diagnostic("error", e.what());
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
