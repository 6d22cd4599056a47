#include "subcir/config.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace subcir {

namespace {

using nlohmann::json;

std::string join_issues(const std::vector<std::string>& issues) {
    std::ostringstream os;
    os << "invalid configuration (" << issues.size() << " issue"
       << (issues.size() == 1 ? "" : "s") << "):";
    for (const auto& s : issues) os << "\n  - " << s;
    return os.str();
}

// Collects schema violations so that they can all be reported at once.
struct Checker {
    std::vector<std::string> issues;

    void fail(const std::string& what) { issues.push_back(what); }

    void reject_unknown(const json& obj, const std::string& section,
                        std::initializer_list<const char*> allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool known = false;
            for (const char* k : allowed)
                if (it.key() == k) known = true;
            if (!known) fail(section + ": unknown key '" + it.key() + "'");
        }
    }

    const json* section(const json& root, const char* name) {
        if (!root.contains(name)) return nullptr;
        if (!root.at(name).is_object()) {
            fail(std::string(name) + ": must be an object");
            return nullptr;
        }
        return &root.at(name);
    }

    template <typename T, typename Pred>
    void number(const json& obj, const std::string& section, const char* key,
                T& out, Pred ok, const char* constraint) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(section + "." + key + ": must be a number");
            return;
        }
        const T value = v.get<T>();
        if (!ok(value)) {
            fail(section + "." + key + ": " + constraint);
            return;
        }
        out = value;
    }

    void integer(const json& obj, const std::string& section, const char* key,
                 long& out, long lo, const char* constraint) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            fail(section + "." + key + ": must be an integer");
            return;
        }
        const long value = v.get<long>();
        if (value < lo) {
            fail(section + "." + key + ": " + constraint);
            return;
        }
        out = value;
    }

    void boolean(const json& obj, const std::string& section, const char* key,
                 bool& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_boolean()) {
            fail(section + "." + key + ": must be a boolean");
            return;
        }
        out = v.get<bool>();
    }

    void number_array(const json& obj, const std::string& section,
                      const char* key, std::vector<double>& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_array() || v.empty()) {
            fail(section + "." + key + ": must be a nonempty array of numbers");
            return;
        }
        std::vector<double> values;
        for (const auto& e : v) {
            if (!e.is_number()) {
                fail(section + "." + key + ": must be a nonempty array of numbers");
                return;
            }
            values.push_back(e.get<double>());
        }
        out = std::move(values);
    }
};

void parse_model(Checker& c, const json& root, RunConfig& cfg) {
    const json* model = c.section(root, "model");
    if (!model) return;
    c.reject_unknown(*model, "model",
                     {"kappa", "theta", "sigma", "subordinator"});
    const auto positive = [](double v) { return v > 0.0; };
    c.number(*model, "model", "kappa", cfg.kappa, positive, "must be positive");
    c.number(*model, "model", "theta", cfg.theta, positive, "must be positive");
    c.number(*model, "model", "sigma", cfg.sigma, positive, "must be positive");

    const json* sub = c.section(*model, "subordinator");
    if (!sub) return;
    c.reject_unknown(*sub, "model.subordinator", {"gamma", "C", "alpha", "eta"});
    c.number(*sub, "model.subordinator", "gamma", cfg.gamma,
             [](double v) { return v >= 0.0; }, "must be nonnegative");
    const bool has_family =
        sub->contains("C") || sub->contains("alpha") || sub->contains("eta");
    if (!has_family) return;
    if (!(sub->contains("C") && sub->contains("alpha") && sub->contains("eta"))) {
        c.fail("model.subordinator: C, alpha, eta must be given together");
        return;
    }
    TemperedStable fam{0.5, 0.5, 1.0};
    c.number(*sub, "model.subordinator", "C", fam.C,
             [](double v) { return v > 0.0; }, "must be positive");
    c.number(*sub, "model.subordinator", "alpha", fam.alpha,
             [](double v) { return v < 1.0; }, "must be < 1");
    c.number(*sub, "model.subordinator", "eta", fam.eta,
             [](double v) { return v > 0.0; }, "must be positive");
    cfg.family = fam;
}

void parse_numerics(Checker& c, const json& root, RunConfig& cfg) {
    const json* num = c.section(root, "numerics");
    if (!num) return;
    c.reject_unknown(*num, "numerics",
                     {"n_max", "tol", "t_min", "quad_rel_tol", "quad_budget"});
    long n_max = cfg.truncation.n_max;
    c.integer(*num, "numerics", "n_max", n_max, 8, "must be >= 8");
    if (n_max > 512) c.fail("numerics.n_max: must be <= 512");
    else cfg.truncation.n_max = static_cast<int>(n_max);
    c.number(*num, "numerics", "tol", cfg.truncation.tol,
             [](double v) { return v > 0.0; }, "must be positive");
    c.number(*num, "numerics", "t_min", cfg.truncation.t_min,
             [](double v) { return v > 0.0; }, "must be positive");
    c.number(*num, "numerics", "quad_rel_tol", cfg.quadrature.rel_tol,
             [](double v) { return v >= 1e-12 && v <= 1e-4; },
             "must lie in [1e-12, 1e-4]");
    long budget = cfg.quadrature.budget;
    c.integer(*num, "numerics", "quad_budget", budget, 1, "must be >= 1");
    cfg.quadrature.budget = budget;
}

void parse_mc(Checker& c, const json& root, RunConfig& cfg) {
    const json* mc = c.section(root, "mc");
    if (!mc) return;
    c.reject_unknown(*mc, "mc",
                     {"n_paths", "h", "seed", "antithetic", "business_times"});
    long n_paths = cfg.mc.n_paths;
    c.integer(*mc, "mc", "n_paths", n_paths, 1, "must be positive");
    cfg.mc.n_paths = n_paths;
    c.number(*mc, "mc", "h", cfg.mc.h, [](double v) { return v > 0.0; },
             "must be positive");
    long seed = static_cast<long>(cfg.mc.seed);
    c.integer(*mc, "mc", "seed", seed, 0, "must be nonnegative");
    cfg.mc.seed = static_cast<std::uint64_t>(seed);
    c.boolean(*mc, "mc", "antithetic", cfg.mc.antithetic);
    c.number_array(*mc, "mc", "business_times", cfg.mc.business_times);
    if (!cfg.mc.business_times.empty()) {
        if (cfg.mc.business_times.front() < 0.0)
            c.fail("mc.business_times: entries must be nonnegative");
        for (std::size_t i = 1; i < cfg.mc.business_times.size(); ++i)
            if (!(cfg.mc.business_times[i] > cfg.mc.business_times[i - 1])) {
                c.fail("mc.business_times: must be strictly increasing");
                break;
            }
    }
    if (cfg.mc.antithetic && cfg.mc.n_paths % 2 != 0)
        c.fail("mc.n_paths: must be even with antithetic sampling");
}

void parse_grid(Checker& c, const json& root, const char* name,
                GridConfig& out) {
    const json* g = c.section(root, name);
    if (!g) return;
    c.reject_unknown(*g, name, {"x", "horizons"});
    c.number(*g, name, "x", out.x, [](double v) { return v >= 0.0; },
             "must be nonnegative");
    c.number_array(*g, name, "horizons", out.horizons);
    for (double h : out.horizons)
        if (!(h > 0.0)) {
            c.fail(std::string(name) + ".horizons: entries must be positive");
            break;
        }
}

void parse_commands(Checker& c, const json& root, RunConfig& cfg) {
    if (const json* s = c.section(root, "spectrum")) {
        c.reject_unknown(*s, "spectrum", {"count"});
        long count = cfg.spectrum.count;
        c.integer(*s, "spectrum", "count", count, 1, "must be positive");
        cfg.spectrum.count = static_cast<int>(count);
    }
    parse_grid(c, root, "survival", cfg.survival);
    parse_grid(c, root, "spreads", cfg.spreads);
    if (const json* s = c.section(root, "intensity")) {
        c.reject_unknown(*s, "intensity", {"x_min", "x_max", "x_count"});
        c.number(*s, "intensity", "x_min", cfg.intensity.x_min,
                 [](double v) { return v >= 0.0; }, "must be nonnegative");
        c.number(*s, "intensity", "x_max", cfg.intensity.x_max,
                 [](double v) { return v > 0.0; }, "must be positive");
        long n = cfg.intensity.x_count;
        c.integer(*s, "intensity", "x_count", n, 2, "must be >= 2");
        cfg.intensity.x_count = static_cast<int>(n);
        if (!(cfg.intensity.x_max > cfg.intensity.x_min))
            c.fail("intensity: x_max must exceed x_min");
    }
    if (const json* s = c.section(root, "levy")) {
        c.reject_unknown(*s, "levy", {"x_values", "y_min", "y_max", "y_count"});
        c.number_array(*s, "levy", "x_values", cfg.levy.x_values);
        for (double x : cfg.levy.x_values)
            if (!(x > 0.0)) {
                c.fail("levy.x_values: entries must be positive");
                break;
            }
        c.number(*s, "levy", "y_min", cfg.levy.y_min,
                 [](double) { return true; }, "");
        c.number(*s, "levy", "y_max", cfg.levy.y_max,
                 [](double) { return true; }, "");
        long n = cfg.levy.y_count;
        c.integer(*s, "levy", "y_count", n, 2, "must be >= 2");
        cfg.levy.y_count = static_cast<int>(n);
        if (!(cfg.levy.y_max > cfg.levy.y_min))
            c.fail("levy: y_max must exceed y_min");
    }
    if (const json* s = c.section(root, "price")) {
        c.reject_unknown(*s, "price",
                         {"maturity", "rate", "recovery", "x", "d"});
        c.number(*s, "price", "maturity", cfg.price.maturity,
                 [](double v) { return v > 0.0; }, "must be positive");
        c.number(*s, "price", "rate", cfg.price.rate,
                 [](double v) { return v >= 0.0; }, "must be nonnegative");
        c.number(*s, "price", "recovery", cfg.price.recovery,
                 [](double v) { return v >= 0.0 && v <= 1.0; },
                 "must lie in [0, 1]");
        c.number(*s, "price", "x", cfg.price.x,
                 [](double v) { return v >= 0.0; }, "must be nonnegative");
        long d = cfg.price.d;
        c.integer(*s, "price", "d", d, 0, "must be 0 or 1");
        if (d > 1) c.fail("price.d: must be 0 or 1");
        else cfg.price.d = static_cast<int>(d);
    }
    if (const json* s = c.section(root, "simulate")) {
        c.reject_unknown(*s, "simulate", {"x0"});
        c.number(*s, "simulate", "x0", cfg.simulate.x0,
                 [](double v) { return v >= 0.0; }, "must be nonnegative");
    }
    if (const json* s = c.section(root, "validate")) {
        c.reject_unknown(*s, "validate", {"x", "T"});
        c.number(*s, "validate", "x", cfg.validate.x,
                 [](double v) { return v >= 0.0; }, "must be nonnegative");
        c.number(*s, "validate", "T", cfg.validate.T,
                 [](double v) { return v > 0.0; }, "must be positive");
    }
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("JSON parse error: ") + e.what()});
    }
    Checker c;
    if (!root.is_object()) {
        c.fail("top level: must be a JSON object");
        throw ConfigError(std::move(c.issues));
    }
    c.reject_unknown(root, "top level",
                     {"model", "numerics", "mc", "spectrum", "survival",
                      "spreads", "price", "levy", "intensity", "simulate",
                      "validate"});

    RunConfig cfg;
    cfg.mc.business_times = {1.0, 2.0, 3.0, 4.0, 5.0};
    parse_model(c, root, cfg);
    parse_numerics(c, root, cfg);
    parse_mc(c, root, cfg);
    parse_commands(c, root, cfg);
    if (!c.issues.empty()) throw ConfigError(std::move(c.issues));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot open config file: " + path});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace subcir
