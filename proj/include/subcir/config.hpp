// JSON run configuration for the batch CLI: schema validation with
// all violations reported at once, defaults, and model construction.

#ifndef SUBCIR_CONFIG_HPP
#define SUBCIR_CONFIG_HPP

#include "subcir/mc.hpp"
#include "subcir/model.hpp"
#include "subcir/subordinator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subcir {

/// Thrown by load_config; collects every schema violation found.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct SpectrumConfig {
    int count = 10;
};

struct GridConfig { // horizon or state grids for survival/spreads/intensity
    double x = 0.1;
    std::vector<double> horizons = {0.25, 0.5, 1, 2, 3, 4, 5};
};

struct IntensityConfig {
    double x_min = 0.0;
    double x_max = 0.4;
    int x_count = 81;
};

struct LevyConfig {
    std::vector<double> x_values = {0.01, 0.1, 0.2};
    double y_min = -0.2;
    double y_max = 0.2;
    int y_count = 81;
};

struct PriceConfig {
    double maturity = 5.0;
    double rate = 0.0;
    double recovery = 0.4;
    double x = 0.1;
    int d = 0;
};

struct SimulateConfig {
    double x0 = 0.1;
};

struct ValidateConfig {
    double x = 0.1;
    double T = 1.0;
};

struct RunConfig {
    // model block
    double kappa = 1.0;
    double theta = 0.1;
    double sigma = 0.25;
    double gamma = 0.0;
    std::optional<TemperedStable> family;

    Truncation truncation;
    QuadPolicy quadrature;
    PathConfig mc;

    SpectrumConfig spectrum;
    GridConfig survival;
    GridConfig spreads;
    IntensityConfig intensity;
    LevyConfig levy;
    PriceConfig price;
    SimulateConfig simulate;
    ValidateConfig validate;

    SubordinatorSpec make_subordinator() const {
        return SubordinatorSpec(gamma, family);
    }
    SubCirModel make_model() const {
        return SubCirModel(CirParams(kappa, theta, sigma), make_subordinator(),
                           truncation, quadrature);
    }
};

/// Parse and validate a JSON config file. Unknown keys are rejected;
/// every violation is collected and reported in one ConfigError.
RunConfig load_config(const std::string& path);

/// Same, from JSON text (used by tests).
RunConfig parse_config(const std::string& text);

} // namespace subcir

#endif
