#ifndef SUBCIR_ERRORS_HPP
#define SUBCIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subcir {

/// Adaptive refinement or series truncation failed to converge within budget.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested evaluation time is below the resolution floor of the expansion.
class BelowResolutionError : public std::domain_error {
public:
    explicit BelowResolutionError(const std::string& what) : std::domain_error(what) {}
};

} // namespace subcir

#endif
