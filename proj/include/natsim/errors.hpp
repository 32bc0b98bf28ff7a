#pragma once

#include <stdexcept>
#include <string>

namespace natsim {

// Invalid run configuration (bad chain geometry, mismatched options). CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A size/memory guard was exceeded. CLI exit code 3.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (degenerate parameters, non-convergence). CLI exit code 4.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// First-order thermodynamic parameters are undefined (e.g. zero energy with
// nonzero charges).
struct DegenerateParameterError : NumericalError {
    explicit DegenerateParameterError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace natsim
