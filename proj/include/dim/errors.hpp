#pragma once

#include <stdexcept>
#include <string>

namespace dim {

struct InvalidManeuverError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidGeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OversaturationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a simulation-state invariant breaks; message carries a
// diagnostic dump of the offending step.
struct EngineInvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dim
