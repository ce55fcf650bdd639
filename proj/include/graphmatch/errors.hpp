#pragma once

#include <stdexcept>
#include <string>

namespace graphmatch {

// Bad user-supplied configuration: out-of-range parameter, malformed config,
// dimension mismatch. Message names the offending field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mathematical domain violation: evaluating a closed form outside its
// validity window (e.g. a tilt past the divergence point).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Problem size exceeds what an exhaustive/exact path is willing to enumerate.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

// Operation not defined for the given model variant.
struct UnsupportedModelError : ConfigError {
    using ConfigError::ConfigError;
};

} // namespace graphmatch
