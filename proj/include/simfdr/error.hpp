#pragma once

#include <stdexcept>
#include <string>

namespace simfdr {

// An estimator could not produce a usable value from the data it was given
// (degenerate sample, empty trimmed set, vanishing denominator, no root).
struct EstimationError : std::runtime_error {
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-facing configuration (CLI flags, simulation config fields).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (CSV syntax, bad header, out-of-range fields).
// Messages carry 1-based line numbers where applicable.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace simfdr
