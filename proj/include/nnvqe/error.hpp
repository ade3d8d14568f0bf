#pragma once

#include <stdexcept>
#include <string>

namespace nnvqe {

/// Invalid configuration value (bad qubit count, depth, encoder spec, ...).
struct config_error : std::invalid_argument {
  explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Mismatched dimensions or out-of-range indices between otherwise valid objects.
struct structural_error : std::invalid_argument {
  explicit structural_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// API misuse: a call that needs state the caller did not provide
/// (missing forward cache, empty point set, zero epochs).
struct usage_error : std::logic_error {
  explicit usage_error(const std::string& msg) : std::logic_error(msg) {}
};

/// Numerical consistency failure (non-finite cost, imaginary residue too large).
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Problem size beyond what this build will attempt (dense solver dimension).
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nnvqe
