#pragma once

#include <stdexcept>
#include <string>

namespace fas {

// Thrown when a truncated series or adaptive quadrature cannot meet its
// tolerance within the allotted budget. Never silently truncated.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid experiment configuration (bad field values, unknown names).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A diversity-slope fit that cannot be trusted: zero outage values,
// quadrature error comparable to the values, or a poor linear fit.
class DegenerateFitError : public std::runtime_error {
 public:
  explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fas
