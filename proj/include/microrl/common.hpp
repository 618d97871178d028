#pragma once

#include <stdexcept>
#include <string>

namespace microrl {

// Input probabilities (transition rows, initial distributions, policy rules)
// must sum to 1 within this tolerance.
inline constexpr double kProbabilityTolerance = 1e-12;

// Tolerance for comparing computed values (order relations, cross-checks).
// Exact DP on the supported state-space sizes stays well inside this.
inline constexpr double kValueTolerance = 1e-9;

// Malformed document: structural/syntactic problems, unknown fields,
// unresolved identifiers.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A structurally well-formed task whose content breaks an invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or evaluation would exceed its configured size cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace microrl
