#pragma once

#include <stdexcept>
#include <string>

namespace tardy {

/// Bad user input: malformed files, out-of-range values, violated
/// preconditions on data supplied from outside. CLI exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// A schedule failed validation against its instance.
class validation_error : public input_error {
 public:
  explicit validation_error(const std::string& what) : input_error(what) {}
};

/// A configured resource budget (table cells, enumeration size, parameter
/// limit) would be exceeded. CLI exit code 3.
class size_error : public std::runtime_error {
 public:
  explicit size_error(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant failed: solver disagreement, extraction shortfall,
/// pivot budget blown. Always a bug. CLI exit code 4.
class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

/// API misuse, e.g. asking to extract a schedule from a non-optimal solve.
class state_error : public internal_error {
 public:
  explicit state_error(const std::string& what) : internal_error(what) {}
};

}  // namespace tardy
