#pragma once

#include <stdexcept>
#include <string>

namespace bj {

/// Base class for all errors raised by this library.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or out-of-contract input (dimension mismatch, zero vector where
/// a nonzero one is required, bad parameter range).
class input_error : public error {
public:
  explicit input_error(const std::string& what) : error(what) {}
};

/// A named precondition of an operation does not hold for the given data.
class precondition_error : public error {
public:
  precondition_error(const std::string& which, const std::string& detail)
      : error("precondition '" + which + "' failed: " + detail), which_(which) {}
  const std::string& which() const { return which_; }

private:
  std::string which_;
};

/// A space family outside what the operation supports.
class unsupported_space_error : public error {
public:
  explicit unsupported_space_error(const std::string& what) : error(what) {}
};

/// Numeric machinery failed (bracket exhaustion, search budget spent on a
/// problem that should be solvable).
class numeric_failure : public error {
public:
  explicit numeric_failure(const std::string& what) : error(what) {}
};

/// Two routes that must agree produced different answers.
class inconsistency_error : public error {
public:
  explicit inconsistency_error(const std::string& what) : error(what) {}
};

}  // namespace bj
