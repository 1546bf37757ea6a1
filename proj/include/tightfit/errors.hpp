#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace tightfit {

/// Broad failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
  precondition,        // caller broke a documented precondition
  dimension_mismatch,
  not_positive_definite,
  degenerate,          // numerical degeneracy (rank loss, root tie, flips)
  infeasible,          // a trace condition rules the object out
  origin_not_interior,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Named scalar diagnostics attached by the thrower (e.g. tr A, R).
  const std::map<std::string, double>& diagnostics() const noexcept { return diagnostics_; }
  Error& with(const std::string& key, double value) {
    diagnostics_[key] = value;
    return *this;
  }

 private:
  ErrorKind kind_;
  std::map<std::string, double> diagnostics_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace tightfit
