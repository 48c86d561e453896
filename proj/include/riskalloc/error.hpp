#pragma once

#include <stdexcept>
#include <string>

namespace riskalloc {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  Parse,        // malformed input text
  Schema,       // structurally wrong input (columns, duplicates)
  Data,         // values violate a data invariant
  Parameter,    // invalid generator/estimator parameters
  Input,        // precondition on a numeric routine violated
  Model,        // covariance not usable (non-PD, degenerate)
  Convergence,  // iterative solver did not converge
  Config,       // configuration file or option problem
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace riskalloc
