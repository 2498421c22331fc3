#pragma once

#include <stdexcept>
#include <string>

namespace advest {

// Thrown when a dense solve produces a residual beyond the admissible
// tolerance, or a factorization is unusable (singular system).
class SolverFailure : public std::runtime_error {
public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an operation's mathematical precondition fails at runtime,
// e.g. a patch problem is requested for a solution that violates the
// hat-function orthogonality it relies on.
class PreconditionViolated : public std::runtime_error {
public:
  explicit PreconditionViolated(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

// Thrown on malformed config files or source specs; carries a position hint.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

} // namespace advest
