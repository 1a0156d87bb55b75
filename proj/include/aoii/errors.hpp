#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aoii {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

enum class ViolationCode {
    NonSquare,
    NegativeOffDiagonal,
    RowSumNonZero,
    AbsorbingSourceState,
    InvalidParameter, // policy/channel/run-parameter violations
};

const char *to_string(ViolationCode code);

struct Violation {
    ViolationCode code;
    int row = -1; // offending row, -1 when not row specific
    int col = -1;
    std::string detail;
};

// Structured rejection: carries every violated invariant, not just the first.
class ValidationError : public Error {
  public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation> &violations() const { return violations_; }
    bool has(ViolationCode code) const;

  private:
    std::vector<Violation> violations_;
};

// The transient block A (or I - D) could not be factorized reliably.
class SingularTransientBlock : public Error {
  public:
    explicit SingularTransientBlock(const std::string &msg) : Error(msg) {}
};

// The synchronization-point chain has no unique stationary vector, which
// signals a degenerate sampling policy (e.g. all-zero pull rates).
class ReducibleChain : public Error {
  public:
    explicit ReducibleChain(const std::string &msg) : Error(msg) {}
};

// Every grid point of a sweep violates the sampling-rate budget.
class NoFeasiblePolicy : public Error {
  public:
    explicit NoFeasiblePolicy(const std::string &msg) : Error(msg) {}
};

// CLI: config file problems (missing keys, bad shapes, unreadable files).
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string &msg) : Error(msg) {}
};

// CLI: unrecognized preset id passed to the reproduce subcommand.
class UnknownFigure : public Error {
  public:
    explicit UnknownFigure(const std::string &msg) : Error(msg) {}
};

} // namespace aoii
