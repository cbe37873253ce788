#pragma once

#include <stdexcept>
#include <string>

namespace csched {

// Process exit codes used by the CLI. Library code throws; the CLI maps.
enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitInvariant = 3,
  kExitBudget = 4,
};

// Malformed or schema-violating input files.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A domain invariant would be violated (dimension mismatch, infeasible
// schedule handed to a consumer that requires feasibility, ...).
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

// The exhaustive solvers refuse inputs beyond their size guards instead of
// silently taking hours.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csched
