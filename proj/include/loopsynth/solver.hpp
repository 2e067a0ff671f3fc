#pragma once

#include <cstdint>
#include <optional>
#include <stop_token>
#include <string>
#include <variant>
#include <vector>

#include "loopsynth/sygus.hpp"
#include "loopsynth/term.hpp"

namespace loopsynth {

struct SolveBudget {
  double timeout_seconds = 10.0;
  std::size_t max_size = 256;
  std::uint64_t max_candidates = 50'000'000;

  /// Throws Error unless every limit is positive.
  void validate() const;
};

struct SolverChoice {
  enum class Kind { Builtin, External };

  Kind kind = Kind::Builtin;
  std::string path;
  std::vector<std::string> extra_args;

  static SolverChoice builtin() { return {}; }
  static SolverChoice external(std::string path,
                               std::vector<std::string> extra_args = {}) {
    return {Kind::External, std::move(path), std::move(extra_args)};
  }

  /// External: the executable must exist. Throws Error otherwise.
  void validate() const;
  std::string describe() const;
};

enum class FailureKind { Timeout, Infeasible, ExternalSolverError, Cancelled };

std::string_view failure_name(FailureKind kind);

struct SolveFailure {
  FailureKind kind;
  std::string message;
};

struct SolveStats {
  std::uint64_t candidates = 0;
  std::size_t max_size_reached = 0;
  double seconds = 0.0;
};

/// Either a verified Term or a failure, with search statistics.
class SolveResult {
 public:
  SolveResult(Term t, SolveStats stats = {})
      : outcome_(std::move(t)), stats_(stats) {}
  SolveResult(SolveFailure f, SolveStats stats = {})
      : outcome_(std::move(f)), stats_(stats) {}

  bool ok() const { return outcome_.index() == 0; }
  explicit operator bool() const { return ok(); }
  const Term& term() const { return std::get<Term>(outcome_); }
  const SolveFailure& failure() const { return std::get<SolveFailure>(outcome_); }
  const SolveStats& stats() const { return stats_; }
  SolveStats& stats() { return stats_; }

 private:
  std::variant<Term, SolveFailure> outcome_;
  SolveStats stats_;
};

/// Bottom-up enumeration by increasing term size with observational
/// equivalence pruning on the example inputs. The first start-symbol term
/// whose outputs match every example is returned; no smaller grammar term
/// satisfies them.
SolveResult builtin_enumerate(const Grammar& grammar,
                              const FunctionSignature& target,
                              const std::vector<ConstraintExample>& examples,
                              const SolveBudget& budget,
                              std::stop_token stop = {});

/// Writes the subset problem to a temporary file, runs
/// `<path> [extra args] <file.sl>` under the budget's wall timeout and parses
/// its stdout.
SolveResult external_solve(const SolverChoice& choice, const SygusProblem& problem,
                           const SolveBudget& budget);

/// Black-box PBE solve with either backend. Whatever the backend returns is
/// re-checked with the builtin evaluator before it is reported as a success.
SolveResult solve_pbe(const SygusProblem& problem,
                      const std::vector<ConstraintExample>& examples,
                      const SolveBudget& budget, const SolverChoice& choice,
                      std::stop_token stop = {});

/// True iff `t` reproduces every example output.
bool satisfies(const Term& t, const FunctionSignature& target,
               const std::vector<ConstraintExample>& examples);

/// Cap on concurrently running external solver processes (default 4).
void set_external_process_cap(std::size_t cap);

}  // namespace loopsynth
