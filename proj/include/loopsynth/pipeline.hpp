#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "loopsynth/solver.hpp"
#include "loopsynth/stitch.hpp"
#include "loopsynth/sygus.hpp"

namespace loopsynth {

struct SubsetOrder {
  enum class Policy { Given, Reversed, Random };

  Policy policy = Policy::Given;
  std::uint64_t seed = 0;

  /// "given", "reversed" or "random:<seed>"; throws Error otherwise.
  static SubsetOrder parse(std::string_view text);
  std::string to_string() const;
};

enum class Preference { Recursive, Direct };

struct PipelineConfig {
  SolverChoice solver;
  SolveBudget subset_budget;
  SolveBudget loop_budget;
  double global_timeout_seconds = 60.0;
  std::uint64_t fuel = kDefaultFuel;
  SubsetOrder order;
  bool fallback = true;
  Preference prefer = Preference::Recursive;
  /// Phase-2 solves allowed in flight at once.
  std::size_t workers = 1;

  void validate() const;
};

enum class FailureReason {
  Timeout,
  NoPatternFound,
  AllCategoriesExhausted,
  BaseSolverInfeasible,
};

std::string_view reason_name(FailureReason r);

struct SynthesisFailure {
  FailureReason reason;
  std::string detail;
};

struct SynthesisStats {
  std::size_t subsets_total = 0;
  std::size_t subsets_solved = 0;
  std::size_t subsets_failed = 0;
  std::size_t categories = 0;
  std::size_t phase4_attempts = 0;
  std::size_t phase5_attempts = 0;
  double wall_seconds = 0.0;
  std::size_t ast_size = 0;
};

struct SynthesisResult {
  std::variant<RecursiveSolution, Term, SynthesisFailure> outcome;
  SynthesisStats stats;

  bool solved() const { return outcome.index() != 2; }
  bool recursive() const { return outcome.index() == 0; }
  const RecursiveSolution& recursive_solution() const {
    return std::get<RecursiveSolution>(outcome);
  }
  const Term& direct_solution() const { return std::get<Term>(outcome); }
  const SynthesisFailure& failure() const { return std::get<SynthesisFailure>(outcome); }
};

/// Singleton subsets (lists of example indices) in policy order.
std::vector<std::vector<std::size_t>> split(const SygusProblem& problem,
                                            const SubsetOrder& order);

/// Phases 1-5 with direct-solve fallback. Any returned solution has been
/// re-verified from its printed SMT-LIB form.
SynthesisResult run(const SygusProblem& problem, const PipelineConfig& config);

/// One solve over all constraints with the original grammar, bounded by the
/// global timeout.
SolveResult baseline_direct_solve(const SygusProblem& problem,
                                  const PipelineConfig& config);

/// SMT-LIB text of a solved result (empty for failures).
std::string print_result(const SynthesisResult& result, const SygusProblem& problem);

/// Size convention for plain solutions: body nodes plus the definition.
inline std::size_t direct_ast_size(const Term& body) { return body.size() + 1; }

}  // namespace loopsynth
