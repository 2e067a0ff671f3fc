#pragma once

#include <stop_token>
#include <vector>

#include "loopsynth/solver.hpp"
#include "loopsynth/sygus.hpp"
#include "loopsynth/unroll.hpp"

namespace loopsynth {

struct CountExample {
  std::vector<Value> inputs;
  std::int64_t count;
};

/// One (inputs, reps) pair per category member, in member order. Throws
/// Error for an empty category.
std::vector<CountExample> build_count_examples(const Category& category,
                                               const SygusProblem& problem);

/// The grammar's first Int nonterminal as start symbol, or the default
///   I ::= 0 | 1 | 2 | (str.len S) | (+ I I) | (- I I);  S ::= String params
/// when the grammar has none.
Grammar derive_int_grammar(const Grammar& grammar, const FunctionSignature& target);

/// Loop-count problem: same parameters, Int result, derived grammar, one
/// example per category member.
SygusProblem loop_count_problem(const Category& category, const SygusProblem& problem);

/// Phase-4 solve for the loop count h. Failure marks the category exhausted;
/// success marks it loop-synthesized.
SolveResult synthesize_loop_count(Category& category, const SygusProblem& problem,
                                  const SolveBudget& budget,
                                  const SolverChoice& choice,
                                  std::stop_token stop = {});

}  // namespace loopsynth
