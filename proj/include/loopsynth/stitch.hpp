#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopsynth/eval.hpp"
#include "loopsynth/sygus.hpp"
#include "loopsynth/unroll.hpp"

namespace loopsynth {

/// f(params) = skeleton[g(params, base, h)]
/// g(params, b, n) = (ite (<= n 0) b context[g(params, b, (- n 1))])
struct RecursiveSolution {
  FunctionSignature f;
  Term f_body;
  FunctionSignature g;
  Term g_body;
  Term h;
  CategoryKey category;

  /// Body nodes of f and g plus one node per defined function.
  std::size_t ast_size() const { return f_body.size() + g_body.size() + 2; }
  Defs defs() const;
};

/// Throws SortError when the base sort differs from the context's hole sort
/// or h is not Int-sorted.
RecursiveSolution build_recursive_solution(const Decomposition& shape, const Term& h,
                                           const SygusProblem& problem);

struct ExampleCheck {
  bool pass = false;
  std::optional<Value> produced;
  std::string error;  // set when evaluation failed (e.g. fuel exhausted)
};

struct VerifyReport {
  std::vector<ExampleCheck> examples;
  bool overall = true;
  std::uint64_t max_fuel = 0;
};

VerifyReport verify(const RecursiveSolution& sol, const SygusProblem& problem,
                    std::uint64_t fuel = kDefaultFuel);

/// Plain-term counterpart of verify().
VerifyReport verify(const Term& body, const SygusProblem& problem,
                    std::uint64_t fuel = kDefaultFuel);

/// f(member inputs) == skeleton[context^reps[base]](member inputs).
bool unroll_equivalence_check(const RecursiveSolution& sol, const Decomposition& shape,
                              const CategoryMember& member,
                              const SygusProblem& problem,
                              std::uint64_t fuel = kDefaultFuel);

/// `define-fun-rec` for g followed by `define-fun` for f.
std::string print_solution(const RecursiveSolution& sol);

}  // namespace loopsynth
