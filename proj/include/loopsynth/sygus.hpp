#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loopsynth/eval.hpp"
#include "loopsynth/sexpr.hpp"
#include "loopsynth/term.hpp"

namespace loopsynth {

struct FunctionSignature {
  std::string name;
  std::vector<Param> params;
  Sort result;
};

struct Nonterminal {
  std::string name;
  Sort sort;
};

/// Inline synth-fun grammar. Production terms reference nonterminals as Var
/// nodes whose name is a declared nonterminal; every other Var is a target
/// parameter.
struct Grammar {
  std::vector<Nonterminal> nonterminals;
  std::string start;
  std::map<std::string, std::vector<Term>> productions;

  const Nonterminal* find(std::string_view name) const;
  bool is_nonterminal(std::string_view name) const { return find(name) != nullptr; }
  Sort start_sort() const;
  const std::vector<Term>& rules(const std::string& nt) const;

  /// Checks the start symbol and nonterminal references; throws Error.
  void validate(const FunctionSignature& target) const;
};

struct ConstraintExample {
  std::vector<Value> inputs;
  Value output;
};

struct SygusProblem {
  std::string logic;
  FunctionSignature target;
  Grammar grammar;
  std::vector<ConstraintExample> examples;  // file order
  std::vector<Param> declared_vars;
};

/// Parse the supported SyGuS v2 subset. Throws ParseError on malformed
/// input, Error("non-PBE constraint ...") for constraints that are not an
/// input-output equality, and Error("unsupported ...") for forms outside the
/// strings + linear integer arithmetic subset.
SygusProblem parse_problem(std::string_view text);

/// Parse a term over the given variables (no grammar, builtins and the
/// given signatures as callable functions).
Term parse_term(std::string_view text, const std::vector<Param>& vars,
                const std::vector<FunctionSignature>& functions = {});

/// Render a problem back to SyGuS v2 text (used for external solver input).
std::string print_problem(const SygusProblem& problem);

/// `(define-fun name ((x String)) String body)`
std::string print_define_fun(const FunctionSignature& sig, const Term& body,
                             bool recursive = false);

/// A plain (non-recursive) solution: a single define-fun.
std::string print_solution(const FunctionSignature& sig, const Term& body);

/// Body of the target's define-fun in solver output, with parameters renamed
/// positionally to the target signature. Returns nullopt when the output
/// reports infeasibility (`infeasible`, `unsat`, `unknown`, `fail`) without a
/// definition. Throws ParseError when neither is present.
std::optional<Term> parse_solver_output(std::string_view text,
                                        const FunctionSignature& target);

struct ParsedDefinition {
  FunctionSignature signature;
  Term body;
  bool recursive;
};

/// Every define-fun / define-fun-rec in `text`, in order. Calls may refer to
/// earlier definitions and, for define-fun-rec, to the definition itself.
std::vector<ParsedDefinition> parse_definitions(std::string_view text);

/// Load parsed definitions into evaluator Defs.
Defs to_defs(const std::vector<ParsedDefinition>& defs);

}  // namespace loopsynth
