#include "loopsynth/loop_synth.hpp"

#include <algorithm>

#include "loopsynth/errors.hpp"

namespace loopsynth {

namespace {

std::string fresh_name(const std::string& want, const FunctionSignature& target,
                       const Grammar& taken) {
  auto used = [&](const std::string& n) {
    return taken.is_nonterminal(n) ||
           std::any_of(target.params.begin(), target.params.end(),
                       [&](const Param& p) { return p.name == n; });
  };
  std::string name = want;
  for (int i = 1; used(name); ++i) name = want + "_" + std::to_string(i);
  return name;
}

}  // namespace

std::vector<CountExample> build_count_examples(const Category& category,
                                               const SygusProblem& problem) {
  if (category.members.empty()) throw Error("category has no members");
  std::vector<CountExample> out;
  out.reserve(category.members.size());
  for (const CategoryMember& m : category.members) {
    out.push_back({problem.examples.at(m.example).inputs,
                   static_cast<std::int64_t>(m.reps)});
  }
  return out;
}

Grammar derive_int_grammar(const Grammar& grammar, const FunctionSignature& target) {
  for (const Nonterminal& nt : grammar.nonterminals) {
    if (nt.sort == Sort::Int) {
      Grammar g = grammar;
      g.start = nt.name;
      return g;
    }
  }
  Grammar g;
  const std::string i = fresh_name("I", target, g);
  g.nonterminals.push_back({i, Sort::Int});
  const std::string s = fresh_name("S", target, g);
  std::vector<Term> strings;
  for (const Param& p : target.params) {
    if (p.sort == Sort::String) strings.push_back(Term::var(p.name, p.sort));
  }
  const Term iv = Term::var(i, Sort::Int);
  std::vector<Term> ints{Term::integer(0), Term::integer(1), Term::integer(2)};
  if (!strings.empty()) {
    g.nonterminals.push_back({s, Sort::String});
    g.productions[s] = strings;
    ints.push_back(Term::app(Op::Len, {Term::var(s, Sort::String)}));
  }
  ints.push_back(Term::app(Op::Add, {iv, iv}));
  ints.push_back(Term::app(Op::Sub, {iv, iv}));
  g.productions[i] = std::move(ints);
  g.start = i;
  return g;
}

SygusProblem loop_count_problem(const Category& category, const SygusProblem& problem) {
  SygusProblem p;
  p.logic = problem.logic;
  p.target = FunctionSignature{problem.target.name, problem.target.params, Sort::Int};
  p.grammar = derive_int_grammar(problem.grammar, problem.target);
  p.declared_vars = problem.declared_vars;
  for (const CountExample& c : build_count_examples(category, problem)) {
    p.examples.push_back({c.inputs, Value::integer(c.count)});
  }
  return p;
}

SolveResult synthesize_loop_count(Category& category, const SygusProblem& problem,
                                  const SolveBudget& budget,
                                  const SolverChoice& choice, std::stop_token stop) {
  SygusProblem sub = loop_count_problem(category, problem);
  SolveResult r = solve_pbe(sub, sub.examples, budget, choice, std::move(stop));
  category.state = r.ok() ? CategoryState::LoopSynthesized : CategoryState::Exhausted;
  return r;
}

}  // namespace loopsynth
