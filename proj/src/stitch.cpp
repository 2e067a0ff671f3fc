#include "loopsynth/stitch.hpp"

#include <algorithm>

#include "loopsynth/errors.hpp"

namespace loopsynth {

namespace {

bool is_param(const FunctionSignature& sig, const std::string& name) {
  return std::any_of(sig.params.begin(), sig.params.end(),
                     [&](const Param& p) { return p.name == name; });
}

std::string fresh(std::string want, const FunctionSignature& sig) {
  std::string name = want;
  for (int i = 1; is_param(sig, name) || name == sig.name; ++i) {
    name = want + std::to_string(i);
  }
  return name;
}

std::vector<Term> param_vars(const FunctionSignature& sig) {
  std::vector<Term> out;
  for (const Param& p : sig.params) out.push_back(Term::var(p.name, p.sort));
  return out;
}

VerifyReport check_examples(const Term& call_f, const Defs& defs,
                            const SygusProblem& problem, std::uint64_t fuel) {
  VerifyReport report;
  for (const ConstraintExample& ex : problem.examples) {
    ExampleCheck check;
    Evaluator ev(defs, fuel);
    try {
      check.produced = ev.eval(call_f, bind_params(problem.target.params, ex.inputs));
      check.pass = *check.produced == ex.output;
    } catch (const EvalError& e) {
      check.error = e.what();
    }
    report.max_fuel = std::max(report.max_fuel, ev.consumed());
    report.overall = report.overall && check.pass;
    report.examples.push_back(std::move(check));
  }
  return report;
}

}  // namespace

Defs RecursiveSolution::defs() const {
  Defs d;
  d.add(g.name, FunDef{g.params, g.result, g_body, true});
  d.add(f.name, FunDef{f.params, f.result, f_body, false});
  return d;
}

RecursiveSolution build_recursive_solution(const Decomposition& shape, const Term& h,
                                           const SygusProblem& problem) {
  const FunctionSignature& target = problem.target;
  const Sort acc_sort = shape.base.sort();
  if (shape.context.hole_count() != 1 || shape.skeleton.hole_count() != 1) {
    throw HoleCountError("skeleton and context need exactly one hole each");
  }
  if (acc_sort != shape.context.sort() ||
      acc_sort != subterm_at(shape.context, hole_path(shape.context)).sort()) {
    throw SortError("base sort does not match the context hole sort");
  }
  if (h.sort() != Sort::Int || h.hole_count() != 0) {
    throw SortError("loop count must be a hole-free Int term");
  }

  RecursiveSolution sol{target, h, {}, h, h, {}};
  sol.category = category_key(shape);
  sol.g.name = fresh("g", target);
  sol.g.params = target.params;
  const std::string acc = fresh("b", target);
  const std::string count = fresh("n", target);
  sol.g.params.push_back({acc, acc_sort});
  sol.g.params.push_back({count, Sort::Int});
  sol.g.result = acc_sort;

  const Term n = Term::var(count, Sort::Int);
  std::vector<Term> rec_args = param_vars(target);
  rec_args.push_back(Term::var(acc, acc_sort));
  rec_args.push_back(Term::app(Op::Sub, {n, Term::integer(1)}));
  const Term rec_call = Term::call(sol.g.name, acc_sort, std::move(rec_args));
  sol.g_body = Term::app(Op::Ite, {Term::app(Op::Le, {n, Term::integer(0)}),
                                   Term::var(acc, acc_sort),
                                   apply_context(shape.context, rec_call)});

  std::vector<Term> entry_args = param_vars(target);
  entry_args.push_back(shape.base);
  entry_args.push_back(h);
  sol.f_body = apply_context(shape.skeleton,
                             Term::call(sol.g.name, acc_sort, std::move(entry_args)));
  sol.h = h;
  return sol;
}

VerifyReport verify(const RecursiveSolution& sol, const SygusProblem& problem,
                    std::uint64_t fuel) {
  return check_examples(
      Term::call(sol.f.name, sol.f.result, param_vars(problem.target)), sol.defs(),
      problem, fuel);
}

VerifyReport verify(const Term& body, const SygusProblem& problem, std::uint64_t fuel) {
  Defs defs;
  defs.add(problem.target.name,
           FunDef{problem.target.params, problem.target.result, body, false});
  return check_examples(
      Term::call(problem.target.name, problem.target.result, param_vars(problem.target)),
      defs, problem, fuel);
}

bool unroll_equivalence_check(const RecursiveSolution& sol, const Decomposition& shape,
                              const CategoryMember& member,
                              const SygusProblem& problem, std::uint64_t fuel) {
  const Env env = bind_params(problem.target.params, problem.examples.at(member.example).inputs);
  try {
    Value stitched = evaluate(
        Term::call(sol.f.name, sol.f.result, param_vars(problem.target)), env,
        sol.defs(), fuel);
    Value unrolled = evaluate(recompose(shape, member.reps), env);
    return stitched == unrolled;
  } catch (const EvalError&) {
    return false;
  }
}

std::string print_solution(const RecursiveSolution& sol) {
  return print_define_fun(sol.g, sol.g_body, true) + "\n" +
         print_define_fun(sol.f, sol.f_body) + "\n";
}

}  // namespace loopsynth
