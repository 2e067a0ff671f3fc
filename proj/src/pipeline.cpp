#include "loopsynth/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <future>
#include <numeric>
#include <random>

#include "loopsynth/errors.hpp"
#include "loopsynth/loop_synth.hpp"
#include "loopsynth/unroll.hpp"

namespace loopsynth {

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
 public:
  explicit Deadline(double seconds)
      : start_(Clock::now()),
        end_(start_ + std::chrono::duration_cast<Clock::duration>(
                          std::chrono::duration<double>(seconds))) {}

  double remaining() const {
    return std::chrono::duration<double>(end_ - Clock::now()).count();
  }
  bool expired() const { return remaining() <= 0; }
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  /// `b` with its wall timeout clipped to the time left.
  SolveBudget clip(SolveBudget b) const {
    b.timeout_seconds = std::max(1e-3, std::min(b.timeout_seconds, remaining()));
    return b;
  }

 private:
  Clock::time_point start_;
  Clock::time_point end_;
};

// Defense in depth: re-parse the printed solution and evaluate that.
bool reverify_printed(const std::string& text, const SygusProblem& problem,
                      std::uint64_t fuel) {
  try {
    Defs defs = to_defs(parse_definitions(text));
    const FunDef* f = defs.find(problem.target.name);
    if (!f) return false;
    std::vector<Term> args;
    for (const Param& p : problem.target.params) args.push_back(Term::var(p.name, p.sort));
    const Term call = Term::call(problem.target.name, problem.target.result, args);
    for (const ConstraintExample& ex : problem.examples) {
      if (evaluate(call, bind_params(problem.target.params, ex.inputs), defs, fuel) !=
          ex.output) {
        return false;
      }
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

struct Run {
  const SygusProblem& problem;
  const PipelineConfig& config;
  Deadline deadline;
  SynthesisStats stats;
  std::stop_source stop;

  SynthesisResult finish(std::variant<RecursiveSolution, Term, SynthesisFailure> out) {
    stats.wall_seconds = deadline.elapsed();
    if (out.index() == 0) stats.ast_size = std::get<0>(out).ast_size();
    if (out.index() == 1) stats.ast_size = direct_ast_size(std::get<1>(out));
    return {std::move(out), stats};
  }

  SynthesisResult fail(FailureReason reason, std::string detail) {
    return finish(SynthesisFailure{reason, std::move(detail)});
  }

  std::optional<Term> accept_direct(const Term& t) {
    if (!verify(t, problem, config.fuel).overall) return std::nullopt;
    if (!reverify_printed(print_solution(problem.target, t), problem, config.fuel)) {
      return std::nullopt;
    }
    return t;
  }

  std::optional<Term> direct(double timeout) {
    SolveBudget b = config.subset_budget;
    b.timeout_seconds = timeout;
    SolveResult r = solve_pbe(problem, problem.examples, deadline.clip(b), config.solver,
                              stop.get_token());
    if (!r.ok()) return std::nullopt;
    return accept_direct(r.term());
  }

  SynthesisResult go() {
    if (config.prefer == Preference::Direct && !problem.examples.empty()) {
      if (auto t = direct(config.subset_budget.timeout_seconds)) return finish(*t);
    }

    const auto subsets = split(problem, config.order);
    stats.subsets_total = subsets.size();
    CategoryRegistry registry;
    std::vector<Term> retained;
    bool saw_timeout = false;

    // Phase 2 solves run ahead of the control loop, up to `workers` at once;
    // results are consumed strictly in subset order.
    std::vector<std::future<SolveResult>> inflight(subsets.size());
    std::size_t launched = 0;
    auto launch_upto = [&](std::size_t limit) {
      for (; launched < std::min(limit, subsets.size()); ++launched) {
        std::vector<ConstraintExample> exs;
        for (std::size_t e : subsets[launched]) exs.push_back(problem.examples[e]);
        inflight[launched] = std::async(
            std::launch::async,
            [this, exs = std::move(exs), budget = deadline.clip(config.subset_budget),
             token = stop.get_token()] {
              return solve_pbe(problem, exs, budget, config.solver, token);
            });
      }
    };
    struct StopOnExit {
      std::stop_source& s;
      ~StopOnExit() { s.request_stop(); }
    } stop_on_exit{stop};

    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if (deadline.expired()) return fail(FailureReason::Timeout, "global timeout");
      launch_upto(i + std::max<std::size_t>(config.workers, 1));
      SolveResult r = inflight[i].get();
      if (!r.ok()) {
        ++stats.subsets_failed;
        saw_timeout = saw_timeout || r.failure().kind == FailureKind::Timeout;
        continue;
      }
      ++stats.subsets_solved;
      const Term solution = normalize(r.term());
      retained.push_back(solution);

      // Phase 3
      auto d = decompose(solution, subsets[i].front());
      if (!d) continue;
      auto admission = registry.admit(*d);
      stats.categories = registry.size();
      if (!admission.grew) continue;

      // Phase 4
      Category& cat = registry.at(admission.category);
      ++stats.phase4_attempts;
      SolveResult h = synthesize_loop_count(cat, problem, deadline.clip(config.loop_budget),
                                            config.solver, stop.get_token());
      if (!h.ok()) {
        saw_timeout = saw_timeout || h.failure().kind == FailureKind::Timeout;
        continue;
      }

      // Phase 5
      ++stats.phase5_attempts;
      RecursiveSolution sol = build_recursive_solution(cat.shape, normalize(h.term()), problem);
      if (verify(sol, problem, config.fuel).overall &&
          reverify_printed(print_solution(sol), problem, config.fuel)) {
        return finish(std::move(sol));
      }
    }

    if (config.fallback) {
      // A per-example solution may already cover every constraint.
      std::optional<Term> best;
      for (const Term& t : retained) {
        if ((!best || t.size() < best->size()) && accept_direct(t)) best = t;
      }
      if (best) return finish(*best);
      if (!problem.examples.empty() && !deadline.expired()) {
        if (auto t = direct(deadline.remaining())) return finish(*t);
      }
    }

    if (deadline.expired()) return fail(FailureReason::Timeout, "global timeout");
    if (stats.subsets_solved == 0 && stats.subsets_total > 0) {
      return fail(saw_timeout ? FailureReason::Timeout : FailureReason::BaseSolverInfeasible,
                  "no subset could be solved by the base solver");
    }
    if (registry.empty()) {
      return fail(FailureReason::NoPatternFound,
                  "no per-example solution contains a repeated context");
    }
    return fail(FailureReason::AllCategoriesExhausted,
                std::to_string(registry.size()) +
                    " categories tried; none verified on every constraint");
  }
};

}  // namespace

SubsetOrder SubsetOrder::parse(std::string_view text) {
  if (text == "given") return {};
  if (text == "reversed") return {Policy::Reversed, 0};
  constexpr std::string_view kRandom = "random:";
  if (text.substr(0, kRandom.size()) == kRandom) {
    std::string_view digits = text.substr(kRandom.size());
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
      return {Policy::Random, seed};
    }
  }
  throw Error("invalid order '" + std::string(text) +
              "' (expected given, reversed or random:<seed>)");
}

std::string SubsetOrder::to_string() const {
  switch (policy) {
    case Policy::Given:
      return "given";
    case Policy::Reversed:
      return "reversed";
    case Policy::Random:
      return "random:" + std::to_string(seed);
  }
  return "?";
}

void PipelineConfig::validate() const {
  subset_budget.validate();
  loop_budget.validate();
  solver.validate();
  if (!(global_timeout_seconds > 0) || fuel == 0) {
    throw Error("timeouts and fuel must be positive");
  }
  if (global_timeout_seconds < subset_budget.timeout_seconds ||
      global_timeout_seconds < loop_budget.timeout_seconds) {
    throw Error("global timeout must be at least every per-solve timeout");
  }
}

std::string_view reason_name(FailureReason r) {
  switch (r) {
    case FailureReason::Timeout:
      return "timeout";
    case FailureReason::NoPatternFound:
      return "no-pattern-found";
    case FailureReason::AllCategoriesExhausted:
      return "all-categories-exhausted";
    case FailureReason::BaseSolverInfeasible:
      return "base-solver-infeasible";
  }
  return "?";
}

std::vector<std::vector<std::size_t>> split(const SygusProblem& problem,
                                            const SubsetOrder& order) {
  std::vector<std::size_t> idx(problem.examples.size());
  std::iota(idx.begin(), idx.end(), 0);
  switch (order.policy) {
    case SubsetOrder::Policy::Given:
      break;
    case SubsetOrder::Policy::Reversed:
      std::reverse(idx.begin(), idx.end());
      break;
    case SubsetOrder::Policy::Random: {
      // Fisher-Yates with explicit modulo draws so the permutation does not
      // depend on the standard library's distribution implementation.
      std::mt19937_64 rng(order.seed);
      for (std::size_t i = idx.size(); i > 1; --i) {
        std::swap(idx[i - 1], idx[rng() % i]);
      }
      break;
    }
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back({i});
  return out;
}

SynthesisResult run(const SygusProblem& problem, const PipelineConfig& config) {
  config.validate();
  Run r{problem, config, Deadline(config.global_timeout_seconds), {}, {}};
  return r.go();
}

SolveResult baseline_direct_solve(const SygusProblem& problem,
                                  const PipelineConfig& config) {
  config.solver.validate();
  SolveBudget b = config.subset_budget;
  b.timeout_seconds = config.global_timeout_seconds;
  return solve_pbe(problem, problem.examples, b, config.solver);
}

std::string print_result(const SynthesisResult& result, const SygusProblem& problem) {
  if (result.recursive()) return print_solution(result.recursive_solution());
  if (result.solved()) return print_solution(problem.target, result.direct_solution());
  return {};
}

}  // namespace loopsynth
