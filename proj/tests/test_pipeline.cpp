#include <doctest.h>

#include <set>

#include "loopsynth/errors.hpp"
#include "loopsynth/pipeline.hpp"
#include "loopsynth/report.hpp"
#include "support.hpp"

using namespace loopsynth;

namespace {

PipelineConfig fast_config() {
  PipelineConfig c;
  c.subset_budget.timeout_seconds = 5;
  c.loop_budget.timeout_seconds = 5;
  c.global_timeout_seconds = 20;
  return c;
}

std::string repeat(const std::string& s, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += s;
  return out;
}

SygusProblem repeat_problem(const std::vector<std::pair<std::string, int>>& rows) {
  std::string text = R"((set-logic SLIA)
(synth-fun f ((x String)) String ((Start String)) ((Start String (x "," (str.++ Start Start)))))
(declare-var x String)
)";
  for (const auto& [in, n] : rows) {
    text += "(constraint (= (f \"" + in + "\") \"" + repeat(in, n) + "\"))\n";
  }
  return parse_problem(text + "(check-synth)\n");
}

}  // namespace

TEST_CASE("order policies parse and print") {
  CHECK(SubsetOrder::parse("given").policy == SubsetOrder::Policy::Given);
  CHECK(SubsetOrder::parse("reversed").policy == SubsetOrder::Policy::Reversed);
  const SubsetOrder r = SubsetOrder::parse("random:42");
  CHECK(r.policy == SubsetOrder::Policy::Random);
  CHECK(r.seed == 42);
  CHECK(r.to_string() == "random:42");
  CHECK_THROWS_AS(SubsetOrder::parse("random:"), Error);
  CHECK_THROWS_AS(SubsetOrder::parse("random:x1"), Error);
  CHECK_THROWS_AS(SubsetOrder::parse("sideways"), Error);
}

TEST_CASE("split yields singleton subsets in the requested order") {
  SygusProblem p = repeat_problem({{"a", 2}, {"b", 3}, {"c", 4}, {"d", 5}, {"e", 6}});
  const auto given = split(p, SubsetOrder::parse("given"));
  REQUIRE(given.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(given[i] == std::vector<std::size_t>{i});
  const auto reversed = split(p, SubsetOrder::parse("reversed"));
  CHECK(reversed.front() == std::vector<std::size_t>{4});

  const auto r1 = split(p, SubsetOrder::parse("random:1"));
  CHECK(r1 == split(p, SubsetOrder::parse("random:1")));
  std::set<std::size_t> seen;
  for (const auto& s : r1) {
    REQUIRE(s.size() == 1);
    seen.insert(s[0]);
  }
  CHECK(seen.size() == 5);

  p.examples.clear();
  CHECK(split(p, {}).empty());
}

TEST_CASE("the three-example task solves recursively") {
  const SygusProblem p = parse_problem(testing::kRepeatTask);
  const SynthesisResult r = run(p, fast_config());
  REQUIRE(r.recursive());
  const RecursiveSolution& sol = r.recursive_solution();
  CHECK(verify(sol, p).overall);
  CHECK(sol.ast_size() <= 25);
  CHECK(r.stats.ast_size == sol.ast_size());
  CHECK(r.stats.subsets_total == 3);
  CHECK(r.stats.phase5_attempts >= 1);
  for (const auto& [word, n] : {std::pair{"synth", 4}, {"prog", 3}, {"program", 6}}) {
    CHECK(evaluate(sol.h, {{"x", Value::string(word)}}) == Value::integer(n));
  }

  // The printed program is self-contained SMT-LIB.
  const std::string text = print_result(r, p);
  const Defs defs = to_defs(parse_definitions(text));
  CHECK(defs.contains("f"));
}

TEST_CASE("a single repetition falls back to a direct solution") {
  const SygusProblem p = repeat_problem({{"ab", 2}});
  const SynthesisResult r = run(p, fast_config());
  REQUIRE(r.solved());
  CHECK_FALSE(r.recursive());
  CHECK(verify(r.direct_solution(), p).overall);
  CHECK(r.stats.ast_size == direct_ast_size(r.direct_solution()));

  PipelineConfig strict = fast_config();
  strict.fallback = false;
  const SynthesisResult s = run(p, strict);
  REQUIRE_FALSE(s.solved());
  CHECK(s.failure().reason == FailureReason::NoPatternFound);
}

TEST_CASE("counts no loop-count term can express exhaust every category") {
  // Equal-length inputs with different counts: every default loop-count term
  // gives the same value on all three.
  const SygusProblem p = repeat_problem({{"ab", 3}, {"cd", 6}, {"ef", 4}});
  PipelineConfig c = fast_config();
  c.fallback = false;
  c.loop_budget.timeout_seconds = 0.5;
  const SynthesisResult r = run(p, c);
  REQUIRE_FALSE(r.solved());
  CHECK(r.failure().reason == FailureReason::AllCategoriesExhausted);
  CHECK(r.stats.categories == 1);
  CHECK(r.stats.phase4_attempts >= 1);
}

TEST_CASE("unsolvable subsets are reported as base-solver failures") {
  const SygusProblem p = parse_problem(R"((set-logic SLIA)
(synth-fun f ((x String)) String ((Start String)) ((Start String (x "a"))))
(declare-var x String)
(constraint (= (f "q") "zz"))
(check-synth))");
  const SynthesisResult r = run(p, fast_config());
  REQUIRE_FALSE(r.solved());
  CHECK(r.failure().reason == FailureReason::BaseSolverInfeasible);
  CHECK(r.stats.subsets_failed == 1);
}

TEST_CASE("the global timeout bounds the run") {
  const SygusProblem p = repeat_problem({{"abc", 7}});
  SygusProblem hard = p;
  hard.examples[0].output = Value::string("c,b,a,c,b,a,c,b,a,c,b,a,c,b,a,c,b,a,");
  PipelineConfig c = fast_config();
  c.subset_budget.timeout_seconds = 0.5;
  c.loop_budget.timeout_seconds = 0.5;
  c.global_timeout_seconds = 1;
  const SynthesisResult r = run(hard, c);
  REQUIRE_FALSE(r.solved());
  CHECK(r.failure().reason == FailureReason::Timeout);
  CHECK(r.stats.wall_seconds < 5);
}

TEST_CASE("prefer direct returns a direct solution when one exists") {
  const SygusProblem p = repeat_problem({{"ab", 3}, {"cd", 3}});
  PipelineConfig c = fast_config();
  c.prefer = Preference::Direct;
  const SynthesisResult r = run(p, c);
  REQUIRE(r.solved());
  CHECK_FALSE(r.recursive());
}

TEST_CASE("parallel workers give the same answer") {
  const SygusProblem p = testing::load_benchmark("2.sl");
  PipelineConfig c = fast_config();
  const SynthesisResult serial = run(p, c);
  c.workers = 3;
  const SynthesisResult parallel = run(p, c);
  REQUIRE(serial.recursive());
  REQUIRE(parallel.recursive());
  CHECK(print_result(serial, p) == print_result(parallel, p));
}

TEST_CASE("configuration is validated") {
  PipelineConfig c = fast_config();
  c.global_timeout_seconds = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = fast_config();
  c.fuel = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("json report fields") {
  const SygusProblem p = testing::load_benchmark("3.sl");
  const SynthesisResult r = run(p, fast_config());
  const nlohmann::json j = result_to_json(r, p);
  CHECK(j["status"] == "recursive");
  CHECK(j["loop_count"] == "(str.len x)");
  CHECK(j["stats"]["ast_size"] == r.stats.ast_size);
  CHECK(j.contains("category"));

  PipelineConfig c = fast_config();
  c.fallback = false;
  const SynthesisResult f = run(repeat_problem({{"ab", 2}}), c);
  const nlohmann::json jf = result_to_json(f, p);
  CHECK(jf["status"] == "failure");
  CHECK(jf["reason"] == "no-pattern-found");
}
