#include <doctest.h>

#include "loopsynth/errors.hpp"
#include "loopsynth/sexpr.hpp"
#include "loopsynth/sygus.hpp"
#include "support.hpp"

using namespace loopsynth;

namespace {

std::string with_constraints(const std::string& constraints) {
  return R"((set-logic SLIA)
(synth-fun f ((x String)) String
  ((Start String) (I Int))
  ((Start String (x "" (str.++ Start Start) (str.at Start I)))
   (I Int (0 1 (str.len Start)))))
(declare-var x String)
)" + constraints + "\n(check-synth)\n";
}

}  // namespace

TEST_CASE("reader handles comments, escapes and quoted symbols") {
  const auto xs = read_sexprs("; leading\n(a \"q\"\"r\" |odd sym| 12 :kw) ; tail\n");
  REQUIRE(xs.size() == 1);
  const SExpr& e = xs[0];
  REQUIRE(e.items.size() == 5);
  CHECK(e.items[1].kind == SExpr::Kind::String);
  CHECK(e.items[1].text == "q\"r");
  CHECK(e.items[2].is_symbol("odd sym"));
  CHECK(e.items[3].kind == SExpr::Kind::Numeral);
  CHECK(e.items[4].kind == SExpr::Kind::Keyword);
  CHECK(e.line == 2);
}

TEST_CASE("reader reports positions of malformed input") {
  try {
    read_sexprs("(a\n  (b c)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
  }
  CHECK_THROWS_AS(read_sexprs("(a))"), ParseError);
  CHECK_THROWS_AS(read_sexprs("\"open"), ParseError);
  CHECK_THROWS_AS(read_sexprs("(f 007)"), ParseError);
}

TEST_CASE("parses the three-example task") {
  const SygusProblem p = parse_problem(testing::kRepeatTask);
  CHECK(p.logic == "SLIA");
  CHECK(p.target.name == "f");
  REQUIRE(p.target.params.size() == 1);
  CHECK(p.target.result == Sort::String);
  CHECK(p.grammar.start == "Start");
  CHECK(p.grammar.nonterminals.size() == 3);
  CHECK(p.grammar.rules("Start").size() == 5);
  REQUIRE(p.examples.size() == 3);
  CHECK(p.examples[0].inputs[0] == Value::string("synth"));
  CHECK(p.examples[0].output == Value::string("synthsynthsynthsynthsynth"));
  CHECK(p.examples[2].inputs[0] == Value::string("program"));
}

TEST_CASE("constraints may put the call on either side") {
  const SygusProblem p = parse_problem(with_constraints("(constraint (= \"bb\" (f \"b\")))"));
  REQUIRE(p.examples.size() == 1);
  CHECK(p.examples[0].output == Value::string("bb"));
}

TEST_CASE("non-PBE constraints are rejected") {
  const std::vector<std::string> bad{
      "(constraint (= (f x) x))",
      "(constraint (= (f \"a\") (f \"b\")))",
      "(constraint (not (= (f \"a\") \"b\")))",
      "(constraint (= (f (str.++ \"a\" \"b\")) \"b\"))",
      "(constraint (= (str.len (f \"a\")) 1))",
  };
  for (const std::string& c : bad) {
    CHECK_THROWS_WITH_AS(parse_problem(with_constraints(c)),
                         doctest::Contains("non-PBE"), ParseError);
  }
}

TEST_CASE("random non-PBE constraints are all rejected") {
  testing::RandomTerms gen(5);
  for (int i = 0; i < 200; ++i) {
    // Any constraint whose input mentions the declared variable is not a
    // ground input-output pair.
    Term arg = gen.gen(Sort::String, 2);
    arg = Term::app(Op::Concat, {arg, Term::var("x", Sort::String)});
    const std::string c = "(constraint (= (f " + arg.to_string() + ") \"a\"))";
    CHECK_THROWS_AS(parse_problem(with_constraints(c)), ParseError);
  }
}

TEST_CASE("arity and sort errors in constraints") {
  CHECK_THROWS_AS(parse_problem(with_constraints("(constraint (= (f \"a\" \"b\") \"a\"))")),
                  ParseError);
  CHECK_THROWS_AS(parse_problem(with_constraints("(constraint (= (f 1) \"a\"))")), Error);
  CHECK_THROWS_AS(parse_problem(with_constraints("(constraint (= (f \"a\") 1))")), Error);
}

TEST_CASE("unsupported commands and logics") {
  CHECK_THROWS_AS(parse_problem("(set-logic LIA)\n"), ParseError);
  CHECK_THROWS_AS(parse_problem(with_constraints("(declare-datatype T ((c)))")), ParseError);
  const std::string constant = R"((set-logic SLIA)
(synth-fun f ((x String)) String ((Start String)) ((Start String ((Constant String)))))
(check-synth))";
  CHECK_THROWS_AS(parse_problem(constant), ParseError);
}

TEST_CASE("Variable in a grammar expands to matching parameters") {
  const std::string text = R"((set-logic SLIA)
(synth-fun f ((x String) (y String) (k Int)) String
  ((Start String)) ((Start String ((Variable String) (str.++ Start Start)))))
(check-synth))";
  const SygusProblem p = parse_problem(text);
  const auto& rules = p.grammar.rules("Start");
  CHECK(std::count(rules.begin(), rules.end(), Term::var("x", Sort::String)) == 1);
  CHECK(std::count(rules.begin(), rules.end(), Term::var("y", Sort::String)) == 1);
  CHECK(rules.size() == 3);
}

TEST_CASE("printed problems parse back to the same problem") {
  for (const char* name : {"1.sl", "2.sl", "3.sl"}) {
    const SygusProblem p = testing::load_benchmark(name);
    const SygusProblem q = parse_problem(print_problem(p));
    CHECK(q.target.name == p.target.name);
    CHECK(q.grammar.start == p.grammar.start);
    for (const Nonterminal& nt : p.grammar.nonterminals) {
      CHECK(q.grammar.rules(nt.name) == p.grammar.rules(nt.name));
    }
    REQUIRE(q.examples.size() == p.examples.size());
    for (std::size_t i = 0; i < p.examples.size(); ++i) {
      CHECK(q.examples[i].inputs == p.examples[i].inputs);
      CHECK(q.examples[i].output == p.examples[i].output);
    }
  }
}

TEST_CASE("solver output parsing") {
  const SygusProblem p = parse_problem(testing::kRepeatTask);
  const Term expected = parse_term("(str.++ x x)", p.target.params);

  CHECK(parse_solver_output("(define-fun f ((x String)) String (str.++ x x))", p.target) ==
        expected);
  CHECK(parse_solver_output("(\n(define-fun f ((x String)) String (str.++ x x))\n)", p.target) ==
        expected);
  // Parameter names are matched by position.
  CHECK(parse_solver_output("(define-fun f ((s String)) String (str.++ s s))", p.target) ==
        expected);
  // Some solvers print a status line before the answer.
  CHECK(parse_solver_output("unsat\n(define-fun f ((x String)) String (str.++ x x))", p.target) ==
        expected);
  CHECK_FALSE(parse_solver_output("infeasible\n", p.target).has_value());
  CHECK_FALSE(parse_solver_output("unknown\n", p.target).has_value());
  CHECK_THROWS_AS(parse_solver_output("(define-fun f ((x String)) Int 1)", p.target), Error);
  CHECK_THROWS_AS(parse_solver_output("garbage (", p.target), ParseError);
}

TEST_CASE("definitions parse into evaluable defs") {
  const std::string text =
      "(define-fun-rec g ((x String) (b String) (n Int)) String "
      "(ite (<= n 0) b (str.++ x (g x b (- n 1)))))\n"
      "(define-fun f ((x String)) String (g x \"\" 2))\n";
  const auto parsed = parse_definitions(text);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].recursive);
  CHECK_FALSE(parsed[1].recursive);
  const Defs defs = to_defs(parsed);
  const Term call = parse_term("(f \"ab\")", {}, {parsed[1].signature});
  CHECK(evaluate(call, {}, defs) == Value::string("abab"));
}
