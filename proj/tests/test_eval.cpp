#include <doctest.h>

#include "loopsynth/errors.hpp"
#include "loopsynth/eval.hpp"
#include "loopsynth/sygus.hpp"
#include "support.hpp"

using namespace loopsynth;

namespace {

Value ev(const std::string& text) { return evaluate(parse_term(text, {}), {}); }

struct GoldenCase {
  std::string term;
  std::string expected;
};

std::vector<GoldenCase> golden_cases() {
  std::vector<GoldenCase> out;
  std::istringstream in(testing::read_file(testing::golden_dir() / "golden_strings.txt"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == ';') continue;
    const auto tab = line.find('\t');
    out.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

}  // namespace

TEST_CASE("golden string semantics") {
  const auto cases = golden_cases();
  REQUIRE(cases.size() == 50);
  for (const GoldenCase& c : cases) {
    CHECK_MESSAGE(ev(c.term).to_smtlib() == c.expected, c.term);
  }
}

TEST_CASE("string operator edge cases") {
  CHECK(ev("(str.substr \"abc\" 1 100)") == Value::string("bc"));
  CHECK(ev("(str.at \"abc\" 3)") == Value::string(""));
  CHECK(ev("(str.indexof \"abc\" \"d\" 0)") == Value::integer(-1));
  CHECK(ev("(str.indexof \"abc\" \"\" 3)") == Value::integer(3));
  CHECK(ev("(str.replace \"abc\" \"\" \"z\")") == Value::string("zabc"));
  CHECK(ev("(str.prefixof \"abcd\" \"abc\")") == Value::boolean(false));
}

TEST_CASE("integer overflow is an evaluation error") {
  CHECK_THROWS_AS(ev("(+ 9223372036854775807 1)"), EvalError);
  CHECK_THROWS_AS(ev("(* 4611686018427387904 2)"), EvalError);
  CHECK(ev("(- 5)") == Value::integer(-5));
}

TEST_CASE("unbound variables and holes do not evaluate") {
  CHECK_THROWS_AS(evaluate(Term::var("x", Sort::String), {}), UnboundVariable);
  CHECK_THROWS_AS(evaluate(Term::hole(Sort::Int), {}), EvalError);
}

TEST_CASE("ite evaluates only the taken branch") {
  // The untaken branch overflows.
  CHECK(ev("(ite true 1 (+ 9223372036854775807 1))") == Value::integer(1));
  CHECK(ev("(or true (= (+ 9223372036854775807 1) 0))") == Value::boolean(true));
}

TEST_CASE("recursive definitions and fuel") {
  Defs defs;
  const std::vector<Param> params{{"x", Sort::String}, {"n", Sort::Int}};
  const FunctionSignature rep{"rep", params, Sort::String};
  const Term body = parse_term(
      "(ite (<= n 0) \"\" (str.++ x (rep x (- n 1))))", params, {rep});
  defs.add("rep", FunDef{params, Sort::String, body, true});

  const Term call3 = parse_term("(rep \"ab\" 3)", {}, {rep});
  CHECK(evaluate(call3, {}, defs) == Value::string("ababab"));

  // Every App and Call node costs one unit of fuel; count them by hand:
  // rep(3), rep(2), rep(1) each run ite, <=, str.++, -, and a call; rep(0)
  // runs ite and <=.
  Evaluator counted(defs, kDefaultFuel);
  counted.eval(call3, {});
  CHECK(counted.consumed() == 1 + 3 * 5 + 2);

  CHECK_THROWS_AS(evaluate(call3, {}, defs, 10), FuelExhausted);

  // Divergence is caught by the depth limit before the native stack overflows.
  const Term forever = parse_term("(rep \"a\" (- 1))", {}, {rep});
  CHECK(evaluate(forever, {}, defs) == Value::string(""));
  const Term deep = parse_term("(rep \"a\" 5000)", {}, {rep});
  CHECK_THROWS_AS(evaluate(deep, {}, defs, 1'000'000), FuelExhausted);
}

TEST_CASE("definitions are checked when added") {
  const std::vector<Param> params{{"x", Sort::String}};
  const FunctionSignature self{"loop", params, Sort::String};
  Defs defs;
  const Term body = parse_term("(loop x)", params, {self});
  CHECK_THROWS_AS(defs.add("loop", FunDef{params, Sort::String, body, false}), Error);
  CHECK_THROWS_AS(
      defs.add("free", FunDef{params, Sort::String, Term::var("y", Sort::String), false}),
      Error);
  CHECK_THROWS_AS(defs.add("bad", FunDef{params, Sort::Int, Term::var("x", Sort::String), false}),
                  SortError);
  // Forward references are rejected, so mutual recursion cannot be expressed.
  const FunctionSignature later{"later", params, Sort::String};
  CHECK_THROWS_AS(defs.add("early", FunDef{params, Sort::String,
                                           parse_term("(later x)", params, {later}), false}),
                  Error);
}

TEST_CASE("bind_params checks arity") {
  const std::vector<Param> params{{"x", Sort::String}};
  const std::vector<Value> two{Value::string("a"), Value::string("b")};
  CHECK_THROWS_AS(bind_params(params, two), EvalError);
}
