#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loopsynth/eval.hpp"
#include "loopsynth/sygus.hpp"
#include "loopsynth/term.hpp"

namespace testing {

using namespace loopsynth;

inline std::filesystem::path benchmark_dir() { return LOOPSYNTH_BENCHMARK_DIR; }
inline std::filesystem::path golden_dir() { return LOOPSYNTH_GOLDEN_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SygusProblem load_benchmark(const std::string& name) {
  return parse_problem(read_file(benchmark_dir() / name));
}

// The three-example task: each output is len(x) copies of the input.
inline constexpr const char* kRepeatTask = R"((set-logic SLIA)
(synth-fun f ((x String)) String
  ((Start String) (I Int) (B Bool))
  ((Start String (x "" (str.++ Start Start) (str.at Start I) (ite B Start Start)))
   (I Int (0 1 (str.len Start) (+ I I) (- I I)))
   (B Bool ((= I I) (<= I I)))))
(declare-var x String)
(constraint (= (f "synth") "synthsynthsynthsynthsynth"))
(constraint (= (f "prog") "progprogprogprog"))
(constraint (= (f "program") "programprogramprogramprogramprogramprogramprogram"))
(check-synth)
)";

inline std::vector<Param> xs() { return {{"x", Sort::String}}; }

class RandomTerms {
 public:
  explicit RandomTerms(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return rng_() % n; }
  bool coin() { return rng_() % 2 == 0; }

  std::string word(std::size_t max_len = 4) {
    static constexpr char kAlphabet[] = "ab,c";
    std::string s(below(max_len + 1), ' ');
    for (char& c : s) c = kAlphabet[below(4)];
    return s;
  }

  Term string_leaf() {
    switch (below(3)) {
      case 0:
        return Term::var("x", Sort::String);
      case 1:
        return Term::var("y", Sort::String);
      default:
        return Term::string(word());
    }
  }

  Term int_leaf() {
    if (coin()) return Term::integer(static_cast<std::int64_t>(below(7)) - 2);
    return Term::app(Op::Len, {string_leaf()});
  }

  Term gen(Sort sort, int depth) {
    if (depth <= 0) {
      if (sort == Sort::String) return string_leaf();
      if (sort == Sort::Int) return int_leaf();
      return Term::boolean(coin());
    }
    const int d = depth - 1;
    if (sort == Sort::String) {
      switch (below(7)) {
        case 0:
          return string_leaf();
        case 1:
        case 2: {
          std::vector<Term> parts;
          const std::size_t n = 2 + below(2);
          for (std::size_t i = 0; i < n; ++i) parts.push_back(gen(Sort::String, d));
          return Term::app(Op::Concat, parts);
        }
        case 3:
          return Term::app(Op::At, {gen(Sort::String, d), gen(Sort::Int, d)});
        case 4:
          return Term::app(Op::Substr,
                           {gen(Sort::String, d), gen(Sort::Int, d), gen(Sort::Int, d)});
        case 5:
          return Term::app(Op::Replace, {gen(Sort::String, d), gen(Sort::String, d),
                                         gen(Sort::String, d)});
        default:
          return Term::app(Op::Ite,
                           {gen(Sort::Bool, d), gen(Sort::String, d), gen(Sort::String, d)});
      }
    }
    if (sort == Sort::Int) {
      switch (below(5)) {
        case 0:
          return int_leaf();
        case 1:
          return Term::app(Op::Add, {gen(Sort::Int, d), gen(Sort::Int, d)});
        case 2:
          return Term::app(Op::Sub, {gen(Sort::Int, d), gen(Sort::Int, d)});
        case 3:
          return Term::app(Op::IndexOf,
                           {gen(Sort::String, d), gen(Sort::String, d), gen(Sort::Int, d)});
        default:
          return Term::app(Op::Len, {gen(Sort::String, d)});
      }
    }
    switch (below(5)) {
      case 0:
        return Term::app(Op::Le, {gen(Sort::Int, d), gen(Sort::Int, d)});
      case 1:
        return Term::app(Op::Eq, {gen(Sort::String, d), gen(Sort::String, d)});
      case 2:
        return Term::app(Op::Contains, {gen(Sort::String, d), gen(Sort::String, d)});
      case 3:
        return Term::app(Op::And, {gen(Sort::Bool, d), gen(Sort::Bool, d)});
      default:
        return Term::app(Op::Not, {gen(Sort::Bool, d)});
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline Env env_xy(const std::string& x, const std::string& y) {
  return {{"x", Value::string(x)}, {"y", Value::string(y)}};
}

inline std::vector<Param> xy() { return {{"x", Sort::String}, {"y", Sort::String}}; }

// Every term of exactly `size` nodes derivable from `nt`, with no pruning.
// Deliberately naive: it shares no code with the solver's enumerator.
class BruteForce {
 public:
  explicit BruteForce(const Grammar& g) : g_(g) {}

  const std::vector<Term>& terms(const std::string& nt, std::size_t size) {
    const auto key = std::make_pair(nt, size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Term> out;
    for (const Term& rule : g_.rules(nt)) {
      std::vector<Path> leaves;
      for (const Path& p : positions(rule)) {
        const Term& sub = subterm_at(rule, p);
        if (sub.kind() == Kind::Var && g_.is_nonterminal(sub.name())) leaves.push_back(p);
      }
      const std::size_t fixed = rule.size() - leaves.size();
      if (size < fixed + leaves.size()) continue;
      fill(rule, leaves, 0, size - fixed, out);
    }
    return memo_[key] = std::move(out);
  }

  // Smallest size at which some term satisfies `ok`, searching up to `limit`.
  template <class Pred>
  std::optional<std::size_t> smallest(std::size_t limit, Pred ok) {
    for (std::size_t n = 1; n <= limit; ++n) {
      for (const Term& t : terms(g_.start, n)) {
        if (ok(t)) return n;
      }
    }
    return std::nullopt;
  }

 private:
  void fill(const Term& partial, const std::vector<Path>& leaves, std::size_t i,
            std::size_t budget, std::vector<Term>& out) {
    if (i == leaves.size()) {
      if (budget == 0) out.push_back(partial);
      return;
    }
    const std::size_t rest = leaves.size() - i - 1;
    const std::string nt = subterm_at(partial, leaves[i]).name();
    for (std::size_t k = 1; k + rest <= budget; ++k) {
      // Copy: the recursive call below may grow memo_ and move vectors.
      const std::vector<Term> subs = terms(nt, k);
      for (const Term& s : subs) {
        fill(replace_at(partial, leaves[i], s), leaves, i + 1, budget - k, out);
      }
    }
  }

  const Grammar& g_;
  std::map<std::pair<std::string, std::size_t>, std::vector<Term>> memo_;
};

// A random PBE instance over a random small string grammar, with outputs
// produced by a random grammar term so a solution always exists.
inline SygusProblem random_small_pbe(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return rng() % n; };
  std::string start = "x";
  const char* lits[] = {"\"a\"", "\",\"", "\"\"", "\"b\""};
  const std::size_t lit = pick(4);
  start += std::string(" ") + lits[lit];
  if (pick(2)) start += std::string(" ") + lits[(lit + 1 + pick(3)) % 4];
  start += " (str.++ Start Start)";
  const bool with_int = pick(3) != 0;
  if (with_int) start += pick(2) ? " (str.at Start I)" : " (str.substr Start I I)";
  std::string text = "(set-logic SLIA)\n(synth-fun f ((x String)) String\n  ((Start String)";
  if (with_int) text += " (I Int)";
  text += ")\n  ((Start String (" + start + "))";
  if (with_int) text += "\n   (I Int (0 1 (str.len Start) (+ I I)))";
  text += "))\n(declare-var x String)\n(check-synth)\n";
  SygusProblem p = parse_problem(text);

  BruteForce bf(p.grammar);
  std::vector<Term> pool;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto& ts = bf.terms(p.grammar.start, n);
    pool.insert(pool.end(), ts.begin(), ts.end());
  }
  const Term target = pool[pick(pool.size())];
  const char* inputs[] = {"ab", "xyz", "a,b", "", "hello", "q"};
  const std::size_t count = 2 + pick(2);
  const std::size_t first = pick(6);
  for (std::size_t i = 0; i < count; ++i) {
    const Value in = Value::string(inputs[(first + i) % 6]);
    p.examples.push_back({{in}, evaluate(target, {{"x", in}})});
  }
  return p;
}

}  // namespace testing
