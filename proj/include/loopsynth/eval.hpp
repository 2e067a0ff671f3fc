#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "loopsynth/term.hpp"

namespace loopsynth {

struct Param {
  std::string name;
  Sort sort;

  friend bool operator==(const Param&, const Param&) = default;
};

struct FunDef {
  std::vector<Param> params;
  Sort result;
  Term body;
  bool recursive = false;
};

/// Named function definitions available to Call nodes.
///
/// A definition may call itself only when marked recursive, and may call
/// other functions only if they were added before it, which rules out
/// mutual recursion.
class Defs {
 public:
  /// Throws Error on redefinition, forward/mutual references, arity or sort
  /// mismatch in calls, or free variables that are not parameters.
  void add(const std::string& name, FunDef def);

  const FunDef* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  const std::map<std::string, FunDef>& all() const { return defs_; }

 private:
  std::map<std::string, FunDef> defs_;
};

using Env = std::unordered_map<std::string, Value>;

inline constexpr std::uint64_t kDefaultFuel = 100000;
/// Nested defined-function calls deeper than this are reported as
/// FuelExhausted rather than risking the native stack.
inline constexpr std::size_t kMaxCallDepth = 2000;

/// SMT-LIB 2.6 semantics of a builtin on already-evaluated arguments.
/// Integer overflow throws EvalError.
Value apply_builtin(Op op, std::span<const Value> args);

/// Fuel-metered evaluator. Each App or Call node evaluated consumes one unit.
class Evaluator {
 public:
  Evaluator(const Defs& defs, std::uint64_t fuel) : defs_(defs), fuel_(fuel) {}

  Value eval(const Term& t, const Env& env);

  std::uint64_t consumed() const { return consumed_; }

 private:
  void burn();

  const Defs& defs_;
  std::uint64_t fuel_;
  std::uint64_t consumed_ = 0;
  std::size_t depth_ = 0;
};

Value evaluate(const Term& t, const Env& env, const Defs& defs,
               std::uint64_t fuel = kDefaultFuel);

/// Evaluate a Hole-free, Call-free term with no fuel accounting.
Value evaluate(const Term& t, const Env& env);

/// Bind positional argument values to parameter names.
Env bind_params(std::span<const Param> params, std::span<const Value> values);

}  // namespace loopsynth
