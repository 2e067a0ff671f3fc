#include "loopsynth/eval.hpp"

#include <algorithm>
#include <functional>

#include "loopsynth/errors.hpp"

namespace loopsynth {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw EvalError("integer overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw EvalError("integer overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw EvalError("integer overflow");
  return r;
}

std::int64_t length_of(const std::string& s) {
  return static_cast<std::int64_t>(s.size());
}

// Checks calls against the definitions visible so far.
void check_body(const std::string& self, const FunDef& def, const Term& t,
                const Defs& defs) {
  switch (t.kind()) {
    case Kind::Hole:
      throw Error("definition of " + self + " contains a hole");
    case Kind::Var: {
      auto it = std::find_if(def.params.begin(), def.params.end(),
                             [&](const Param& p) { return p.name == t.name(); });
      if (it == def.params.end()) {
        throw Error("definition of " + self + " has free variable " +
                    t.name());
      }
      if (it->sort != t.sort()) {
        throw SortError("variable " + t.name() + " used at the wrong sort");
      }
      return;
    }
    case Kind::Call: {
      std::span<const Param> params;
      Sort result;
      if (t.name() == self) {
        if (!def.recursive) {
          throw Error(self + " calls itself but is not declared recursive");
        }
        params = def.params;
        result = def.result;
      } else if (const FunDef* callee = defs.find(t.name())) {
        params = callee->params;
        result = callee->result;
      } else {
        throw Error(self + " calls undefined function " + t.name());
      }
      if (params.size() != t.args().size()) {
        throw SortError("call to " + t.name() + " has wrong arity");
      }
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].sort != t.arg(i).sort()) {
          throw SortError("call to " + t.name() + " has ill-sorted argument " +
                          std::to_string(i));
        }
      }
      if (result != t.sort()) {
        throw SortError("call to " + t.name() + " has wrong result sort");
      }
      break;
    }
    default:
      break;
  }
  for (const Term& a : t.args()) check_body(self, def, a, defs);
}

}  // namespace

void Defs::add(const std::string& name, FunDef def) {
  if (defs_.count(name)) throw Error("function " + name + " already defined");
  if (def.body.sort() != def.result) {
    throw SortError("body of " + name + " does not have the declared sort");
  }
  check_body(name, def, def.body, *this);
  defs_.emplace(name, std::move(def));
}

const FunDef* Defs::find(const std::string& name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

Value apply_builtin(Op op, std::span<const Value> a) {
  switch (op) {
    case Op::Concat: {
      std::string out;
      for (const Value& v : a) out += v.as_string();
      return Value::string(std::move(out));
    }
    case Op::Len:
      return Value::integer(length_of(a[0].as_string()));
    case Op::At: {
      const std::string& s = a[0].as_string();
      std::int64_t i = a[1].as_int();
      if (i < 0 || i >= length_of(s)) return Value::string("");
      return Value::string(std::string(1, s[static_cast<std::size_t>(i)]));
    }
    case Op::Substr: {
      const std::string& s = a[0].as_string();
      std::int64_t i = a[1].as_int();
      std::int64_t n = a[2].as_int();
      if (i < 0 || i >= length_of(s) || n <= 0) return Value::string("");
      std::int64_t take = std::min(n, length_of(s) - i);
      return Value::string(s.substr(static_cast<std::size_t>(i),
                                    static_cast<std::size_t>(take)));
    }
    case Op::IndexOf: {
      const std::string& s = a[0].as_string();
      const std::string& t = a[1].as_string();
      std::int64_t i = a[2].as_int();
      if (i < 0 || i > length_of(s)) return Value::integer(-1);
      auto pos = s.find(t, static_cast<std::size_t>(i));
      return Value::integer(pos == std::string::npos
                                ? -1
                                : static_cast<std::int64_t>(pos));
    }
    case Op::Replace: {
      const std::string& s = a[0].as_string();
      const std::string& t = a[1].as_string();
      const std::string& r = a[2].as_string();
      if (t.empty()) return Value::string(r + s);
      auto pos = s.find(t);
      if (pos == std::string::npos) return Value::string(s);
      std::string out = s;
      out.replace(pos, t.size(), r);
      return Value::string(std::move(out));
    }
    case Op::Contains:
      return Value::boolean(a[0].as_string().find(a[1].as_string()) !=
                            std::string::npos);
    case Op::PrefixOf: {
      const std::string& p = a[0].as_string();
      const std::string& s = a[1].as_string();
      return Value::boolean(s.compare(0, p.size(), p) == 0 &&
                            p.size() <= s.size());
    }
    case Op::Add: {
      std::int64_t acc = 0;
      for (const Value& v : a) acc = checked_add(acc, v.as_int());
      return Value::integer(acc);
    }
    case Op::Sub:
      if (a.size() == 1) return Value::integer(checked_sub(0, a[0].as_int()));
      return Value::integer(checked_sub(a[0].as_int(), a[1].as_int()));
    case Op::Mul: {
      std::int64_t acc = 1;
      for (const Value& v : a) acc = checked_mul(acc, v.as_int());
      return Value::integer(acc);
    }
    case Op::Ite:
      return a[0].as_bool() ? a[1] : a[2];
    case Op::Eq:
      return Value::boolean(a[0] == a[1]);
    case Op::Le:
      return Value::boolean(a[0].as_int() <= a[1].as_int());
    case Op::Lt:
      return Value::boolean(a[0].as_int() < a[1].as_int());
    case Op::Ge:
      return Value::boolean(a[0].as_int() >= a[1].as_int());
    case Op::Gt:
      return Value::boolean(a[0].as_int() > a[1].as_int());
    case Op::Not:
      return Value::boolean(!a[0].as_bool());
    case Op::And:
      return Value::boolean(std::all_of(a.begin(), a.end(), [](const Value& v) {
        return v.as_bool();
      }));
    case Op::Or:
      return Value::boolean(std::any_of(a.begin(), a.end(), [](const Value& v) {
        return v.as_bool();
      }));
  }
  throw EvalError("unknown operator");
}

void Evaluator::burn() {
  if (consumed_ >= fuel_) throw FuelExhausted("evaluation fuel exhausted");
  ++consumed_;
}

Value Evaluator::eval(const Term& t, const Env& env) {
  switch (t.kind()) {
    case Kind::Literal:
      return t.value();
    case Kind::Var: {
      auto it = env.find(t.name());
      if (it == env.end()) throw UnboundVariable("unbound variable " + t.name());
      return it->second;
    }
    case Kind::Hole:
      throw EvalError("cannot evaluate a hole");
    case Kind::App: {
      burn();
      // ite, and, or are evaluated lazily so untaken recursive branches
      // do not run.
      if (t.op() == Op::Ite) {
        return eval(t.arg(0), env).as_bool() ? eval(t.arg(1), env)
                                             : eval(t.arg(2), env);
      }
      if (t.op() == Op::And || t.op() == Op::Or) {
        const bool short_on = t.op() == Op::Or;
        for (const Term& a : t.args()) {
          if (eval(a, env).as_bool() == short_on) {
            return Value::boolean(short_on);
          }
        }
        return Value::boolean(!short_on);
      }
      std::vector<Value> vals;
      vals.reserve(t.args().size());
      for (const Term& a : t.args()) vals.push_back(eval(a, env));
      return apply_builtin(t.op(), vals);
    }
    case Kind::Call: {
      burn();
      const FunDef* def = defs_.find(t.name());
      if (!def) throw EvalError("call to undefined function " + t.name());
      if (def->params.size() != t.args().size()) {
        throw EvalError("call to " + t.name() + " has wrong arity");
      }
      Env callee;
      for (std::size_t i = 0; i < def->params.size(); ++i) {
        callee.insert_or_assign(def->params[i].name, eval(t.arg(i), env));
      }
      if (depth_ >= kMaxCallDepth) {
        throw FuelExhausted("call depth limit exceeded");
      }
      ++depth_;
      struct Leave {
        std::size_t& d;
        ~Leave() { --d; }
      } leave{depth_};
      return eval(def->body, callee);
    }
  }
  throw EvalError("unknown term kind");
}

Value evaluate(const Term& t, const Env& env, const Defs& defs,
               std::uint64_t fuel) {
  Evaluator ev(defs, fuel);
  return ev.eval(t, env);
}

Value evaluate(const Term& t, const Env& env) {
  static const Defs kNoDefs;
  return evaluate(t, env, kNoDefs, UINT64_MAX);
}

Env bind_params(std::span<const Param> params, std::span<const Value> values) {
  if (params.size() != values.size()) {
    throw EvalError("argument count does not match parameter count");
  }
  Env env;
  for (std::size_t i = 0; i < params.size(); ++i) {
    env.insert_or_assign(params[i].name, values[i]);
  }
  return env;
}

}  // namespace loopsynth
