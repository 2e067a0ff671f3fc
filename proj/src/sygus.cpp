#include "loopsynth/sygus.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "loopsynth/errors.hpp"

namespace loopsynth {

namespace {

[[noreturn]] void fail_at(const SExpr& e, const std::string& msg) {
  throw ParseError(msg, e.line, e.column);
}

[[noreturn]] void unsupported(const SExpr& e, const std::string& what) {
  throw ParseError("unsupported " + what, e.line, e.column);
}

Sort sort_of(const SExpr& e) {
  if (!e.is_symbol()) unsupported(e, "sort/operator: " + e.to_string());
  auto s = parse_sort(e.text);
  if (!s) unsupported(e, "sort/operator: " + e.text);
  return *s;
}

std::int64_t numeral_value(const SExpr& e) {
  std::int64_t v = 0;
  auto [ptr, ec] =
      std::from_chars(e.text.data(), e.text.data() + e.text.size(), v);
  if (ec != std::errc() || ptr != e.text.data() + e.text.size()) {
    fail_at(e, "numeral out of range: " + e.text);
  }
  return v;
}

bool is_negative_numeral(const SExpr& e) {
  return e.is_list() && e.items.size() == 2 && e.items[0].is_symbol("-") &&
         e.items[1].kind == SExpr::Kind::Numeral;
}

/// Literal value if `e` is one (numeral, string, true/false, `(- n)`).
std::optional<Value> literal_of(const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::Numeral:
      return Value::integer(numeral_value(e));
    case SExpr::Kind::String:
      return Value::string(e.text);
    case SExpr::Kind::Symbol:
      if (e.text == "true") return Value::boolean(true);
      if (e.text == "false") return Value::boolean(false);
      return std::nullopt;
    case SExpr::Kind::List:
      if (is_negative_numeral(e)) {
        return Value::integer(-numeral_value(e.items[1]));
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

struct Scope {
  std::unordered_map<std::string, Sort> vars;
  std::unordered_map<std::string, Sort> nonterminals;
  std::unordered_map<std::string, FunctionSignature> functions;
};

Term to_term(const SExpr& e, const Scope& scope) {
  if (auto lit = literal_of(e)) return Term::literal(*lit);
  if (e.is_symbol()) {
    if (auto it = scope.nonterminals.find(e.text); it != scope.nonterminals.end()) {
      return Term::var(e.text, it->second);
    }
    if (auto it = scope.vars.find(e.text); it != scope.vars.end()) {
      return Term::var(e.text, it->second);
    }
    if (auto it = scope.functions.find(e.text);
        it != scope.functions.end() && it->second.params.empty()) {
      return Term::call(e.text, it->second.result, {});
    }
    fail_at(e, "unknown symbol " + e.text);
  }
  if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) {
    fail_at(e, "malformed term " + e.to_string());
  }
  const std::string& head = e.items[0].text;
  std::vector<Term> args;
  args.reserve(e.items.size() - 1);
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    args.push_back(to_term(e.items[i], scope));
  }
  if (auto it = scope.functions.find(head); it != scope.functions.end()) {
    const FunctionSignature& sig = it->second;
    if (sig.params.size() != args.size()) {
      fail_at(e, "wrong number of arguments to " + head);
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].sort() != sig.params[i].sort) {
        fail_at(e, "ill-sorted argument to " + head);
      }
    }
    return Term::call(head, sig.result, std::move(args));
  }
  auto op = lookup_op(head);
  if (!op) unsupported(e.items[0], "sort/operator: " + head);
  try {
    return Term::app(*op, std::move(args));
  } catch (const SortError& err) {
    fail_at(e, err.what());
  }
}

std::vector<Param> parse_params(const SExpr& e) {
  if (!e.is_list()) fail_at(e, "expected parameter list");
  std::vector<Param> out;
  for (const SExpr& p : e.items) {
    if (!p.is_list() || p.items.size() != 2 || !p.items[0].is_symbol()) {
      fail_at(p, "malformed parameter");
    }
    out.push_back({p.items[0].text, sort_of(p.items[1])});
  }
  return out;
}

Grammar parse_grammar(const SExpr& decls, const SExpr* groups,
                      const FunctionSignature& target) {
  Grammar g;
  // SyGuS v2: ((N S) ...) ((N S (rules...)) ...)
  // SyGuS v1: ((N S (rules...)) ...)
  const SExpr& rule_groups = groups ? *groups : decls;
  if (!rule_groups.is_list() || rule_groups.items.empty()) {
    fail_at(rule_groups, "empty grammar");
  }
  const SExpr& names = groups ? decls : rule_groups;
  for (const SExpr& d : names.items) {
    if (!d.is_list() || d.items.size() < 2 || !d.items[0].is_symbol()) {
      fail_at(d, "malformed nonterminal declaration");
    }
    if (g.is_nonterminal(d.items[0].text)) {
      fail_at(d, "duplicate nonterminal " + d.items[0].text);
    }
    g.nonterminals.push_back({d.items[0].text, sort_of(d.items[1])});
  }
  g.start = g.nonterminals.front().name;

  Scope scope;
  for (const Param& p : target.params) scope.vars.emplace(p.name, p.sort);
  for (const Nonterminal& nt : g.nonterminals) {
    if (scope.vars.count(nt.name)) {
      fail_at(names, "nonterminal " + nt.name + " shadows a parameter");
    }
    scope.nonterminals.emplace(nt.name, nt.sort);
  }

  for (const SExpr& grp : rule_groups.items) {
    if (!grp.is_list() || grp.items.size() != 3 || !grp.items[0].is_symbol() ||
        !grp.items[2].is_list()) {
      fail_at(grp, "malformed grouped rule list");
    }
    const Nonterminal* nt = g.find(grp.items[0].text);
    if (!nt) fail_at(grp, "undeclared nonterminal " + grp.items[0].text);
    if (sort_of(grp.items[1]) != nt->sort) {
      fail_at(grp, "sort mismatch for nonterminal " + nt->name);
    }
    auto& rules = g.productions[nt->name];
    for (const SExpr& r : grp.items[2].items) {
      if (r.has_head("Constant")) unsupported(r, "grammar term (Constant ...)");
      if (r.has_head("Variable")) {
        if (r.items.size() != 2) fail_at(r, "malformed (Variable S)");
        Sort s = sort_of(r.items[1]);
        for (const Param& p : target.params) {
          if (p.sort == s) rules.push_back(Term::var(p.name, p.sort));
        }
        continue;
      }
      Term t = to_term(r, scope);
      if (t.sort() != nt->sort) {
        fail_at(r, "production " + r.to_string() + " has the wrong sort for " +
                       nt->name);
      }
      rules.push_back(std::move(t));
    }
  }
  return g;
}

bool is_target_app(const SExpr& e, const FunctionSignature& target) {
  return e.has_head(target.name) ||
         (target.params.empty() && e.is_symbol(target.name));
}

ConstraintExample parse_constraint(const SExpr& c, const SygusProblem& p) {
  const SExpr& body = c.items[1];
  auto non_pbe = [&]() {
    fail_at(c, "non-PBE constraint: " + c.to_string());
  };
  if (!body.has_head("=") || body.items.size() != 3) non_pbe();
  const SExpr* call = &body.items[1];
  const SExpr* out = &body.items[2];
  if (!is_target_app(*call, p.target)) std::swap(call, out);
  if (!is_target_app(*call, p.target)) non_pbe();
  auto output = literal_of(*out);
  if (!output) non_pbe();
  ConstraintExample ex{{}, *output};
  std::size_t nargs = call->is_list() ? call->items.size() - 1 : 0;
  if (nargs != p.target.params.size()) {
    fail_at(*call, "example arity does not match " + p.target.name);
  }
  for (std::size_t i = 0; i < nargs; ++i) {
    auto v = literal_of(call->items[i + 1]);
    if (!v) non_pbe();
    if (v->sort() != p.target.params[i].sort) {
      fail_at(call->items[i + 1], "example input has the wrong sort");
    }
    ex.inputs.push_back(*v);
  }
  if (ex.output.sort() != p.target.result) {
    fail_at(*out, "example output has the wrong sort");
  }
  return ex;
}

std::string print_params(const std::vector<Param>& params) {
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ' ';
    out += "(" + params[i].name + " " + std::string(sort_name(params[i].sort)) +
           ")";
  }
  return out + ")";
}

}  // namespace

const Nonterminal* Grammar::find(std::string_view name) const {
  for (const Nonterminal& nt : nonterminals) {
    if (nt.name == name) return &nt;
  }
  return nullptr;
}

Sort Grammar::start_sort() const {
  const Nonterminal* nt = find(start);
  if (!nt) throw Error("grammar start symbol " + start + " is not declared");
  return nt->sort;
}

const std::vector<Term>& Grammar::rules(const std::string& nt) const {
  static const std::vector<Term> kEmpty;
  auto it = productions.find(nt);
  return it == productions.end() ? kEmpty : it->second;
}

void Grammar::validate(const FunctionSignature& target) const {
  if (start_sort() != target.result) {
    throw Error("grammar start sort does not match the return sort of " +
                target.name);
  }
  for (const auto& [nt, rules] : productions) {
    if (!is_nonterminal(nt)) throw Error("rules for undeclared nonterminal " + nt);
    for (const Term& r : rules) {
      for (const std::string& v : free_vars(r)) {
        bool param = std::any_of(target.params.begin(), target.params.end(),
                                 [&](const Param& p) { return p.name == v; });
        if (!param && !is_nonterminal(v)) {
          throw Error("production references undeclared symbol " + v);
        }
      }
    }
  }
}

SygusProblem parse_problem(std::string_view text) {
  SygusProblem p;
  bool have_target = false;
  std::vector<const SExpr*> constraints;
  auto forms = read_sexprs(text);
  for (const SExpr& f : forms) {
    if (!f.is_list() || f.items.empty() || !f.items[0].is_symbol()) {
      fail_at(f, "expected a command");
    }
    const std::string& cmd = f.items[0].text;
    if (cmd == "set-logic") {
      if (f.items.size() != 2 || !f.items[1].is_symbol()) {
        fail_at(f, "malformed set-logic");
      }
      if (f.items[1].text != "SLIA" && f.items[1].text != "S") {
        unsupported(f.items[1], "logic " + f.items[1].text);
      }
      p.logic = f.items[1].text;
    } else if (cmd == "synth-fun") {
      if (have_target) fail_at(f, "only one synth-fun is supported");
      if (f.items.size() < 5 || f.items.size() > 6 || !f.items[1].is_symbol()) {
        fail_at(f, "synth-fun requires an inline grammar");
      }
      p.target.name = f.items[1].text;
      p.target.params = parse_params(f.items[2]);
      p.target.result = sort_of(f.items[3]);
      p.grammar = parse_grammar(f.items[4], f.items.size() == 6 ? &f.items[5] : nullptr,
                                p.target);
      try {
        p.grammar.validate(p.target);
      } catch (const Error& e) {
        fail_at(f, e.what());
      }
      have_target = true;
    } else if (cmd == "declare-var") {
      if (f.items.size() != 3 || !f.items[1].is_symbol()) {
        fail_at(f, "malformed declare-var");
      }
      p.declared_vars.push_back({f.items[1].text, sort_of(f.items[2])});
    } else if (cmd == "constraint") {
      if (f.items.size() != 2) fail_at(f, "malformed constraint");
      constraints.push_back(&f);
    } else if (cmd == "check-synth") {
      // no-op
    } else {
      fail_at(f, "unsupported command " + cmd);
    }
  }
  if (!have_target) throw ParseError("no synth-fun in input", 0, 0);
  if (p.logic.empty()) p.logic = "SLIA";
  for (const SExpr* c : constraints) p.examples.push_back(parse_constraint(*c, p));
  return p;
}

Term parse_term(std::string_view text, const std::vector<Param>& vars,
                const std::vector<FunctionSignature>& functions) {
  auto forms = read_sexprs(text);
  if (forms.size() != 1) throw ParseError("expected exactly one term", 0, 0);
  Scope scope;
  for (const Param& p : vars) scope.vars.emplace(p.name, p.sort);
  for (const FunctionSignature& f : functions) scope.functions.emplace(f.name, f);
  return to_term(forms[0], scope);
}

std::string print_problem(const SygusProblem& p) {
  std::ostringstream os;
  os << "(set-logic " << (p.logic.empty() ? "SLIA" : p.logic) << ")\n";
  os << "(synth-fun " << p.target.name << " " << print_params(p.target.params)
     << " " << sort_name(p.target.result) << "\n  (";
  for (std::size_t i = 0; i < p.grammar.nonterminals.size(); ++i) {
    const Nonterminal& nt = p.grammar.nonterminals[i];
    os << (i ? " " : "") << "(" << nt.name << " " << sort_name(nt.sort) << ")";
  }
  os << ")\n  (";
  for (std::size_t i = 0; i < p.grammar.nonterminals.size(); ++i) {
    const Nonterminal& nt = p.grammar.nonterminals[i];
    os << (i ? "\n   " : "") << "(" << nt.name << " " << sort_name(nt.sort)
       << " (";
    const auto& rules = p.grammar.rules(nt.name);
    for (std::size_t j = 0; j < rules.size(); ++j) {
      os << (j ? " " : "") << rules[j];
    }
    os << "))";
  }
  os << "))\n";
  for (const Param& v : p.declared_vars) {
    os << "(declare-var " << v.name << " " << sort_name(v.sort) << ")\n";
  }
  for (const ConstraintExample& ex : p.examples) {
    os << "(constraint (= (" << p.target.name;
    for (const Value& v : ex.inputs) os << " " << v.to_smtlib();
    os << ") " << ex.output.to_smtlib() << "))\n";
  }
  os << "(check-synth)\n";
  return os.str();
}

std::string print_define_fun(const FunctionSignature& sig, const Term& body,
                             bool recursive) {
  std::ostringstream os;
  os << (recursive ? "(define-fun-rec " : "(define-fun ") << sig.name << " "
     << print_params(sig.params) << " " << sort_name(sig.result) << " " << body
     << ")";
  return os.str();
}

std::string print_solution(const FunctionSignature& sig, const Term& body) {
  return print_define_fun(sig, body) + "\n";
}

namespace {

ParsedDefinition parse_definition(const SExpr& d,
                                  const std::vector<ParsedDefinition>& prior) {
  if (d.items.size() != 5 || !d.items[1].is_symbol()) {
    fail_at(d, "malformed " + d.items[0].text);
  }
  ParsedDefinition out{{d.items[1].text, parse_params(d.items[2]),
                        sort_of(d.items[3])},
                       Term::boolean(false),
                       d.items[0].text == "define-fun-rec"};
  Scope scope;
  for (const Param& p : out.signature.params) scope.vars.emplace(p.name, p.sort);
  for (const ParsedDefinition& pd : prior) {
    scope.functions.emplace(pd.signature.name, pd.signature);
  }
  if (out.recursive) scope.functions.emplace(out.signature.name, out.signature);
  out.body = to_term(d.items[4], scope);
  if (out.body.sort() != out.signature.result) {
    fail_at(d.items[4], "body sort does not match declared sort");
  }
  return out;
}

void collect_definitions(const SExpr& e, std::vector<ParsedDefinition>& out) {
  if (e.has_head("define-fun") || e.has_head("define-fun-rec")) {
    out.push_back(parse_definition(e, out));
  } else if (e.is_list()) {
    // CVC4/cvc5 wrap their answers in an extra list.
    for (const SExpr& i : e.items) collect_definitions(i, out);
  }
}

bool is_failure_token(const SExpr& e) {
  return e.is_symbol("infeasible") || e.is_symbol("unsat") ||
         e.is_symbol("unknown") || e.is_symbol("fail") || e.is_symbol("timeout");
}

}  // namespace

std::vector<ParsedDefinition> parse_definitions(std::string_view text) {
  std::vector<ParsedDefinition> out;
  for (const SExpr& e : read_sexprs(text)) collect_definitions(e, out);
  return out;
}

Defs to_defs(const std::vector<ParsedDefinition>& defs) {
  Defs out;
  for (const ParsedDefinition& d : defs) {
    out.add(d.signature.name,
            FunDef{d.signature.params, d.signature.result, d.body, d.recursive});
  }
  return out;
}

std::optional<Term> parse_solver_output(std::string_view text,
                                        const FunctionSignature& target) {
  auto forms = read_sexprs(text);
  std::vector<ParsedDefinition> defs;
  bool failed = false;
  for (const SExpr& e : forms) {
    if (is_failure_token(e)) failed = true;
    collect_definitions(e, defs);
  }
  for (const ParsedDefinition& d : defs) {
    if (d.signature.name != target.name) continue;
    if (d.signature.params.size() != target.params.size() ||
        d.signature.result != target.result) {
      throw ParseError("solver definition of " + target.name +
                           " does not match the target signature",
                       0, 0);
    }
    Term body = d.body;
    // Rename through fresh names first so swapped parameter names work.
    for (std::size_t i = 0; i < target.params.size(); ++i) {
      const Param& theirs = d.signature.params[i];
      if (theirs.sort != target.params[i].sort) {
        throw ParseError("solver parameter sort mismatch", 0, 0);
      }
      body = substitute_var(body, theirs.name,
                            Term::var("\x01" + std::to_string(i), theirs.sort));
    }
    for (std::size_t i = 0; i < target.params.size(); ++i) {
      body = substitute_var(body, "\x01" + std::to_string(i),
                            Term::var(target.params[i].name, target.params[i].sort));
    }
    return body;
  }
  if (failed) return std::nullopt;
  throw ParseError("solver output contains no definition of " + target.name, 0, 0);
}

}  // namespace loopsynth
