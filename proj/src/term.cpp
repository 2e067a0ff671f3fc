#include "loopsynth/term.hpp"

#include <array>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "loopsynth/errors.hpp"

namespace loopsynth {

namespace detail {

struct Node {
  Kind kind;
  Sort sort;
  Op op = Op::Concat;
  std::string name;
  Value value = Value::boolean(false);
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t holes = 0;
};

}  // namespace detail

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct OpInfo {
  std::string_view symbol;
  int min_arity;
  int max_arity;  // -1: unbounded
  bool associative;
};

constexpr std::array<OpInfo, kOpCount> kOps = {{
    {"str.++", 2, -1, true},
    {"str.len", 1, 1, false},
    {"str.at", 2, 2, false},
    {"str.substr", 3, 3, false},
    {"str.indexof", 3, 3, false},
    {"str.replace", 3, 3, false},
    {"str.contains", 2, 2, false},
    {"str.prefixof", 2, 2, false},
    {"+", 2, -1, true},
    {"-", 1, 2, false},
    {"*", 2, -1, false},
    {"ite", 3, 3, false},
    {"=", 2, 2, false},
    {"<=", 2, 2, false},
    {"<", 2, 2, false},
    {">=", 2, 2, false},
    {">", 2, 2, false},
    {"not", 1, 1, false},
    {"and", 2, -1, true},
    {"or", 2, -1, true},
}};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

void require(bool ok, Op op, std::string_view what) {
  if (!ok) {
    throw SortError(std::string(op_symbol(op)) + ": " + std::string(what));
  }
}

bool all_of_sort(std::span<const Sort> args, Sort s) {
  for (Sort a : args) {
    if (a != s) return false;
  }
  return true;
}

void print(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case Kind::Literal:
      os << t.value().to_smtlib();
      return;
    case Kind::Var:
      os << t.name();
      return;
    case Kind::Hole:
      os << kHoleSymbol;
      return;
    case Kind::App:
    case Kind::Call:
      os << '(' << (t.kind() == Kind::App ? op_symbol(t.op()) : t.name());
      for (const Term& a : t.args()) {
        os << ' ';
        print(os, a);
      }
      os << ')';
      return;
  }
}

}  // namespace

std::string_view sort_name(Sort sort) {
  switch (sort) {
    case Sort::String:
      return "String";
    case Sort::Int:
      return "Int";
    case Sort::Bool:
      return "Bool";
  }
  return "?";
}

std::optional<Sort> parse_sort(std::string_view name) {
  if (name == "String") return Sort::String;
  if (name == "Int") return Sort::Int;
  if (name == "Bool") return Sort::Bool;
  return std::nullopt;
}

std::size_t Value::hash() const {
  std::size_t h = rep_.index();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        h = mix(h, std::hash<T>{}(v));
      },
      rep_);
  return h;
}

std::string quote_string(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string Value::to_smtlib() const {
  switch (sort()) {
    case Sort::String:
      return quote_string(as_string());
    case Sort::Int: {
      std::int64_t i = as_int();
      if (i >= 0) return std::to_string(i);
      // Negate via unsigned so INT64_MIN prints correctly.
      std::uint64_t mag = 0 - static_cast<std::uint64_t>(i);
      return "(- " + std::to_string(mag) + ")";
    }
    case Sort::Bool:
      return as_bool() ? "true" : "false";
  }
  return {};
}

std::ostream& operator<<(std::ostream& os, const Value& v) {
  return os << v.to_smtlib();
}

std::string_view op_symbol(Op op) { return info(op).symbol; }

std::optional<Op> lookup_op(std::string_view symbol) {
  for (std::size_t i = 0; i < kOps.size(); ++i) {
    if (kOps[i].symbol == symbol) return static_cast<Op>(i);
  }
  return std::nullopt;
}

bool is_associative(Op op) { return info(op).associative; }

Sort result_sort(Op op, std::span<const Sort> args) {
  const OpInfo& oi = info(op);
  const int n = static_cast<int>(args.size());
  require(n >= oi.min_arity && (oi.max_arity < 0 || n <= oi.max_arity), op,
          "wrong number of arguments (" + std::to_string(n) + ")");
  switch (op) {
    case Op::Concat:
      require(all_of_sort(args, Sort::String), op, "expects String arguments");
      return Sort::String;
    case Op::Len:
      require(args[0] == Sort::String, op, "expects a String");
      return Sort::Int;
    case Op::At:
      require(args[0] == Sort::String && args[1] == Sort::Int, op,
              "expects (String Int)");
      return Sort::String;
    case Op::Substr:
      require(args[0] == Sort::String && args[1] == Sort::Int &&
                  args[2] == Sort::Int,
              op, "expects (String Int Int)");
      return Sort::String;
    case Op::IndexOf:
      require(args[0] == Sort::String && args[1] == Sort::String &&
                  args[2] == Sort::Int,
              op, "expects (String String Int)");
      return Sort::Int;
    case Op::Replace:
      require(all_of_sort(args, Sort::String), op, "expects String arguments");
      return Sort::String;
    case Op::Contains:
    case Op::PrefixOf:
      require(all_of_sort(args, Sort::String), op, "expects String arguments");
      return Sort::Bool;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
      require(all_of_sort(args, Sort::Int), op, "expects Int arguments");
      return Sort::Int;
    case Op::Ite:
      require(args[0] == Sort::Bool, op, "condition must be Bool");
      require(args[1] == args[2], op, "branches must have the same sort");
      return args[1];
    case Op::Eq:
      require(args[0] == args[1], op, "operands must have the same sort");
      return Sort::Bool;
    case Op::Le:
    case Op::Lt:
    case Op::Ge:
    case Op::Gt:
      require(all_of_sort(args, Sort::Int), op, "expects Int arguments");
      return Sort::Bool;
    case Op::Not:
    case Op::And:
    case Op::Or:
      require(all_of_sort(args, Sort::Bool), op, "expects Bool arguments");
      return Sort::Bool;
  }
  return Sort::Bool;
}

// ---------------------------------------------------------------------------

Term Term::literal(Value v) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Literal;
  n->sort = v.sort();
  n->hash = mix(1, v.hash());
  n->value = std::move(v);
  return Term(std::move(n));
}

Term Term::var(std::string name, Sort sort) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Var;
  n->sort = sort;
  n->hash = mix(mix(2, std::hash<std::string>{}(name)),
                static_cast<std::size_t>(sort));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::hole(Sort sort) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Hole;
  n->sort = sort;
  n->holes = 1;
  n->hash = mix(3, static_cast<std::size_t>(sort));
  return Term(std::move(n));
}

namespace {

void finish_interior(detail::Node& n, std::size_t seed) {
  n.hash = seed;
  n.size = 1;
  n.holes = 0;
  for (const Term& a : n.args) {
    n.hash = mix(n.hash, a.hash());
    n.size += a.size();
    n.holes += a.hole_count();
  }
}

}  // namespace

Term Term::app(Op op, std::vector<Term> args) {
  std::vector<Sort> sorts;
  sorts.reserve(args.size());
  for (const Term& a : args) sorts.push_back(a.sort());
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::App;
  n->op = op;
  n->sort = result_sort(op, sorts);
  n->args = std::move(args);
  finish_interior(*n, mix(4, static_cast<std::size_t>(op)));
  return Term(std::move(n));
}

Term Term::call(std::string name, Sort sort, std::vector<Term> args) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Call;
  n->sort = sort;
  n->args = std::move(args);
  finish_interior(*n, mix(5, std::hash<std::string>{}(name)));
  n->name = std::move(name);
  return Term(std::move(n));
}

Kind Term::kind() const { return node_->kind; }
Sort Term::sort() const { return node_->sort; }
Op Term::op() const { return node_->op; }
const std::string& Term::name() const { return node_->name; }
const Value& Term::value() const { return node_->value; }
std::span<const Term> Term::args() const { return node_->args; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hole_count() const { return node_->holes; }
std::size_t Term::hash() const { return node_->hash; }

Term Term::with_args(std::vector<Term> args) const {
  switch (kind()) {
    case Kind::App:
      return app(op(), std::move(args));
    case Kind::Call:
      return call(name(), sort(), std::move(args));
    default:
      return *this;
  }
}

std::string Term::to_string() const {
  std::ostringstream os;
  print(os, *this);
  return os.str();
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const detail::Node& x = *a.node_;
  const detail::Node& y = *b.node_;
  if (x.hash != y.hash || x.size != y.size || x.kind != y.kind ||
      x.sort != y.sort) {
    return false;
  }
  switch (x.kind) {
    case Kind::Literal:
      return x.value == y.value;
    case Kind::Var:
      return x.name == y.name;
    case Kind::Hole:
      return true;
    case Kind::App:
      if (x.op != y.op) return false;
      break;
    case Kind::Call:
      if (x.name != y.name) return false;
      break;
  }
  return x.args == y.args;
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  print(os, t);
  return os;
}

// ---------------------------------------------------------------------------

namespace {

void flatten_into(const Term& t, Op op, std::vector<Term>& out) {
  if (t.kind() == Kind::App && t.op() == op) {
    for (const Term& a : t.args()) flatten_into(a, op, out);
  } else {
    out.push_back(t);
  }
}

}  // namespace

Term normalize(const Term& t) {
  if (t.kind() != Kind::App && t.kind() != Kind::Call) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(normalize(a));
  if (t.kind() == Kind::App && is_associative(t.op())) {
    std::vector<Term> flat;
    for (const Term& a : args) flatten_into(a, t.op(), flat);
    Term acc = flat.back();
    for (std::size_t i = flat.size() - 1; i-- > 0;) {
      acc = Term::app(t.op(), {flat[i], acc});
    }
    return acc;
  }
  return t.with_args(std::move(args));
}

Term apply_context(const Term& context, const Term& filler) {
  if (context.hole_count() != 1) {
    throw HoleCountError("context must contain exactly one hole, found " +
                         std::to_string(context.hole_count()));
  }
  return replace_at(context, hole_path(context), filler);
}

Term apply_context_n(const Term& context, const Term& base,
                     std::size_t times) {
  Term acc = base;
  for (std::size_t i = 0; i < times; ++i) acc = apply_context(context, acc);
  return acc;
}

const Term& subterm_at(const Term& t, std::span<const std::uint32_t> path) {
  const Term* cur = &t;
  for (std::uint32_t i : path) {
    if (i >= cur->args().size()) throw Error("subterm_at: invalid path");
    cur = &cur->arg(i);
  }
  return *cur;
}

Term replace_at(const Term& t, std::span<const std::uint32_t> path,
                const Term& replacement) {
  if (path.empty()) return replacement;
  if (path[0] >= t.args().size()) throw Error("replace_at: invalid path");
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[path[0]] = replace_at(args[path[0]], path.subspan(1), replacement);
  return t.with_args(std::move(args));
}

std::vector<Path> positions(const Term& t) {
  std::vector<Path> out;
  Path cur;
  std::function<void(const Term&)> walk = [&](const Term& n) {
    out.push_back(cur);
    for (std::uint32_t i = 0; i < n.args().size(); ++i) {
      cur.push_back(i);
      walk(n.arg(i));
      cur.pop_back();
    }
  };
  walk(t);
  return out;
}

Path hole_path(const Term& t) {
  if (t.hole_count() != 1) {
    throw HoleCountError("expected exactly one hole, found " +
                         std::to_string(t.hole_count()));
  }
  Path path;
  const Term* cur = &t;
  while (!cur->is_hole()) {
    for (std::uint32_t i = 0; i < cur->args().size(); ++i) {
      if (cur->arg(i).hole_count() == 1) {
        path.push_back(i);
        cur = &cur->arg(i);
        break;
      }
    }
  }
  return path;
}

std::vector<std::string> free_vars(const Term& t) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::function<void(const Term&)> walk = [&](const Term& n) {
    if (n.kind() == Kind::Var && seen.insert(n.name()).second) {
      out.push_back(n.name());
    }
    for (const Term& a : n.args()) walk(a);
  };
  walk(t);
  return out;
}

Term substitute_var(const Term& t, std::string_view name,
                    const Term& replacement) {
  if (t.kind() == Kind::Var) return t.name() == name ? replacement : t;
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) {
    args.push_back(substitute_var(a, name, replacement));
  }
  return t.with_args(std::move(args));
}

}  // namespace loopsynth
