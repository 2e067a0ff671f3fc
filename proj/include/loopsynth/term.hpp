#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace loopsynth {

enum class Sort : std::uint8_t { String, Int, Bool };

std::string_view sort_name(Sort sort);
std::optional<Sort> parse_sort(std::string_view name);

/// A literal of the strings + linear integer arithmetic theory.
class Value {
 public:
  static Value string(std::string s) { return Value(Rep(std::move(s))); }
  static Value integer(std::int64_t i) { return Value(Rep(i)); }
  static Value boolean(bool b) { return Value(Rep(b)); }

  Sort sort() const { return static_cast<Sort>(rep_.index()); }
  bool is_string() const { return rep_.index() == 0; }
  bool is_int() const { return rep_.index() == 1; }
  bool is_bool() const { return rep_.index() == 2; }

  const std::string& as_string() const { return std::get<std::string>(rep_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(rep_); }
  bool as_bool() const { return std::get<bool>(rep_); }

  std::size_t hash() const;
  /// SMT-LIB 2.6 rendering: `"a""b"`, `(- 3)`, `true`.
  std::string to_smtlib() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend bool operator<(const Value& a, const Value& b) {
    return a.rep_ < b.rep_;
  }

 private:
  using Rep = std::variant<std::string, std::int64_t, bool>;
  explicit Value(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

std::ostream& operator<<(std::ostream& os, const Value& v);

/// SMT-LIB string literal with `""` escaping of embedded quotes.
std::string quote_string(std::string_view s);

/// The supported operator table.
enum class Op : std::uint8_t {
  Concat,
  Len,
  At,
  Substr,
  IndexOf,
  Replace,
  Contains,
  PrefixOf,
  Add,
  Sub,
  Mul,
  Ite,
  Eq,
  Le,
  Lt,
  Ge,
  Gt,
  Not,
  And,
  Or,
};

inline constexpr std::size_t kOpCount = static_cast<std::size_t>(Op::Or) + 1;

std::string_view op_symbol(Op op);
std::optional<Op> lookup_op(std::string_view symbol);
/// str.++, +, and, or: flattened and right-associated by normalize().
bool is_associative(Op op);
/// Result sort of `op` applied to arguments of the given sorts; throws
/// SortError on arity or sort mismatch.
Sort result_sort(Op op, std::span<const Sort> args);

enum class Kind : std::uint8_t { Literal, Var, App, Call, Hole };

class Term;
using Path = std::vector<std::uint32_t>;

namespace detail {
struct Node;
}

/// Immutable, structurally shared AST node handle.
///
/// `App` nodes apply a builtin operator from the table; `Call` nodes apply a
/// user-defined function (resolved against Defs at evaluation time). A `Hole`
/// is the single placeholder of a one-hole context or skeleton and carries
/// the sort of the subterm it stands for.
class Term {
 public:
  static Term literal(Value v);
  static Term string(std::string s) { return literal(Value::string(std::move(s))); }
  static Term integer(std::int64_t i) { return literal(Value::integer(i)); }
  static Term boolean(bool b) { return literal(Value::boolean(b)); }
  static Term var(std::string name, Sort sort);
  static Term hole(Sort sort);
  /// Builtin application; sort is inferred and checked.
  static Term app(Op op, std::vector<Term> args);
  /// Application of a defined function with the given return sort.
  static Term call(std::string name, Sort sort, std::vector<Term> args);

  Kind kind() const;
  Sort sort() const;
  /// Builtin operator; only meaningful for Kind::App.
  Op op() const;
  /// Variable or called-function name.
  const std::string& name() const;
  const Value& value() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const { return args()[i]; }

  /// Number of nodes (Literal, Var, App, Call and Hole each count 1).
  std::size_t size() const;
  std::size_t hole_count() const;
  std::size_t hash() const;

  bool is_hole() const { return kind() == Kind::Hole; }

  /// Same node kind/op/name with new children.
  Term with_args(std::vector<Term> args) const;

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  explicit Term(std::shared_ptr<const detail::Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;
};

std::ostream& operator<<(std::ostream& os, const Term& t);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

inline std::size_t ast_size(const Term& t) { return t.size(); }

/// Canonical form: associative operators flattened and re-associated to the
/// right. No commutative reordering, no constant folding. Idempotent.
Term normalize(const Term& t);

/// Replace the unique Hole of `context` with `filler`. Throws HoleCountError
/// unless `context` has exactly one Hole.
Term apply_context(const Term& context, const Term& filler);

/// `context` applied `times` times around `base`; times == 0 yields base.
Term apply_context_n(const Term& context, const Term& base, std::size_t times);

const Term& subterm_at(const Term& t, std::span<const std::uint32_t> path);
Term replace_at(const Term& t, std::span<const std::uint32_t> path,
                const Term& replacement);

/// Preorder list of every node position.
std::vector<Path> positions(const Term& t);

/// Path to the unique Hole; throws HoleCountError otherwise.
Path hole_path(const Term& t);

/// Free variable names in first-occurrence preorder.
std::vector<std::string> free_vars(const Term& t);

/// Replace every Var named `name` with `replacement`.
Term substitute_var(const Term& t, std::string_view name,
                    const Term& replacement);

/// Printed form used for Hole nodes.
inline constexpr std::string_view kHoleSymbol = "?hole";

}  // namespace loopsynth
