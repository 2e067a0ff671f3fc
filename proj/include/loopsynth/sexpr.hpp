#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace loopsynth {

/// Raw s-expression as read from SMT-LIB / SyGuS text.
struct SExpr {
  enum class Kind { Symbol, Numeral, String, Keyword, List };

  Kind kind = Kind::List;
  std::string text;  // symbol/keyword name, numeral digits, or unescaped string
  std::vector<SExpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_list() const { return kind == Kind::List; }
  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(std::string_view s) const {
    return kind == Kind::Symbol && text == s;
  }
  /// Head symbol of a non-empty list whose first element is a symbol.
  bool has_head(std::string_view s) const {
    return is_list() && !items.empty() && items[0].is_symbol(s);
  }

  std::string to_string() const;
};

/// Read every top-level s-expression. `;` starts a line comment, string
/// literals use `""` to embed a quote, `|...|` quotes symbols. Throws
/// ParseError with the offending line and column.
std::vector<SExpr> read_sexprs(std::string_view text);

}  // namespace loopsynth
