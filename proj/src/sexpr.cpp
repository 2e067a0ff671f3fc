#include "loopsynth/sexpr.hpp"

#include <cctype>

#include "loopsynth/errors.hpp"
#include "loopsynth/term.hpp"

namespace loopsynth {

namespace {

bool is_symbol_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '~': case '!': case '@': case '$': case '%': case '^': case '&':
    case '*': case '_': case '-': case '+': case '=': case '<': case '>':
    case '.': case '?': case '/':
      return true;
    default:
      return false;
  }
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (!eof()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

  void skip_space() {
    while (!eof()) {
      char c = peek();
      if (c == ';') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.column = col_;
    char c = peek();
    if (c == '(') {
      advance();
      e.kind = SExpr::Kind::List;
      skip_space();
      while (true) {
        if (eof()) throw ParseError("unterminated list", e.line, e.column);
        if (peek() == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
        skip_space();
      }
      return e;
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '"') {
      advance();
      e.kind = SExpr::Kind::String;
      while (true) {
        if (eof()) throw ParseError("unterminated string literal", e.line, e.column);
        char ch = advance();
        if (ch == '"') {
          if (!eof() && peek() == '"') {
            advance();
            e.text.push_back('"');
            continue;
          }
          break;
        }
        e.text.push_back(ch);
      }
      return e;
    }
    if (c == '|') {
      advance();
      e.kind = SExpr::Kind::Symbol;
      while (true) {
        if (eof()) throw ParseError("unterminated quoted symbol", e.line, e.column);
        char ch = advance();
        if (ch == '|') break;
        e.text.push_back(ch);
      }
      return e;
    }
    if (c == ':') {
      advance();
      e.kind = SExpr::Kind::Keyword;
      while (!eof() && is_symbol_char(peek())) e.text.push_back(advance());
      if (e.text.empty()) fail("empty keyword");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      e.kind = SExpr::Kind::Numeral;
      while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
        e.text.push_back(advance());
      }
      if (!eof() && is_symbol_char(peek())) fail("malformed numeral");
      if (e.text.size() > 1 && e.text[0] == '0') fail("numeral with leading zero");
      return e;
    }
    if (is_symbol_char(c)) {
      e.kind = SExpr::Kind::Symbol;
      while (!eof() && is_symbol_char(peek())) e.text.push_back(advance());
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
  return Reader(text).read_all();
}

std::string SExpr::to_string() const {
  switch (kind) {
    case Kind::Symbol:
    case Kind::Numeral:
      return text;
    case Kind::Keyword:
      return ":" + text;
    case Kind::String:
      return quote_string(text);
    case Kind::List: {
      std::string out = "(";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out.push_back(' ');
        out += items[i].to_string();
      }
      out.push_back(')');
      return out;
    }
  }
  return {};
}

}  // namespace loopsynth
