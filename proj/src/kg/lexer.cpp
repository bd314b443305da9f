#include "lexer.hpp"

#include <cctype>
#include <charconv>

#include "rvsc/text.hpp"

namespace rvsc::kg::detail {

namespace {

bool IdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool IdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool Digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::string LineOf(std::string_view source, int line) {
  auto lines = split_lines(source);
  if (line >= 1 && static_cast<std::size_t>(line) <= lines.size()) return lines[line - 1];
  return {};
}

}  // namespace

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  return true;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  auto fail = [&](std::size_t at, const std::string &msg) {
    throw ParseError(line, static_cast<int>(at - line_start) + 1, msg, LineOf(text, line));
  };
  while (i < text.size()) {
    char c = text[i];
    int col = static_cast<int>(i - line_start) + 1;
    if (c == '\n') {
      out.push_back({Tok::kNewline, "\n", line, col});
      ++line;
      line_start = ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (IdentStart(c)) {
      std::size_t b = i;
      while (i < text.size() && IdentChar(text[i])) ++i;
      out.push_back({Tok::kIdent, std::string(text.substr(b, i - b)), line, col});
      continue;
    }
    if (c == '`') {
      std::string name;
      ++i;
      for (;;) {
        if (i >= text.size() || text[i] == '\n') fail(i, "unterminated quoted name");
        if (text[i] == '`') {
          if (i + 1 < text.size() && text[i + 1] == '`') {
            name += '`';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        name += text[i++];
      }
      if (name.empty()) fail(i - 1, "empty quoted name");
      Token t{Tok::kIdent, name, line, col};
      t.quoted = true;
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      std::string s;
      ++i;
      for (;;) {
        if (i >= text.size() || text[i] == '\n') fail(i, "unterminated string literal");
        char d = text[i];
        if (d == quote) {
          ++i;
          break;
        }
        if (d == '\\') {
          if (i + 1 >= text.size()) fail(i, "unterminated string literal");
          char e = text[i + 1];
          switch (e) {
            case 'n': s += '\n'; break;
            case 't': s += '\t'; break;
            case '\\': case '"': case '\'': s += e; break;
            default: fail(i, std::string("unknown escape '\\") + e + "'");
          }
          i += 2;
          continue;
        }
        s += d;
        ++i;
      }
      out.push_back({Tok::kString, std::move(s), line, col});
      continue;
    }
    if (Digit(c)) {
      std::size_t b = i;
      bool is_float = false;
      while (i < text.size() && Digit(text[i])) ++i;
      if (i + 1 < text.size() && text[i] == '.' && Digit(text[i + 1])) {
        is_float = true;
        ++i;
        while (i < text.size() && Digit(text[i])) ++i;
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t e = i + 1;
        if (e < text.size() && (text[e] == '+' || text[e] == '-')) ++e;
        if (e < text.size() && Digit(text[e])) {
          is_float = true;
          i = e;
          while (i < text.size() && Digit(text[i])) ++i;
        }
      }
      if (i < text.size() && IdentStart(text[i])) fail(i, "malformed number");
      out.push_back({is_float ? Tok::kFloat : Tok::kInteger, std::string(text.substr(b, i - b)), line, col});
      continue;
    }
    static const char *kTwo[] = {"<>", "<=", ">=", "!=", ".."};
    bool matched = false;
    for (const char *p : kTwo) {
      if (text.substr(i, 2) == p) {
        out.push_back({Tok::kPunct, std::string(p) == "!=" ? "<>" : p, line, col});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("()[]{}:,;.-<>*=|").find(c) != std::string_view::npos) {
      out.push_back({Tok::kPunct, std::string(1, c), line, col});
      ++i;
      continue;
    }
    fail(i, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::kEnd, "", line, static_cast<int>(i - line_start) + 1});
  return out;
}

Cursor::Cursor(std::string_view source, std::vector<Token> tokens, bool skip_newlines)
    : source_(source), tokens_(std::move(tokens)), skip_newlines_(skip_newlines) {
  if (skip_newlines_) std::erase_if(tokens_, [](const Token &t) { return t.kind == Tok::kNewline; });
}

const Token &Cursor::peek(std::size_t ahead) const {
  std::size_t at = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[at];
}

Token Cursor::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool Cursor::is_punct(std::string_view p, std::size_t ahead) const {
  const Token &t = peek(ahead);
  return t.kind == Tok::kPunct && t.text == p;
}

bool Cursor::is_keyword(std::string_view kw, std::size_t ahead) const {
  const Token &t = peek(ahead);
  return t.kind == Tok::kIdent && !t.quoted && iequals(t.text, kw);
}

bool Cursor::accept_punct(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

bool Cursor::accept_keyword(std::string_view kw) {
  if (!is_keyword(kw)) return false;
  next();
  return true;
}

Token Cursor::expect_punct(std::string_view p) {
  if (!is_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
  return next();
}

Token Cursor::expect_ident(std::string_view what) {
  if (peek().kind != Tok::kIdent) fail(peek(), "expected " + std::string(what));
  return next();
}

void Cursor::expect_keyword(std::string_view kw) {
  if (!is_keyword(kw)) fail(peek(), "expected " + std::string(kw));
  next();
}

void Cursor::skip_newlines() {
  while (peek().kind == Tok::kNewline) next();
}

void Cursor::fail(const Token &at, const std::string &message) const {
  std::string where = at.kind == Tok::kEnd ? message + " (at end of input)" : message;
  throw ParseError(at.line, at.column, where, LineOf(source_, at.line));
}

Value Cursor::literal() {
  Token t = peek();
  bool negative = false;
  if (t.kind == Tok::kPunct && t.text == "-") {
    next();
    negative = true;
    t = peek();
    if (t.kind != Tok::kInteger && t.kind != Tok::kFloat) fail(t, "malformed literal");
  }
  switch (t.kind) {
    case Tok::kString:
      next();
      return t.text;
    case Tok::kInteger: {
      next();
      std::string digits = (negative ? "-" : "") + t.text;
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || p != digits.data() + digits.size()) fail(t, "integer literal out of range");
      return v;
    }
    case Tok::kFloat: {
      next();
      std::string digits = (negative ? "-" : "") + t.text;
      double v = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || p != digits.data() + digits.size()) fail(t, "float literal out of range");
      return v;
    }
    case Tok::kIdent:
      if (!t.quoted && iequals(t.text, "true")) {
        next();
        return true;
      }
      if (!t.quoted && iequals(t.text, "false")) {
        next();
        return false;
      }
      if (!t.quoted && iequals(t.text, "null")) fail(t, "null literals are not supported");
      fail(t, "malformed literal");
    default:
      fail(t, "malformed literal");
  }
}

Properties Cursor::property_map() {
  Properties props;
  expect_punct("{");
  if (accept_punct("}")) return props;
  for (;;) {
    Token key = expect_ident("property name");
    expect_punct(":");
    Value v = literal();
    if (!props.emplace(key.text, std::move(v)).second) fail(key, "duplicate property '" + key.text + "'");
    if (accept_punct("}")) break;
    expect_punct(",");
  }
  return props;
}

}  // namespace rvsc::kg::detail
