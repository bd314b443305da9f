#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rvsc/graph.hpp"

namespace rvsc::kg::detail {

enum class Tok { kIdent, kString, kInteger, kFloat, kPunct, kNewline, kEnd };

struct Token {
  Tok kind;
  std::string text;  // identifier / punctuation / decoded string / number spelling
  int line;
  int column;
  bool quoted = false;  // backtick name: never a keyword
};

// Shared tokenizer for graph scripts and queries. Identifiers include
// backtick-quoted names; "//" comments are dropped; newlines are kept as
// tokens so the script reader can split statements.
std::vector<Token> tokenize(std::string_view text);

class Cursor {
 public:
  Cursor(std::string_view source, std::vector<Token> tokens, bool skip_newlines);

  const Token &peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Tok::kEnd; }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const;
  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const;
  bool accept_punct(std::string_view p);
  bool accept_keyword(std::string_view kw);
  Token expect_punct(std::string_view p);
  Token expect_ident(std::string_view what);
  void expect_keyword(std::string_view kw);
  void skip_newlines();

  [[noreturn]] void fail(const Token &at, const std::string &message) const;

  Value literal();
  Properties property_map();

 private:
  std::string_view source_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  bool skip_newlines_;
};

bool iequals(std::string_view a, std::string_view b);

}  // namespace rvsc::kg::detail
