#pragma once

#include <stdexcept>
#include <string>

namespace rvsc {

// Raised by every text front end (diagrams, rule DSL, graph scripts, queries).
// line and column are 1-based and always point into the input text.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string message, std::string snippet);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string &message() const noexcept { return message_; }
  const std::string &snippet() const noexcept { return snippet_; }

  // "line L, column C: message" followed by the offending line.
  std::string Describe() const;

 private:
  int line_;
  int column_;
  std::string message_;
  std::string snippet_;
};

}  // namespace rvsc
