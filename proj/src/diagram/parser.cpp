#include <algorithm>
#include <cctype>
#include <initializer_list>

#include "rvsc/diagram.hpp"
#include "rvsc/text.hpp"

namespace rvsc::diagram {

bool IfBlock::operator==(const IfBlock &o) const {
  return condition == o.condition && then_label == o.then_label && then_body == o.then_body &&
         else_label == o.else_label && else_body == o.else_body;
}

bool ForkBlock::operator==(const ForkBlock &o) const { return branches == o.branches; }

bool RepeatBlock::operator==(const RepeatBlock &o) const {
  return body == o.body && while_condition == o.while_condition && loop_label == o.loop_label;
}

namespace {

enum class Kind {
  kStartUml,
  kEndUml,
  kStart,
  kStop,
  kActivity,
  kLane,
  kIf,
  kElse,
  kEndIf,
  kFork,
  kForkAgain,
  kEndFork,
  kRepeat,
  kRepeatWhile,
  kNote,
};

const char *KindName(Kind k) {
  switch (k) {
    case Kind::kStartUml: return "@startuml";
    case Kind::kEndUml: return "@enduml";
    case Kind::kStart: return "start";
    case Kind::kStop: return "stop";
    case Kind::kActivity: return "activity";
    case Kind::kLane: return "swimlane";
    case Kind::kIf: return "if";
    case Kind::kElse: return "else";
    case Kind::kEndIf: return "endif";
    case Kind::kFork: return "fork";
    case Kind::kForkAgain: return "fork again";
    case Kind::kEndFork: return "end fork";
    case Kind::kRepeat: return "repeat";
    case Kind::kRepeatWhile: return "repeat while";
    case Kind::kNote: return "note";
  }
  return "?";
}

struct Line {
  int number = 0;     // 1-based
  int indent = 0;     // leading whitespace width, for columns
  std::string raw;    // original line, used as error snippet
  std::string text;   // trimmed
  Kind kind = Kind::kActivity;
};

bool StartsWithWord(std::string_view s, std::string_view word) {
  if (s.substr(0, word.size()) != word) return false;
  return s.size() == word.size() || std::isspace(static_cast<unsigned char>(s[word.size()])) || s[word.size()] == '(';
}

// Cursor over one trimmed line for the parenthesised parts of if/else/repeat.
class LineScanner {
 public:
  explicit LineScanner(const Line &line) : line_(line), s_(line.text) {}

  void SkipSpace() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool Keyword(std::string_view word) {
    SkipSpace();
    if (s_.substr(pos_, word.size()) != word) return false;
    std::size_t end = pos_ + word.size();
    if (end < s_.size() && !std::isspace(static_cast<unsigned char>(s_[end])) && s_[end] != '(' && s_[end] != ':')
      return false;
    pos_ = end;
    return true;
  }

  void Expect(std::string_view word, const char *what) {
    if (!Keyword(word)) Fail(std::string("expected ") + what);
  }

  // Balanced "( ... )"; returns the inner text verbatim.
  std::string Parens(const char *what) {
    SkipSpace();
    if (pos_ >= s_.size() || s_[pos_] != '(') Fail(std::string("expected '(' to open ") + what);
    std::size_t open = pos_;
    int depth = 0;
    for (std::size_t i = pos_; i < s_.size(); ++i) {
      if (s_[i] == '(') ++depth;
      if (s_[i] == ')' && --depth == 0) {
        pos_ = i + 1;
        return std::string(s_.substr(open + 1, i - open - 1));
      }
    }
    pos_ = open;
    Fail(std::string("unbalanced parentheses in ") + what);
  }

  bool AtEnd() {
    SkipSpace();
    return pos_ >= s_.size();
  }

  void ExpectEnd() {
    if (!AtEnd()) Fail("unexpected trailing text '" + std::string(s_.substr(pos_)) + "'");
  }

  [[noreturn]] void Fail(const std::string &message) const {
    throw ParseError(line_.number, line_.indent + static_cast<int>(pos_) + 1, message, line_.raw);
  }

 private:
  const Line &line_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

[[noreturn]] void FailAt(const Line &line, const std::string &message) {
  throw ParseError(line.number, line.indent + 1, message, line.raw);
}

Kind Classify(const Line &line) {
  std::string_view t = line.text;
  if (t.rfind("@startuml", 0) == 0) return Kind::kStartUml;
  if (t == "@enduml") return Kind::kEndUml;
  if (t == "start") return Kind::kStart;
  if (t == "stop" || t == "end") return Kind::kStop;
  if (t.front() == ':') return Kind::kActivity;
  if (t.front() == '|') return Kind::kLane;
  if (StartsWithWord(t, "if")) return Kind::kIf;
  if (StartsWithWord(t, "else")) return Kind::kElse;
  if (t == "endif") return Kind::kEndIf;
  if (t == "fork") return Kind::kFork;
  if (t == "fork again") return Kind::kForkAgain;
  if (t == "end fork") return Kind::kEndFork;
  if (t == "repeat") return Kind::kRepeat;
  if (t.rfind("repeat while", 0) == 0) return Kind::kRepeatWhile;
  if (StartsWithWord(t, "note")) return Kind::kNote;
  if (t.rfind("->", 0) == 0 || t.rfind("-[", 0) == 0) FailAt(line, "arrows are not supported in activity diagrams");
  if (StartsWithWord(t, "elseif")) FailAt(line, "'elseif' is not supported; nest an if inside else");
  FailAt(line, "unknown directive '" + std::string(t) + "'");
}

class Parser {
 public:
  Parser(std::string_view text) {
    auto raw = split_lines(text);
    total_lines_ = std::max<int>(1, static_cast<int>(raw.size()));
    for (std::size_t i = 0; i < raw.size(); ++i) {
      std::string_view trimmed = trim(raw[i]);
      if (trimmed.empty() || trimmed.front() == '\'') continue;
      Line line;
      line.number = static_cast<int>(i) + 1;
      line.indent = static_cast<int>(raw[i].find_first_not_of(" \t"));
      line.raw = raw[i];
      line.text = std::string(trimmed);
      line.kind = Classify(line);
      lines_.push_back(std::move(line));
    }
  }

  DiagramAst Parse(std::string source_name) {
    if (lines_.empty()) throw ParseError(1, 1, "expected @startuml", "");
    if (lines_.front().kind != Kind::kStartUml) FailAt(lines_.front(), "expected @startuml");
    pos_ = 1;
    DiagramAst ast;
    ast.source_name = std::move(source_name);
    ast.elements = ParseBlock({Kind::kEndUml}, "@enduml");
    ++pos_;  // @enduml
    if (pos_ < lines_.size()) FailAt(lines_[pos_], "unexpected content after @enduml");
    return ast;
  }

 private:
  const Line &Peek(const char *expected) {
    if (pos_ >= lines_.size()) {
      std::string snippet = lines_.empty() ? "" : lines_.back().raw;
      throw ParseError(total_lines_, 1, std::string("unexpected end of input, expected '") + expected + "'", snippet);
    }
    return lines_[pos_];
  }

  // Parses elements up to (not including) one of `terminators`.
  Block ParseBlock(std::initializer_list<Kind> terminators, const char *expected) {
    Block block;
    for (;;) {
      const Line &line = Peek(expected);
      if (std::find(terminators.begin(), terminators.end(), line.kind) != terminators.end()) return block;
      switch (line.kind) {
        case Kind::kStart:
          block.push_back({StartMarker{}});
          ++pos_;
          break;
        case Kind::kStop:
          block.push_back({StopMarker{}});
          ++pos_;
          break;
        case Kind::kActivity:
          block.push_back({ParseActivity(line)});
          ++pos_;
          break;
        case Kind::kLane:
          block.push_back({ParseLane(line)});
          ++pos_;
          break;
        case Kind::kNote:
          block.push_back({ParseNote(line, block)});
          ++pos_;
          break;
        case Kind::kIf:
          block.push_back({ParseIf()});
          break;
        case Kind::kFork:
          block.push_back({ParseFork()});
          break;
        case Kind::kRepeat:
          block.push_back({ParseRepeat()});
          break;
        default:
          FailAt(line, std::string("expected '") + expected + "' before '" + KindName(line.kind) + "'");
      }
    }
  }

  static Activity ParseActivity(const Line &line) {
    const std::string &t = line.text;
    if (t.size() < 2 || t.back() != ';') FailAt(line, "activity must be closed with ';' on the same line");
    std::string label = t.substr(1, t.size() - 2);
    if (trim(label).empty()) FailAt(line, "empty activity label");
    return Activity{std::move(label)};
  }

  static LaneSwitch ParseLane(const Line &line) {
    const std::string &t = line.text;
    if (t.size() < 3 || t.back() != '|') FailAt(line, "swimlane must have the form |Lane|");
    std::string lane = t.substr(1, t.size() - 2);
    if (lane.find('|') != std::string::npos) FailAt(line, "swimlane colors and aliases are not supported");
    if (trim(lane).empty()) FailAt(line, "empty swimlane name");
    return LaneSwitch{std::move(lane)};
  }

  static Note ParseNote(const Line &line, const Block &block) {
    LineScanner scan(line);
    scan.Expect("note", "'note'");
    Note note;
    if (scan.Keyword("right")) {
      note.side = NoteSide::kRight;
    } else if (scan.Keyword("left")) {
      note.side = NoteSide::kLeft;
    } else {
      scan.Fail("expected 'left' or 'right' after 'note'");
    }
    auto colon = line.text.find(':');
    if (colon == std::string::npos) FailAt(line, "expected ':' in single-line note (multi-line notes are not supported)");
    std::string between = line.text.substr(0, colon);
    if (trim(between) != "note right" && trim(between) != "note left")
      FailAt(line, "expected 'note left: text' or 'note right: text'");
    note.text = std::string(trim(std::string_view(line.text).substr(colon + 1)));
    auto prev = std::find_if(block.rbegin(), block.rend(),
                             [](const Element &e) { return !std::holds_alternative<Note>(e.node); });
    if (prev == block.rend() || !std::holds_alternative<Activity>(prev->node))
      FailAt(line, "note must directly follow an activity");
    return note;
  }

  IfBlock ParseIf() {
    const Line &head = lines_[pos_];
    LineScanner scan(head);
    scan.Expect("if", "'if'");
    IfBlock block;
    block.condition = scan.Parens("if condition");
    if (trim(block.condition).empty()) scan.Fail("empty if condition");
    scan.Expect("then", "'then (label)'");
    block.then_label = scan.Parens("then label");
    scan.ExpectEnd();
    ++pos_;
    block.then_body = ParseBlock({Kind::kElse, Kind::kEndIf}, "endif");
    if (lines_[pos_].kind == Kind::kElse) {
      const Line &else_line = lines_[pos_];
      LineScanner es(else_line);
      es.Expect("else", "'else'");
      if (!es.AtEnd()) block.else_label = es.Parens("else label");
      es.ExpectEnd();
      ++pos_;
      block.else_body = ParseBlock({Kind::kEndIf}, "endif");
    }
    ++pos_;  // endif
    return block;
  }

  ForkBlock ParseFork() {
    ++pos_;
    ForkBlock block;
    block.branches.push_back(ParseBlock({Kind::kForkAgain, Kind::kEndFork}, "end fork"));
    while (lines_[pos_].kind == Kind::kForkAgain) {
      ++pos_;
      block.branches.push_back(ParseBlock({Kind::kForkAgain, Kind::kEndFork}, "end fork"));
    }
    if (block.branches.size() < 2) FailAt(lines_[pos_], "fork needs at least two branches ('fork again')");
    ++pos_;  // end fork
    return block;
  }

  RepeatBlock ParseRepeat() {
    ++pos_;
    RepeatBlock block;
    block.body = ParseBlock({Kind::kRepeatWhile}, "repeat while");
    const Line &tail = lines_[pos_];
    LineScanner scan(tail);
    scan.Expect("repeat", "'repeat while'");
    scan.Expect("while", "'repeat while'");
    block.while_condition = scan.Parens("repeat condition");
    if (trim(block.while_condition).empty()) scan.Fail("empty repeat condition");
    if (!scan.AtEnd()) {
      scan.Expect("is", "'is (label)'");
      block.loop_label = scan.Parens("loop label");
    }
    scan.ExpectEnd();
    ++pos_;
    return block;
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  int total_lines_ = 1;
};

}  // namespace

DiagramAst parse_activity_diagram(std::string_view text, std::string source_name) {
  return Parser(text).Parse(std::move(source_name));
}

}  // namespace rvsc::diagram
