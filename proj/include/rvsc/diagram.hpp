#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rvsc/parse_error.hpp"

namespace rvsc::diagram {

// Syntax tree for the PlantUML activity-diagram subset:
//   start | stop | end | :label; | |Lane| | if/else/endif | fork/fork again/end fork
//   | repeat/repeat while (cond) is (label) | note left|right: text
// Labels are kept verbatim.

struct Element;
using Block = std::vector<Element>;

struct LaneSwitch {
  std::string lane;
  bool operator==(const LaneSwitch &) const = default;
};

struct Activity {
  std::string label;
  bool operator==(const Activity &) const = default;
};

struct StartMarker {
  bool operator==(const StartMarker &) const = default;
};

struct StopMarker {
  bool operator==(const StopMarker &) const = default;
};

struct IfBlock {
  std::string condition;
  std::string then_label;
  Block then_body;
  std::optional<std::string> else_label;
  // Present iff an `else` line was written (possibly with an empty body).
  std::optional<Block> else_body;
  bool operator==(const IfBlock &) const;
};

struct ForkBlock {
  std::vector<Block> branches;
  bool operator==(const ForkBlock &) const;
};

// `repeat ... repeat while (cond) is (label)`; `label` guards the edge that
// loops back to the body head.
struct RepeatBlock {
  Block body;
  std::string while_condition;
  std::optional<std::string> loop_label;
  bool operator==(const RepeatBlock &) const;
};

enum class NoteSide { kLeft, kRight };

// Attached to the activity immediately preceding it.
struct Note {
  NoteSide side = NoteSide::kRight;
  std::string text;
  bool operator==(const Note &) const = default;
};

struct Element {
  std::variant<LaneSwitch, Activity, StartMarker, StopMarker, IfBlock, ForkBlock, RepeatBlock, Note> node;
  bool operator==(const Element &) const = default;
};

struct DiagramAst {
  std::string source_name;
  Block elements;

  // Structural equality ignores source_name.
  bool operator==(const DiagramAst &other) const { return elements == other.elements; }
};

// Throws ParseError for anything outside the subset, unterminated blocks and
// missing @startuml/@enduml. Never returns a partial tree.
DiagramAst parse_activity_diagram(std::string_view text, std::string source_name = "<input>");

// Canonical form: LF endings, one construct per line, two-space indentation per
// nesting level, exactly one trailing newline.
std::string serialize_ast(const DiagramAst &ast);

}  // namespace rvsc::diagram
