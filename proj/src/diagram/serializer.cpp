#include "rvsc/diagram.hpp"

namespace rvsc::diagram {

namespace {

class Writer {
 public:
  void EmitBlock(const diagram::Block &block, int depth) {
    for (const auto &e : block) Emit(e, depth);
  }

  std::string Take() { return std::move(out_); }

  void Line(int depth, std::string_view text) {
    out_.append(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

 private:
  void Emit(const Element &e, int depth) {
    std::visit([&](const auto &n) { EmitNode(n, depth); }, e.node);
  }

  void EmitNode(const LaneSwitch &n, int depth) { Line(depth, "|" + n.lane + "|"); }
  void EmitNode(const Activity &n, int depth) { Line(depth, ":" + n.label + ";"); }
  void EmitNode(const StartMarker &, int depth) { Line(depth, "start"); }
  void EmitNode(const StopMarker &, int depth) { Line(depth, "stop"); }

  void EmitNode(const Note &n, int depth) {
    Line(depth, std::string(n.side == NoteSide::kLeft ? "note left: " : "note right: ") + n.text);
  }

  void EmitNode(const IfBlock &n, int depth) {
    Line(depth, "if (" + n.condition + ") then (" + n.then_label + ")");
    EmitBlock(n.then_body, depth + 1);
    if (n.else_body) {
      Line(depth, n.else_label ? "else (" + *n.else_label + ")" : std::string("else"));
      EmitBlock(*n.else_body, depth + 1);
    }
    Line(depth, "endif");
  }

  void EmitNode(const ForkBlock &n, int depth) {
    for (std::size_t i = 0; i < n.branches.size(); ++i) {
      Line(depth, i == 0 ? "fork" : "fork again");
      EmitBlock(n.branches[i], depth + 1);
    }
    Line(depth, "end fork");
  }

  void EmitNode(const RepeatBlock &n, int depth) {
    Line(depth, "repeat");
    EmitBlock(n.body, depth + 1);
    std::string tail = "repeat while (" + n.while_condition + ")";
    if (n.loop_label) tail += " is (" + *n.loop_label + ")";
    Line(depth, tail);
  }

  std::string out_;
};

}  // namespace

std::string serialize_ast(const DiagramAst &ast) {
  Writer w;
  w.Line(0, "@startuml");
  w.EmitBlock(ast.elements, 0);
  w.Line(0, "@enduml");
  return w.Take();
}

}  // namespace rvsc::diagram
