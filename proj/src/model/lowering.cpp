#include <algorithm>
#include <cctype>

#include "rvsc/process_model.hpp"
#include "rvsc/text.hpp"

namespace rvsc::model {

namespace {

// Guard for the branch opposite to `guard`.
std::string Complement(std::string_view guard) {
  std::string key = normalize_label(guard);
  if (key == "yes") return "no";
  if (key == "no") return "yes";
  if (key == "true") return "false";
  if (key == "false") return "true";
  return "else";
}

bool HasProducesPrefix(std::string_view text, std::string_view &rest) {
  constexpr std::string_view kPrefix = "produces:";
  if (text.size() < kPrefix.size()) return false;
  for (std::size_t i = 0; i < kPrefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) != kPrefix[i]) return false;
  }
  rest = trim(text.substr(kPrefix.size()));
  return true;
}

class Lowerer {
 public:
  ProcessModel Run(const diagram::DiagramAst &ast) {
    auto tail = LowerBlock(ast.elements, {});
    if (!has_start_) throw ModelError("diagram has no start");
    if (!tail.empty()) throw ModelError("control falls off the end of the diagram without stop");
    validate_model(model_);
    return std::move(model_);
  }

 private:
  struct Pending {
    std::size_t node;
    std::optional<std::string> guard;
  };
  using Frontier = std::vector<Pending>;

  std::size_t NewNode(NodeKind kind, std::string label = {}) {
    if (kind == NodeKind::kStart) {
      if (has_start_) throw ModelError("diagram has more than one start");
      has_start_ = true;
    } else if (!has_start_) {
      throw ModelError("diagram element appears before start");
    }
    Node node;
    node.id = "n" + std::to_string(model_.nodes.size() + 1);
    node.kind = kind;
    node.label = std::move(label);
    node.lane = lane_;
    model_.nodes.push_back(std::move(node));
    return model_.nodes.size() - 1;
  }

  void Connect(const Frontier &from, std::size_t to) {
    for (const auto &p : from) model_.edges.push_back(Edge{model_.nodes[p.node].id, model_.nodes[to].id, p.guard});
  }

  Frontier LowerBlock(const diagram::Block &block, Frontier preds) {
    for (const auto &element : block) {
      preds = std::visit([&](const auto &n) { return Lower(n, std::move(preds)); }, element.node);
    }
    return preds;
  }

  Frontier Lower(const diagram::LaneSwitch &n, Frontier preds) {
    lane_ = n.lane;
    if (std::find(model_.participants.begin(), model_.participants.end(), n.lane) == model_.participants.end())
      model_.participants.push_back(n.lane);
    return preds;
  }

  Frontier Lower(const diagram::StartMarker &, Frontier preds) {
    std::size_t s = NewNode(NodeKind::kStart);
    Connect(preds, s);
    return {{s, std::nullopt}};
  }

  Frontier Lower(const diagram::StopMarker &, Frontier preds) {
    std::size_t s = NewNode(NodeKind::kStop);
    Connect(preds, s);
    return {};
  }

  Frontier Lower(const diagram::Activity &n, Frontier preds) {
    std::size_t a = NewNode(NodeKind::kActivity, n.label);
    Connect(preds, a);
    last_activity_ = a;
    return {{a, std::nullopt}};
  }

  Frontier Lower(const diagram::Note &n, Frontier preds) {
    std::string_view name;
    if (HasProducesPrefix(n.text, name)) {
      if (!last_activity_) throw ModelError("artifact note has no preceding activity");
      if (name.empty()) throw ModelError("artifact note names no artifact");
      model_.artifacts.push_back(Artifact{std::string(name), model_.nodes[*last_activity_].id});
    }
    return preds;
  }

  Frontier Lower(const diagram::IfBlock &n, Frontier preds) {
    std::size_t d = NewNode(NodeKind::kDecision, n.condition);
    Connect(preds, d);
    std::string then_guard = n.then_label;
    std::string else_guard = n.else_label ? *n.else_label : Complement(then_guard);
    if (then_guard == else_guard) throw ModelError("decision '" + n.condition + "' has identical branch labels");
    Frontier outs = LowerBlock(n.then_body, {{d, then_guard}});
    Frontier else_outs = n.else_body ? LowerBlock(*n.else_body, {{d, else_guard}}) : Frontier{{d, else_guard}};
    outs.insert(outs.end(), else_outs.begin(), else_outs.end());
    if (outs.empty()) return {};
    std::size_t merge = NewNode(NodeKind::kMerge);
    Connect(outs, merge);
    return {{merge, std::nullopt}};
  }

  Frontier Lower(const diagram::ForkBlock &n, Frontier preds) {
    std::size_t f = NewNode(NodeKind::kFork);
    Connect(preds, f);
    Frontier outs;
    for (const auto &branch : n.branches) {
      Frontier b = LowerBlock(branch, {{f, std::nullopt}});
      outs.insert(outs.end(), b.begin(), b.end());
    }
    if (outs.empty()) throw ModelError("no fork branch reaches 'end fork'");
    std::size_t join = NewNode(NodeKind::kJoin);
    Connect(outs, join);
    return {{join, std::nullopt}};
  }

  Frontier Lower(const diagram::RepeatBlock &n, Frontier preds) {
    std::size_t head = model_.nodes.size();
    Frontier body_out = LowerBlock(n.body, std::move(preds));
    if (model_.nodes.size() == head) throw ModelError("repeat body contains no activity");
    std::size_t d = NewNode(NodeKind::kDecision, n.while_condition);
    Connect(body_out, d);
    std::string loop_guard = n.loop_label.value_or("yes");
    std::string exit_guard = Complement(loop_guard);
    if (loop_guard == exit_guard) throw ModelError("repeat '" + n.while_condition + "' has identical branch labels");
    model_.edges.push_back(Edge{model_.nodes[d].id, model_.nodes[head].id, loop_guard});
    return {{d, exit_guard}};
  }

  ProcessModel model_;
  std::optional<std::string> lane_;
  std::optional<std::size_t> last_activity_;
  bool has_start_ = false;
};

}  // namespace

ProcessModel lower_to_model(const diagram::DiagramAst &ast) { return Lowerer().Run(ast); }

}  // namespace rvsc::model
