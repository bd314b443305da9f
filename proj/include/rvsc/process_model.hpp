#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rvsc/diagram.hpp"

namespace rvsc::model {

enum class NodeKind { kStart, kStop, kActivity, kDecision, kFork, kJoin, kMerge };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kActivity;
  // Empty for structural kinds; the condition text for decisions.
  std::string label;
  std::optional<std::string> lane;
  bool operator==(const Node &) const = default;
};

struct Edge {
  std::string from;
  std::string to;
  // Set on decision out-edges only.
  std::optional<std::string> guard;
  bool operator==(const Edge &) const = default;
};

struct Artifact {
  std::string name;
  std::string produced_by;
  bool operator==(const Artifact &) const = default;
};

// Canonical process model ("PlantUML2JSON").
struct ProcessModel {
  std::vector<std::string> participants;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<Artifact> artifacts;
  bool operator==(const ProcessModel &) const = default;
};

// Lowering failures and structural violations of a model.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProcessModel lower_to_model(const diagram::DiagramAst &ast);

// Throws ModelError if any structural invariant is broken: unique ids, edge
// endpoints exist, exactly one start, decisions have two distinctly guarded
// out-edges and nobody else has guards, forks have >= 2 out-edges, stop nodes
// have no successors and other nodes have at least one, every node reachable.
void validate_model(const ProcessModel &model);

std::string to_canonical_json(const ProcessModel &model);
// Validates the document; throws ModelError on schema violations.
ProcessModel from_canonical_json(std::string_view bytes);

// Dense view over a validated model.
class Cfg {
 public:
  explicit Cfg(ProcessModel model);

  const ProcessModel &model() const { return model_; }
  std::size_t size() const { return model_.nodes.size(); }
  std::size_t start() const { return start_; }

  const Node &node(std::size_t i) const { return model_.nodes[i]; }
  const std::string &id(std::size_t i) const { return model_.nodes[i].id; }
  // Throws std::out_of_range for unknown ids.
  std::size_t index(std::string_view id) const;
  bool contains(std::string_view id) const;

  // Successor indices in edge order, with the edge index alongside.
  struct Out {
    std::size_t to;
    std::size_t edge;
  };
  const std::vector<Out> &successors(std::size_t i) const { return adjacency_[i]; }
  const Edge &edge(std::size_t e) const { return model_.edges[e]; }

  // Activity and decision nodes keyed by normalize_label of their label.
  const std::map<std::string, std::set<std::string>> &label_index() const { return label_index_; }
  std::vector<std::size_t> nodes_labeled(std::string_view label) const;

 private:
  ProcessModel model_;
  std::size_t start_ = 0;
  std::map<std::string, std::size_t, std::less<>> ids_;
  std::vector<std::vector<Out>> adjacency_;
  std::map<std::string, std::set<std::string>> label_index_;
};

Cfg build_cfg(const ProcessModel &model);

// Nodes reachable from `from` along edges whose endpoints avoid `blocked`.
// Throws std::out_of_range on unknown ids and std::invalid_argument if `from`
// is itself blocked.
std::set<std::string> reachable_without(const Cfg &cfg, const std::set<std::string> &blocked, std::string_view from);

// Index-based form used by the rule engine; `blocked` is indexed by node.
std::vector<bool> reachable_mask(const Cfg &cfg, const std::vector<bool> &blocked, std::size_t from);

// Shortest path (by edge count) from `from` to any node in `targets` avoiding
// `blocked`; empty when none exists.
std::vector<std::size_t> find_path(const Cfg &cfg, const std::vector<bool> &blocked, std::size_t from,
                                   const std::vector<bool> &targets);

struct ControlPath {
  std::vector<std::string> nodes;
  // Indices into ProcessModel::edges; one fewer than nodes.
  std::vector<std::size_t> edges;
  // True when the path ends at a stop node; false when it was cut by the budget.
  bool complete = false;
};

// All maximal paths from start in which no edge is used more than
// `edge_budget` times.
std::vector<ControlPath> enumerate_paths(const Cfg &cfg, int edge_budget);

struct BranchSlot {
  std::string fork;
  std::size_t branch = 0;
  bool operator==(const BranchSlot &) const = default;
  auto operator<=>(const BranchSlot &) const = default;
};

// Every (fork, branch) whose exclusive region contains the node, for all
// enclosing forks. A branch region is the set of nodes reachable from that
// out-edge of the fork (without re-entering it) and from no sibling out-edge.
std::map<std::string, std::vector<BranchSlot>> fork_branch_sets(const Cfg &cfg);

// Innermost enclosing fork branch per node; nodes outside forks are absent.
std::map<std::string, BranchSlot> fork_branch_membership(const Cfg &cfg);

}  // namespace rvsc::model
