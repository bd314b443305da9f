#include <algorithm>
#include <deque>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "rvsc/process_model.hpp"
#include "rvsc/text.hpp"

namespace rvsc::model {

namespace {

constexpr std::pair<NodeKind, std::string_view> kKindNames[] = {
    {NodeKind::kStart, "start"},   {NodeKind::kStop, "stop"}, {NodeKind::kActivity, "activity"},
    {NodeKind::kDecision, "decision"}, {NodeKind::kFork, "fork"}, {NodeKind::kJoin, "join"},
    {NodeKind::kMerge, "merge"},
};

}  // namespace

std::string_view to_string(NodeKind kind) {
  for (const auto &[k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  for (const auto &[k, name] : kKindNames)
    if (name == text) return k;
  return std::nullopt;
}

void validate_model(const ProcessModel &model) {
  std::map<std::string, std::size_t, std::less<>> ids;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    const auto &n = model.nodes[i];
    if (n.id.empty()) throw ModelError("node with empty id");
    if (!ids.emplace(n.id, i).second) throw ModelError("duplicate node id '" + n.id + "'");
  }
  std::set<std::string> participants;
  for (const auto &p : model.participants) {
    if (!participants.insert(p).second) throw ModelError("duplicate participant '" + p + "'");
  }
  for (const auto &n : model.nodes) {
    if (n.lane && !participants.contains(*n.lane))
      throw ModelError("node '" + n.id + "' is in undeclared lane '" + *n.lane + "'");
  }

  std::vector<std::vector<std::size_t>> out(model.nodes.size());
  std::vector<std::vector<const Edge *>> out_edges(model.nodes.size());
  for (const auto &e : model.edges) {
    auto from = ids.find(e.from);
    auto to = ids.find(e.to);
    if (from == ids.end()) throw ModelError("edge from unknown node '" + e.from + "'");
    if (to == ids.end()) throw ModelError("edge to unknown node '" + e.to + "'");
    out[from->second].push_back(to->second);
    out_edges[from->second].push_back(&e);
  }

  std::optional<std::size_t> start;
  std::size_t stops = 0;
  std::size_t forks = 0;
  std::size_t joins = 0;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    const auto &n = model.nodes[i];
    const auto &edges = out_edges[i];
    switch (n.kind) {
      case NodeKind::kStart:
        if (start) throw ModelError("model has more than one start node");
        start = i;
        break;
      case NodeKind::kStop:
        ++stops;
        if (!edges.empty()) throw ModelError("stop node '" + n.id + "' has outgoing edges");
        break;
      case NodeKind::kDecision: {
        if (edges.size() != 2) throw ModelError("decision '" + n.id + "' must have exactly two out-edges");
        if (!edges[0]->guard || !edges[1]->guard)
          throw ModelError("decision '" + n.id + "' has an unguarded out-edge");
        if (*edges[0]->guard == *edges[1]->guard)
          throw ModelError("decision '" + n.id + "' has two out-edges with the same guard");
        break;
      }
      case NodeKind::kFork:
        ++forks;
        if (edges.size() < 2) throw ModelError("fork '" + n.id + "' needs at least two out-edges");
        break;
      case NodeKind::kJoin:
        ++joins;
        break;
      default:
        break;
    }
    if (n.kind != NodeKind::kStop && edges.empty())
      throw ModelError("control falls off node '" + n.id + "' without reaching stop");
    if (n.kind != NodeKind::kDecision) {
      for (const auto *e : edges)
        if (e->guard) throw ModelError("guard on out-edge of non-decision node '" + n.id + "'");
    }
  }
  if (!start) throw ModelError("model has no start node");
  if (stops == 0) throw ModelError("model has no stop node");
  if (forks != joins) throw ModelError("every fork needs a matching join");

  std::vector<bool> seen(model.nodes.size(), false);
  std::deque<std::size_t> queue{*start};
  seen[*start] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : out[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ModelError("node '" + model.nodes[i].id + "' is unreachable from start");
  }
  for (const auto &a : model.artifacts) {
    if (!ids.contains(a.produced_by))
      throw ModelError("artifact '" + a.name + "' produced by unknown node '" + a.produced_by + "'");
  }
}

// --- canonical JSON -------------------------------------------------------

std::string to_canonical_json(const ProcessModel &model) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::object();
  doc["participants"] = model.participants;
  ordered_json nodes = ordered_json::array();
  for (const auto &n : model.nodes) {
    ordered_json j = ordered_json::object();
    j["id"] = n.id;
    j["kind"] = std::string(to_string(n.kind));
    j["label"] = n.label;
    j["lane"] = n.lane ? ordered_json(*n.lane) : ordered_json(nullptr);
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  for (const auto &e : model.edges) {
    ordered_json j = ordered_json::object();
    j["from"] = e.from;
    j["to"] = e.to;
    j["guard"] = e.guard ? ordered_json(*e.guard) : ordered_json(nullptr);
    edges.push_back(std::move(j));
  }
  doc["edges"] = std::move(edges);
  ordered_json artifacts = ordered_json::array();
  for (const auto &a : model.artifacts) {
    ordered_json j = ordered_json::object();
    j["name"] = a.name;
    j["produced_by"] = a.produced_by;
    artifacts.push_back(std::move(j));
  }
  doc["artifacts"] = std::move(artifacts);
  return doc.dump(2) + "\n";
}

namespace {

using Json = nlohmann::json;

const Json &Field(const Json &obj, const char *key, const char *where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ModelError(std::string("missing field '") + key + "' in " + where);
  return *it;
}

std::string Text(const Json &obj, const char *key, const char *where) {
  const Json &v = Field(obj, key, where);
  if (!v.is_string()) throw ModelError(std::string("field '") + key + "' in " + where + " must be a string");
  return v.get<std::string>();
}

std::optional<std::string> OptionalText(const Json &obj, const char *key, const char *where) {
  const Json &v = Field(obj, key, where);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw ModelError(std::string("field '") + key + "' in " + where + " must be a string or null");
  return v.get<std::string>();
}

void OnlyKeys(const Json &obj, std::initializer_list<const char *> keys, const char *where) {
  if (!obj.is_object()) throw ModelError(std::string(where) + " must be an object");
  for (const auto &[k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char *key) { return k == key; }))
      throw ModelError("unknown field '" + k + "' in " + where);
  }
}

const Json &Array(const Json &obj, const char *key) {
  const Json &v = Field(obj, key, "model");
  if (!v.is_array()) throw ModelError(std::string("field '") + key + "' must be an array");
  return v;
}

}  // namespace

ProcessModel from_canonical_json(std::string_view bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error &e) {
    throw ModelError(std::string("invalid JSON: ") + e.what());
  }
  OnlyKeys(doc, {"participants", "nodes", "edges", "artifacts"}, "model");
  ProcessModel model;
  for (const auto &p : Array(doc, "participants")) {
    if (!p.is_string()) throw ModelError("participants must be strings");
    model.participants.push_back(p.get<std::string>());
  }
  for (const auto &j : Array(doc, "nodes")) {
    OnlyKeys(j, {"id", "kind", "label", "lane"}, "node");
    Node n;
    n.id = Text(j, "id", "node");
    std::string kind = Text(j, "kind", "node");
    auto parsed = parse_node_kind(kind);
    if (!parsed) throw ModelError("unknown node kind '" + kind + "'");
    n.kind = *parsed;
    n.label = Text(j, "label", "node");
    n.lane = OptionalText(j, "lane", "node");
    model.nodes.push_back(std::move(n));
  }
  for (const auto &j : Array(doc, "edges")) {
    OnlyKeys(j, {"from", "to", "guard"}, "edge");
    model.edges.push_back(Edge{Text(j, "from", "edge"), Text(j, "to", "edge"), OptionalText(j, "guard", "edge")});
  }
  for (const auto &j : Array(doc, "artifacts")) {
    OnlyKeys(j, {"name", "produced_by"}, "artifact");
    model.artifacts.push_back(Artifact{Text(j, "name", "artifact"), Text(j, "produced_by", "artifact")});
  }
  validate_model(model);
  return model;
}

// --- control-flow graph ---------------------------------------------------

Cfg::Cfg(ProcessModel model) : model_(std::move(model)) {
  validate_model(model_);
  adjacency_.resize(model_.nodes.size());
  for (std::size_t i = 0; i < model_.nodes.size(); ++i) {
    const auto &n = model_.nodes[i];
    ids_.emplace(n.id, i);
    if (n.kind == NodeKind::kStart) start_ = i;
    if (n.kind == NodeKind::kActivity || n.kind == NodeKind::kDecision) label_index_[normalize_label(n.label)].insert(n.id);
  }
  for (std::size_t e = 0; e < model_.edges.size(); ++e) {
    const auto &edge = model_.edges[e];
    adjacency_[ids_.find(edge.from)->second].push_back(Out{ids_.find(edge.to)->second, e});
  }
}

std::size_t Cfg::index(std::string_view id) const {
  auto it = ids_.find(id);
  if (it == ids_.end()) throw std::out_of_range("unknown node id '" + std::string(id) + "'");
  return it->second;
}

bool Cfg::contains(std::string_view id) const { return ids_.find(id) != ids_.end(); }

std::vector<std::size_t> Cfg::nodes_labeled(std::string_view label) const {
  std::vector<std::size_t> out;
  auto it = label_index_.find(normalize_label(label));
  if (it == label_index_.end()) return out;
  for (const auto &id : it->second) out.push_back(index(id));
  std::sort(out.begin(), out.end());
  return out;
}

Cfg build_cfg(const ProcessModel &model) { return Cfg(model); }

std::vector<bool> reachable_mask(const Cfg &cfg, const std::vector<bool> &blocked, std::size_t from) {
  std::vector<bool> seen(cfg.size(), false);
  if (blocked[from]) return seen;
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (const auto &out : cfg.successors(u)) {
      if (!seen[out.to] && !blocked[out.to]) {
        seen[out.to] = true;
        stack.push_back(out.to);
      }
    }
  }
  return seen;
}

std::set<std::string> reachable_without(const Cfg &cfg, const std::set<std::string> &blocked, std::string_view from) {
  std::vector<bool> mask(cfg.size(), false);
  for (const auto &id : blocked) mask[cfg.index(id)] = true;
  std::size_t origin = cfg.index(from);
  if (mask[origin]) throw std::invalid_argument("origin node '" + std::string(from) + "' is blocked");
  auto seen = reachable_mask(cfg, mask, origin);
  std::set<std::string> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.insert(cfg.id(i));
  return out;
}

std::vector<std::size_t> find_path(const Cfg &cfg, const std::vector<bool> &blocked, std::size_t from,
                                   const std::vector<bool> &targets) {
  if (blocked[from]) return {};
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(cfg.size(), kNone);
  std::vector<bool> seen(cfg.size(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    if (targets[u]) {
      std::vector<std::size_t> path;
      for (std::size_t v = u; v != kNone; v = parent[v]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto &out : cfg.successors(u)) {
      if (!seen[out.to] && !blocked[out.to]) {
        seen[out.to] = true;
        parent[out.to] = u;
        queue.push_back(out.to);
      }
    }
  }
  return {};
}

namespace {

constexpr std::size_t kMaxPaths = 1'000'000;

void Extend(const Cfg &cfg, std::size_t u, int budget, std::vector<int> &used, std::vector<std::size_t> &path,
            std::vector<std::size_t> &edges, std::vector<ControlPath> &out) {
  path.push_back(u);
  bool extended = false;
  for (const auto &o : cfg.successors(u)) {
    if (used[o.edge] >= budget) continue;
    extended = true;
    ++used[o.edge];
    edges.push_back(o.edge);
    Extend(cfg, o.to, budget, used, path, edges, out);
    edges.pop_back();
    --used[o.edge];
  }
  if (!extended) {
    if (out.size() >= kMaxPaths) throw std::length_error("path enumeration exceeded 1000000 paths");
    ControlPath p;
    p.complete = cfg.node(u).kind == NodeKind::kStop;
    p.nodes.reserve(path.size());
    for (std::size_t v : path) p.nodes.push_back(cfg.id(v));
    p.edges = edges;
    out.push_back(std::move(p));
  }
  path.pop_back();
}

}  // namespace

std::vector<ControlPath> enumerate_paths(const Cfg &cfg, int edge_budget) {
  if (edge_budget < 1) throw std::invalid_argument("edge budget must be at least 1");
  std::vector<ControlPath> out;
  std::vector<int> used(cfg.model().edges.size(), 0);
  std::vector<std::size_t> path;
  std::vector<std::size_t> edges;
  Extend(cfg, cfg.start(), edge_budget, used, path, edges, out);
  return out;
}

std::map<std::string, std::vector<BranchSlot>> fork_branch_sets(const Cfg &cfg) {
  std::map<std::string, std::vector<BranchSlot>> out;
  for (std::size_t f = 0; f < cfg.size(); ++f) {
    if (cfg.node(f).kind != NodeKind::kFork) continue;
    std::vector<bool> blocked(cfg.size(), false);
    blocked[f] = true;
    const auto &succ = cfg.successors(f);
    std::vector<std::vector<bool>> regions;
    std::vector<int> hits(cfg.size(), 0);
    for (const auto &o : succ) {
      regions.push_back(reachable_mask(cfg, blocked, o.to));
      for (std::size_t v = 0; v < cfg.size(); ++v) hits[v] += regions.back()[v] ? 1 : 0;
    }
    for (std::size_t b = 0; b < regions.size(); ++b) {
      for (std::size_t v = 0; v < cfg.size(); ++v) {
        if (regions[b][v] && hits[v] == 1) out[cfg.id(v)].push_back(BranchSlot{cfg.id(f), b});
      }
    }
  }
  return out;
}

std::map<std::string, BranchSlot> fork_branch_membership(const Cfg &cfg) {
  auto sets = fork_branch_sets(cfg);
  std::map<std::pair<std::string, std::size_t>, std::size_t> region_size;
  for (const auto &[node, slots] : sets)
    for (const auto &s : slots) ++region_size[{s.fork, s.branch}];
  std::map<std::string, BranchSlot> out;
  for (const auto &[node, slots] : sets) {
    const BranchSlot *best = nullptr;
    for (const auto &s : slots) {
      if (!best) {
        best = &s;
        continue;
      }
      std::size_t a = region_size[{s.fork, s.branch}];
      std::size_t b = region_size[{best->fork, best->branch}];
      if (a < b || (a == b && natural_less(s.fork, best->fork))) best = &s;
    }
    out.emplace(node, *best);
  }
  return out;
}

}  // namespace rvsc::model
