#pragma once

// Shared test helpers: fixture access, random generators and the independent
// oracles used by property tests and the acceptance binary.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rvsc/graph.hpp"
#include "rvsc/process_model.hpp"
#include "rvsc/rules.hpp"

#ifndef RVSC_FIXTURE_DIR
#error "RVSC_FIXTURE_DIR must be defined"
#endif

namespace rvsc::test {

inline std::filesystem::path fixture(const std::string &rel) { return std::filesystem::path(RVSC_FIXTURE_DIR) / rel; }

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string read_fixture(const std::string &rel) { return read_file(fixture(rel)); }

// Every .puml file under the fixture tree.
inline std::vector<std::filesystem::path> diagram_corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto &e : std::filesystem::recursive_directory_iterator(RVSC_FIXTURE_DIR))
    if (e.is_regular_file() && e.path().extension() == ".puml") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// ---- process models ---------------------------------------------------------

// Assigns kinds from the edge structure: node 0 is the start, sinks stop,
// two successors make a decision (or a fork when `fork_mask` has the node's
// bit), three or more always a fork. Each fork gets a join at a later merge
// point when one exists.
inline model::ProcessModel model_from_edges(int n, const std::vector<std::pair<int, int>> &edges, unsigned fork_mask,
                                            const std::function<std::string(int)> &label_of,
                                            const std::function<std::optional<std::string>(int)> &lane_of = {}) {
  std::vector<std::vector<int>> succ(n);
  for (auto [a, b] : edges) succ[a].push_back(b);
  model::ProcessModel m;
  std::set<std::string> lanes;
  for (int i = 0; i < n; ++i) {
    model::Node node;
    node.id = "n" + std::to_string(i);
    if (i == 0) node.kind = model::NodeKind::kStart;
    else if (succ[i].empty()) node.kind = model::NodeKind::kStop;
    else if (succ[i].size() == 1) node.kind = model::NodeKind::kActivity;
    else if (succ[i].size() == 2 && !(fork_mask >> i & 1u)) node.kind = model::NodeKind::kDecision;
    else node.kind = model::NodeKind::kFork;
    if (node.kind == model::NodeKind::kActivity || node.kind == model::NodeKind::kDecision) {
      node.label = label_of(i);
      if (node.kind == model::NodeKind::kDecision) node.label += "?";
      if (lane_of) node.lane = lane_of(i);
      if (node.lane) lanes.insert(*node.lane);
    }
    m.nodes.push_back(std::move(node));
  }
  // One join per fork, taken from merge points after the first fork.
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : edges) ++indeg[b];
  int forks = 0, first_fork = n;
  for (int i = 0; i < n; ++i)
    if (m.nodes[i].kind == model::NodeKind::kFork) ++forks, first_fork = std::min(first_fork, i);
  for (int i = first_fork + 1; i < n && forks > 0; ++i) {
    if (indeg[i] < 2 || m.nodes[i].kind != model::NodeKind::kActivity) continue;
    m.nodes[i].kind = model::NodeKind::kJoin;
    m.nodes[i].label.clear();
    m.nodes[i].lane.reset();
    --forks;
  }
  lanes.clear();
  for (const auto &node : m.nodes)
    if (node.lane) lanes.insert(*node.lane);
  m.participants.assign(lanes.begin(), lanes.end());
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < succ[i].size(); ++k) {
      model::Edge e{"n" + std::to_string(i), "n" + std::to_string(succ[i][k]), std::nullopt};
      if (m.nodes[i].kind == model::NodeKind::kDecision) e.guard = k == 0 ? "yes" : "no";
      m.edges.push_back(std::move(e));
    }
  }
  return m;
}

inline bool well_formed(const model::ProcessModel &m) {
  try {
    model::validate_model(m);
    return true;
  } catch (const model::ModelError &) {
    return false;
  }
}

inline bool all_reachable(int n, const std::vector<std::pair<int, int>> &edges) {
  std::vector<std::vector<int>> succ(n);
  for (auto [a, b] : edges) succ[a].push_back(b);
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : succ[u])
      if (!seen[v]) seen[v] = stack.emplace_back(v), true;
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// Every acyclic model on 2..max_nodes nodes (edges follow a fixed topological
// order, the start has one successor, every node is reachable), with each
// two-way split tried both as a decision and as a fork.
inline void for_each_small_dag(int max_nodes, const std::function<void(const model::ProcessModel &)> &visit) {
  for (int n = 2; n <= max_nodes; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    for (unsigned long mask = 0; mask < (1ul << slots.size()); ++mask) {
      std::vector<std::pair<int, int>> edges;
      std::vector<int> outdeg(n, 0);
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1ul) edges.push_back(slots[s]), ++outdeg[slots[s].first];
      if (outdeg[0] != 1 || !all_reachable(n, edges)) continue;
      std::vector<int> splits;
      for (int i = 1; i < n; ++i)
        if (outdeg[i] == 2) splits.push_back(i);
      for (unsigned choice = 0; choice < (1u << splits.size()); ++choice) {
        unsigned forks = 0;
        for (std::size_t k = 0; k < splits.size(); ++k)
          if (choice >> k & 1u) forks |= 1u << splits[k];
        auto m = model_from_edges(n, edges, forks, [](int i) { return "A" + std::to_string(i); });
        if (well_formed(m)) visit(m);
      }
    }
  }
}

// Random model on 2..max_nodes nodes. Labels come from a small pool so that
// duplicates occur; with `loops`, some decisions branch back to an earlier node.
inline model::ProcessModel random_model(std::mt19937_64 &rng, int max_nodes, bool loops) {
  std::uniform_int_distribution<int> size(2, max_nodes);
  int n = size(rng);
  std::bernoulli_distribution coin(0.5), rare(0.2);
  for (;;) {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> succ(n);
    edges.emplace_back(0, 1);
    for (int i = 1; i + 1 < n; ++i) {
      int want = rare(rng) ? 0 : (coin(rng) ? 1 : (rare(rng) ? 3 : 2));
      std::uniform_int_distribution<int> later(i + 1, n - 1);
      std::set<int> targets;
      for (int k = 0; k < want; ++k) targets.insert(later(rng));
      for (int t : targets) edges.emplace_back(i, t);
    }
    if (!all_reachable(n, edges)) continue;
    std::vector<int> outdeg(n, 0);
    for (auto [a, b] : edges) ++outdeg[a];
    unsigned forks = 0;
    for (int i = 1; i < n; ++i)
      if (outdeg[i] == 2 && rare(rng)) forks |= 1u << i;
    if (loops) {
      // Turn one out-edge of a decision into a back edge.
      for (auto &[a, b] : edges) {
        if (outdeg[a] != 2 || (forks >> a & 1u) || a < 2 || !rare(rng)) continue;
        std::uniform_int_distribution<int> earlier(1, a - 1);
        int target = earlier(rng);
        bool dup = std::any_of(edges.begin(), edges.end(), [&](auto &e) { return e.first == a && e.second == target; });
        if (!dup) b = target;
      }
      if (!all_reachable(n, edges)) continue;
    }
    int pool = std::max(2, n / 2 + 1);
    std::uniform_int_distribution<int> pick(0, pool - 1);
    std::uniform_int_distribution<int> lane(0, 2);
    std::vector<std::string> labels(n), lanes(n);
    for (int i = 0; i < n; ++i) {
      labels[i] = "A" + std::to_string(pick(rng));
      lanes[i] = "L" + std::to_string(lane(rng));
    }
    auto m = model_from_edges(
        n, edges, forks, [&](int i) { return labels[i]; },
        [&](int i) { return std::optional<std::string>(lanes[i]); });
    if (well_formed(m)) return m;
  }
}

// Labels of activity and decision nodes, without the decision '?'.
inline std::vector<std::string> rule_labels(const model::ProcessModel &m) {
  std::set<std::string> out;
  for (const auto &node : m.nodes)
    if (node.kind == model::NodeKind::kActivity || node.kind == model::NodeKind::kDecision)
      out.insert(node.kind == model::NodeKind::kDecision ? node.label.substr(0, node.label.size() - 1) : node.label);
  return {out.begin(), out.end()};
}

// Before, After and NotBefore over every ordered pair of distinct labels, plus
// one rule naming an unknown label.
inline std::vector<rules::Rule> all_ordering_rules(const model::ProcessModel &m) {
  auto labels = rule_labels(m);
  std::vector<rules::Rule> out;
  int id = 0;
  auto add = [&](rules::RuleBody body) { out.push_back({std::to_string(++id), "", std::move(body)}); };
  for (const auto &a : labels)
    for (const auto &b : labels) {
      if (a == b) continue;
      add(rules::Before{a, b});
      add(rules::After{a, b});
      add(rules::NotBefore{a, b});
    }
  if (!labels.empty()) add(rules::Before{"Ghost", labels.front()});
  return out;
}

inline std::vector<rules::Rule> random_ordering_rules(std::mt19937_64 &rng, const model::ProcessModel &m, int count) {
  auto labels = rule_labels(m);
  std::vector<rules::Rule> out;
  if (labels.size() < 2) return out;
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  std::uniform_int_distribution<int> form(0, 2);
  for (int i = 0; i < count; ++i) {
    std::string a = labels[pick(rng)], b = labels[pick(rng)];
    if (a == b) continue;
    rules::RuleBody body;
    switch (form(rng)) {
      case 0: body = rules::Before{a, b}; break;
      case 1: body = rules::After{a, b}; break;
      default: body = rules::NotBefore{a, b}; break;
    }
    out.push_back({"r" + std::to_string(i + 1), "", std::move(body)});
  }
  return out;
}

// ---- property graphs ----------------------------------------------------------

inline kg::PropertyGraph random_graph(std::mt19937_64 &rng, int max_nodes, int max_rels) {
  std::uniform_int_distribution<int> nodes(1, max_nodes);
  int n = nodes(rng);
  std::uniform_int_distribution<int> rels(0, max_rels), node(0, n - 1), small(0, 2);
  std::bernoulli_distribution coin(0.5);
  static const char *kLabels[] = {"A", "B", "C"};
  static const char *kTypes[] = {"R", "S"};
  kg::PropertyGraph g;
  for (int i = 0; i < n; ++i) {
    std::set<std::string> labels;
    for (const char *l : kLabels)
      if (std::bernoulli_distribution(0.35)(rng)) labels.insert(l);
    kg::Properties props{{"name", std::string("v") + std::to_string(i)}};
    if (coin(rng)) props["k"] = static_cast<std::int64_t>(small(rng));
    g.add_node("v" + std::to_string(i), std::move(labels), std::move(props));
  }
  int m = rels(rng);
  for (int i = 0; i < m; ++i) {
    kg::Properties props;
    if (coin(rng)) props["w"] = static_cast<std::int64_t>(small(rng));
    g.add_relationship(kTypes[coin(rng)], node(rng), node(rng), std::move(props));
  }
  return g;
}

// Random query text from the supported subset over random_graph vocabulary.
inline std::string random_query(std::mt19937_64 &rng) {
  std::bernoulli_distribution coin(0.5), rare(0.2);
  std::uniform_int_distribution<int> small(0, 2);
  static const char *kLabels[] = {"A", "B", "C"};
  std::vector<std::string> node_vars, rel_vars, prop_vars;
  int next = 0;
  int rel_positions = 0;
  auto node_text = [&](bool reuse) {
    if (reuse && !node_vars.empty() && rare(rng)) {
      std::uniform_int_distribution<std::size_t> p(0, node_vars.size() - 1);
      return "(" + node_vars[p(rng)] + ")";
    }
    std::string v = "n" + std::to_string(next++);
    std::string s = "(";
    if (!rare(rng)) {
      s += v;
      node_vars.push_back(v);
    }
    if (rare(rng) || (coin(rng) && coin(rng))) s += std::string(":") + kLabels[small(rng)];
    if (rare(rng)) s += " {k: " + std::to_string(small(rng)) + "}";
    return s + ")";
  };
  auto rel_text = [&]() {
    ++rel_positions;
    bool out = coin(rng);
    std::string body;
    bool var_len = rare(rng);
    if (var_len) {
      if (coin(rng)) body += std::string(":") + (coin(rng) ? "R" : "S");
      body += coin(rng) ? "*1..2" : "*2";
    } else {
      if (!rare(rng)) {
        std::string v = "r" + std::to_string(next++);
        rel_vars.push_back(v);
        body += v;
      }
      if (coin(rng)) body += std::string(":") + (coin(rng) ? "R" : "S");
      if (rare(rng)) body += " {w: " + std::to_string(small(rng)) + "}";
    }
    return out ? "-[" + body + "]->" : "<-[" + body + "]-";
  };
  std::string q = "MATCH ";
  int patterns = rare(rng) ? 2 : 1;
  for (int p = 0; p < patterns; ++p) {
    if (p) q += ", ";
    q += node_text(p > 0);
    int len = small(rng);
    if (rel_positions + len > 2) len = 2 - rel_positions;
    for (int k = 0; k < len; ++k) q += rel_text() + node_text(true);
  }
  std::vector<std::string> vars = node_vars;
  vars.insert(vars.end(), rel_vars.begin(), rel_vars.end());
  if (vars.empty()) {
    q = "MATCH (n0) ";
    vars = node_vars = {"n0"};
  } else {
    q += " ";
  }
  std::uniform_int_distribution<std::size_t> pick_node(0, node_vars.empty() ? 0 : node_vars.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_var(0, vars.size() - 1);
  if (!node_vars.empty() && rare(rng)) {
    static const char *kOps[] = {"=", "<>", "<", ">=", "<="};
    std::uniform_int_distribution<int> op(0, 4);
    std::string lhs = node_vars[pick_node(rng)] + ".k";
    q += "WHERE " + lhs + " " + kOps[op(rng)] + " " + std::to_string(small(rng));
    if (coin(rng)) q += (coin(rng) ? " OR " : " AND ") + node_vars[pick_node(rng)] + ".name <> \"v1\"";
    q += " ";
  }
  q += "RETURN ";
  if (rare(rng)) q += "DISTINCT ";
  std::vector<std::string> items;
  std::set<std::string> used;
  int count = 1 + small(rng);
  for (int i = 0; i < count; ++i) {
    std::string item;
    int kind = small(rng);
    const std::string &v = vars[pick_var(rng)];
    if (kind == 0) item = v;
    else if (kind == 1) item = v + (v[0] == 'r' ? ".w" : (coin(rng) ? ".k" : ".name"));
    else item = rare(rng) ? "count(*)" : v + "." + (v[0] == 'r' ? "w" : "k");
    if (used.insert(item).second) items.push_back(item);
  }
  if (rare(rng) && used.insert("count(*)").second) items.push_back("count(*)");
  for (std::size_t i = 0; i < items.size(); ++i) q += (i ? ", " : "") + items[i];
  if (rare(rng)) {
    std::uniform_int_distribution<std::size_t> col(0, items.size() - 1);
    q += " ORDER BY " + items[col(rng)] + (coin(rng) ? " DESC" : "");
  }
  if (rare(rng)) q += " LIMIT " + std::to_string(1 + small(rng));
  return q;
}

// ---- oracles ------------------------------------------------------------------

// Nodes reachable from `from` by plain DFS over the edge list, skipping
// blocked endpoints.
inline std::set<std::string> dfs_reachable(const model::ProcessModel &m, const std::set<std::string> &blocked,
                                           const std::string &from) {
  std::set<std::string> seen{from};
  std::vector<std::string> stack{from};
  while (!stack.empty()) {
    std::string u = stack.back();
    stack.pop_back();
    for (const auto &e : m.edges)
      if (e.from == u && !blocked.count(e.to) && seen.insert(e.to).second) stack.push_back(e.to);
  }
  return seen;
}

inline int undirected_components(const kg::PropertyGraph &g, std::size_t skip) {
  std::size_t n = g.node_count();
  std::vector<std::set<std::size_t>> adj(n);
  for (const auto &r : g.relationships()) {
    if (r.from == r.to || r.from == skip || r.to == skip) continue;
    adj[r.from].insert(r.to);
    adj[r.to].insert(r.from);
  }
  std::vector<bool> seen(n, false);
  int comps = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (s == skip || seen[s]) continue;
    ++comps;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto v : adj[u])
        if (!seen[v]) seen[v] = true, stack.push_back(v);
    }
  }
  return comps;
}

// A node is a cut vertex iff deleting it leaves more components than before.
inline std::set<std::string> remove_and_recount(const kg::PropertyGraph &g) {
  std::set<std::string> out;
  int base = undirected_components(g, g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (undirected_components(g, v) > base) out.insert(g.nodes()[v].id);
  return out;
}

}  // namespace rvsc::test
