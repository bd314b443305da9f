#include "rvsc/analytics.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "rvsc/text.hpp"

namespace rvsc::kg {

std::set<std::string> articulation_points(const PropertyGraph &graph) {
  const std::size_t n = graph.node_count();
  std::vector<std::set<std::size_t>> adj(n);
  for (const auto &r : graph.relationships()) {
    if (r.from == r.to) continue;
    adj[r.from].insert(r.to);
    adj[r.to].insert(r.from);
  }
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> cut(n, false);
  int timer = 0;
  std::function<void(std::size_t, std::optional<std::size_t>)> dfs = [&](std::size_t u,
                                                                         std::optional<std::size_t> parent) {
    disc[u] = low[u] = timer++;
    int children = 0;
    for (std::size_t v : adj[u]) {
      if (parent && v == *parent) continue;
      if (disc[v] >= 0) {
        low[u] = std::min(low[u], disc[v]);
        continue;
      }
      ++children;
      dfs(v, u);
      low[u] = std::min(low[u], low[v]);
      if (parent && low[v] >= disc[u]) cut[u] = true;
    }
    if (!parent && children > 1) cut[u] = true;
  };
  for (std::size_t u = 0; u < n; ++u)
    if (disc[u] < 0) dfs(u, std::nullopt);

  std::set<std::string> out;
  for (std::size_t u = 0; u < n; ++u)
    if (cut[u]) out.insert(graph.nodes()[u].id);
  return out;
}

std::vector<std::pair<std::string, std::size_t>> degree_centrality(const PropertyGraph &graph, std::size_t k) {
  std::vector<std::pair<std::string, std::size_t>> all;
  for (std::size_t i = 0; i < graph.node_count(); ++i)
    all.emplace_back(graph.nodes()[i].id, graph.outgoing(i).size() + graph.incoming(i).size());
  std::sort(all.begin(), all.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return natural_less(a.first, b.first);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<std::vector<std::string>> trace_paths(const PropertyGraph &graph, std::string_view src,
                                                  std::string_view dst, int max_len) {
  if (max_len < 1 || max_len > 8) throw GraphError("path length must be between 1 and 8");
  auto s = graph.find_node(src);
  if (!s) throw GraphError("unknown node '" + std::string(src) + "'");
  auto d = graph.find_node(dst);
  if (!d) throw GraphError("unknown node '" + std::string(dst) + "'");
  std::set<std::vector<std::string>> found;
  if (*s == *d) return {};

  std::vector<bool> on_path(graph.node_count(), false);
  std::vector<std::size_t> path{*s};
  on_path[*s] = true;
  std::function<void(std::size_t)> walk = [&](std::size_t u) {
    if (u == *d) {
      std::vector<std::string> ids;
      for (std::size_t v : path) ids.push_back(graph.nodes()[v].id);
      found.insert(std::move(ids));
      return;
    }
    if (static_cast<int>(path.size()) - 1 == max_len) return;
    for (std::size_t r : graph.outgoing(u)) {
      std::size_t v = graph.relationships()[r].to;
      if (on_path[v]) continue;
      on_path[v] = true;
      path.push_back(v);
      walk(v);
      path.pop_back();
      on_path[v] = false;
    }
  };
  walk(*s);
  return {found.begin(), found.end()};
}

}  // namespace rvsc::kg
