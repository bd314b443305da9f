#include <gtest/gtest.h>

#include "rvsc/analytics.hpp"
#include "support.hpp"

using namespace rvsc::kg;

TEST(AnalyticsOracle, ArticulationPointsMatchRecount) {
  std::mt19937_64 rng(401);
  for (int gi = 0; gi < 1000; ++gi) {
    auto g = rvsc::test::random_graph(rng, 12, 16);
    ASSERT_EQ(articulation_points(g), rvsc::test::remove_and_recount(g)) << export_script(g);
  }
}

TEST(AnalyticsOracle, DegreeIsRelabelingInvariant) {
  std::mt19937_64 rng(402);
  for (int gi = 0; gi < 300; ++gi) {
    auto g = rvsc::test::random_graph(rng, 10, 16);
    // Relabel ids by reversing the order; degrees must follow the nodes.
    PropertyGraph h;
    std::size_t n = g.node_count();
    for (std::size_t i = 0; i < n; ++i) h.add_node("w" + std::to_string(n - 1 - i), {}, {});
    for (const auto &r : g.relationships()) h.add_relationship(r.type, r.from, r.to, {});
    auto a = degree_centrality(g, n), b = degree_centrality(h, n);
    std::map<std::string, std::size_t> da, db;
    for (auto &[id, d] : a) da[id.substr(1)] = d;
    for (auto &[id, d] : b) db[std::to_string(n - 1 - std::stoul(id.substr(1)))] = d;
    ASSERT_EQ(da, db);
    for (std::size_t i = 1; i < a.size(); ++i) ASSERT_GE(a[i - 1].second, a[i].second);
  }
}

TEST(AnalyticsOracle, TracePathsAreSimpleAndComplete) {
  std::mt19937_64 rng(403);
  for (int gi = 0; gi < 300; ++gi) {
    auto g = rvsc::test::random_graph(rng, 7, 12);
    if (g.node_count() < 2) continue;
    const std::string src = g.nodes()[0].id, dst = g.nodes()[1].id;
    auto paths = trace_paths(g, src, dst, 4);
    // Oracle: every node sequence of length 2..5 that is simple and has an edge between neighbors.
    std::set<std::vector<std::string>> want;
    std::function<void(std::vector<std::size_t> &)> grow = [&](std::vector<std::size_t> &seq) {
      if (seq.back() == 1) {
        std::vector<std::string> ids;
        for (auto i : seq) ids.push_back(g.nodes()[i].id);
        want.insert(ids);
        return;
      }
      if (seq.size() == 5) return;
      for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (std::find(seq.begin(), seq.end(), v) != seq.end()) continue;
        bool edge = false;
        for (const auto &r : g.relationships()) edge |= r.from == seq.back() && r.to == v;
        if (!edge) continue;
        seq.push_back(v);
        grow(seq);
        seq.pop_back();
      }
    };
    std::vector<std::size_t> seq{0};
    grow(seq);
    ASSERT_EQ(std::set<std::vector<std::string>>(paths.begin(), paths.end()), want);
    ASSERT_TRUE(std::is_sorted(paths.begin(), paths.end()));
  }
}
