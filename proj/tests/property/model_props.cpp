#include <gtest/gtest.h>

#include "rvsc/process_model.hpp"
#include "support.hpp"

using namespace rvsc::model;

TEST(ReachabilityProps, MatchesDfsOracle) {
  std::mt19937_64 rng(101);
  for (int iter = 0; iter < 1000; ++iter) {
    auto m = rvsc::test::random_model(rng, 10, iter % 2 == 1);
    ASSERT_NO_THROW(validate_model(m));
    Cfg cfg(m);
    std::bernoulli_distribution block(0.25);
    std::uniform_int_distribution<std::size_t> pick(0, m.nodes.size() - 1);
    for (int trial = 0; trial < 4; ++trial) {
      std::set<std::string> blocked;
      for (const auto &n : m.nodes)
        if (block(rng)) blocked.insert(n.id);
      std::string from = m.nodes[pick(rng)].id;
      blocked.erase(from);
      ASSERT_EQ(reachable_without(cfg, blocked, from), rvsc::test::dfs_reachable(m, blocked, from))
          << to_canonical_json(m);
    }
  }
}

TEST(PathProps, PathsAreWalksWithinBudget) {
  std::mt19937_64 rng(102);
  for (int iter = 0; iter < 300; ++iter) {
    auto m = rvsc::test::random_model(rng, 8, true);
    Cfg cfg(m);
    for (const auto &p : enumerate_paths(cfg, 2)) {
      ASSERT_EQ(p.edges.size() + 1, p.nodes.size());
      ASSERT_EQ(p.nodes.front(), cfg.id(cfg.start()));
      std::map<std::size_t, int> uses;
      for (std::size_t k = 0; k < p.edges.size(); ++k) {
        const auto &e = cfg.edge(p.edges[k]);
        ASSERT_EQ(e.from, p.nodes[k]);
        ASSERT_EQ(e.to, p.nodes[k + 1]);
        ASSERT_LE(++uses[p.edges[k]], 2);
      }
      ASSERT_EQ(p.complete, cfg.node(cfg.index(p.nodes.back())).kind == NodeKind::kStop);
    }
  }
}

TEST(PathProps, AcyclicPathsReachStop) {
  rvsc::test::for_each_small_dag(5, [](const ProcessModel &m) {
    Cfg cfg(m);
    auto paths = enumerate_paths(cfg, 2);
    ASSERT_FALSE(paths.empty());
    for (const auto &p : paths) ASSERT_TRUE(p.complete);
  });
}
