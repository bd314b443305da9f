// Serial vs OpenMP kernels: rule evaluation and batched query execution.
//   ./rvsc_bench --benchmark_filter=Rules
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "rvsc/query.hpp"
#include "rvsc/rules.hpp"
#include "support.hpp"

using namespace rvsc;

namespace {

// A long process: a chain of `n` diamonds, each with two labeled branches.
model::ProcessModel Ladder(int n) {
  model::ProcessModel m;
  auto add = [&](model::NodeKind kind, std::string label) {
    std::string id = "n" + std::to_string(m.nodes.size() + 1);
    m.nodes.push_back({id, kind, std::move(label), std::nullopt});
    return id;
  };
  std::string prev = add(model::NodeKind::kStart, "");
  for (int i = 0; i < n; ++i) {
    auto d = add(model::NodeKind::kDecision, "D" + std::to_string(i) + "?");
    auto l = add(model::NodeKind::kActivity, "L" + std::to_string(i));
    auto r = add(model::NodeKind::kActivity, "R" + std::to_string(i));
    auto j = add(model::NodeKind::kMerge, "");
    m.edges.push_back({prev, d, std::nullopt});
    m.edges.push_back({d, l, "yes"});
    m.edges.push_back({d, r, "no"});
    m.edges.push_back({l, j, std::nullopt});
    m.edges.push_back({r, j, std::nullopt});
    prev = j;
  }
  m.edges.push_back({prev, add(model::NodeKind::kStop, ""), std::nullopt});
  return m;
}

std::vector<rules::Rule> LadderRules(int n, int count) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<rules::Rule> out;
  for (int i = 0; i < count; ++i) {
    std::string a = "L" + std::to_string(pick(rng)), b = "R" + std::to_string(pick(rng));
    out.push_back({std::to_string(i + 1), "", rules::Before{a, b}});
  }
  return out;
}

void BM_RulesSerial(benchmark::State &state) {
  auto m = Ladder(static_cast<int>(state.range(0)));
  auto rules = LadderRules(static_cast<int>(state.range(0)), 256);
  for (auto _ : state) benchmark::DoNotOptimize(rules::evaluate_serial(rules, m));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rules.size()));
}

void BM_RulesParallel(benchmark::State &state) {
  auto m = Ladder(static_cast<int>(state.range(0)));
  auto rules = LadderRules(static_cast<int>(state.range(0)), 256);
  for (auto _ : state) benchmark::DoNotOptimize(rules::evaluate(rules, m));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rules.size()));
}

BENCHMARK(BM_RulesSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RulesParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

struct QueryLoad {
  kg::PropertyGraph graph;
  std::vector<kg::QueryAst> queries;
};

const QueryLoad &Load() {
  static const QueryLoad load = [] {
    QueryLoad l;
    std::mt19937_64 rng(11);
    l.graph = test::random_graph(rng, 60, 240);
    while (l.queries.size() < 256) {
      auto q = kg::parse_query(test::random_query(rng));
      l.queries.push_back(std::move(q));
    }
    return l;
  }();
  return load;
}

void BM_QueriesSerial(benchmark::State &state) {
  const auto &l = Load();
  for (auto _ : state) benchmark::DoNotOptimize(kg::execute_batch_serial(l.queries, l.graph));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(l.queries.size()));
}

void BM_QueriesParallel(benchmark::State &state) {
  const auto &l = Load();
  for (auto _ : state) benchmark::DoNotOptimize(kg::execute_batch(l.queries, l.graph));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(l.queries.size()));
}

BENCHMARK(BM_QueriesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QueriesParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
