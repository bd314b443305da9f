#include <gtest/gtest.h>

#include "rvsc/diagram.hpp"
#include "rvsc/eval.hpp"
#include "rvsc/graph.hpp"
#include "rvsc/process_model.hpp"
#include "support.hpp"

using namespace rvsc;

namespace {

// Random diagram syntax tree; every branch keeps at least one activity.
diagram::Block RandomBlock(std::mt19937_64 &rng, int depth, int &counter) {
  std::uniform_int_distribution<int> len(1, 3), kind(0, depth > 0 ? 5 : 1);
  std::bernoulli_distribution coin(0.5);
  diagram::Block out;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0:
      case 1:
        out.push_back({diagram::Activity{"Step " + std::to_string(++counter)}});
        if (coin(rng) && coin(rng))
          out.push_back({diagram::Note{coin(rng) ? diagram::NoteSide::kLeft : diagram::NoteSide::kRight,
                                       "produces: Item " + std::to_string(counter)}});
        break;
      case 2:
        out.push_back({diagram::LaneSwitch{"Lane " + std::to_string(counter % 3)}});
        out.push_back({diagram::Activity{"Step " + std::to_string(++counter)}});
        break;
      case 3: {
        diagram::IfBlock b;
        b.condition = "Check " + std::to_string(++counter) + "?";
        b.then_label = "yes";
        b.then_body = RandomBlock(rng, depth - 1, counter);
        if (coin(rng)) {
          b.else_label = "no";
          b.else_body = RandomBlock(rng, depth - 1, counter);
        }
        out.push_back({std::move(b)});
        break;
      }
      case 4: {
        diagram::ForkBlock f;
        f.branches.push_back(RandomBlock(rng, depth - 1, counter));
        f.branches.push_back(RandomBlock(rng, depth - 1, counter));
        out.push_back({std::move(f)});
        break;
      }
      default: {
        diagram::RepeatBlock r;
        r.body = RandomBlock(rng, depth - 1, counter);
        r.body.insert(r.body.begin(), {diagram::Activity{"Step " + std::to_string(++counter)}});
        r.while_condition = "Again " + std::to_string(counter) + "?";
        if (coin(rng)) r.loop_label = "retry";
        out.push_back({std::move(r)});
        break;
      }
    }
  }
  return out;
}

diagram::DiagramAst RandomDiagram(std::mt19937_64 &rng) {
  int counter = 0;
  diagram::DiagramAst ast;
  ast.elements.push_back({diagram::StartMarker{}});
  auto body = RandomBlock(rng, 2, counter);
  ast.elements.insert(ast.elements.end(), body.begin(), body.end());
  ast.elements.push_back({diagram::StopMarker{}});
  return ast;
}

}  // namespace

TEST(RoundTrip, DiagramCorpusFixpoint) {
  auto corpus = test::diagram_corpus();
  ASSERT_GE(corpus.size(), 16u);
  for (const auto &path : corpus) {
    auto ast = diagram::parse_activity_diagram(test::read_file(path), path.string());
    auto text = diagram::serialize_ast(ast);
    auto again = diagram::parse_activity_diagram(text);
    ASSERT_EQ(again, ast) << path;
    ASSERT_EQ(diagram::serialize_ast(again), text) << path;
  }
}

TEST(RoundTrip, RandomDiagrams) {
  std::mt19937_64 rng(501);
  for (int i = 0; i < 500; ++i) {
    auto ast = RandomDiagram(rng);
    auto text = diagram::serialize_ast(ast);
    ASSERT_EQ(diagram::parse_activity_diagram(text), ast) << text;
    auto m = model::lower_to_model(ast);
    ASSERT_NO_THROW(model::validate_model(m)) << text;
  }
}

TEST(RoundTrip, CanonicalJsonIdentity) {
  std::mt19937_64 rng(502);
  std::vector<model::ProcessModel> models;
  for (const auto &path : test::diagram_corpus())
    models.push_back(model::lower_to_model(diagram::parse_activity_diagram(test::read_file(path))));
  for (int i = 0; i < 300; ++i) models.push_back(test::random_model(rng, 10, i % 2 == 0));
  for (int i = 0; i < 200; ++i) models.push_back(model::lower_to_model(RandomDiagram(rng)));
  for (const auto &m : models) {
    auto bytes = model::to_canonical_json(m);
    ASSERT_EQ(model::from_canonical_json(bytes), m);
    ASSERT_EQ(model::to_canonical_json(model::from_canonical_json(bytes)), bytes);
  }
}

TEST(RoundTrip, GraphExportPreservesContent) {
  std::mt19937_64 rng(503);
  auto key = [](const kg::PropertyGraph &g) {
    std::multiset<std::string> out;
    for (const auto &n : g.nodes()) {
      std::string s = n.id + "|";
      for (const auto &l : n.labels) s += l + ",";
      for (const auto &[k, v] : n.props) s += k + "=" + kg::value_literal(v) + ";";
      out.insert(s);
    }
    for (const auto &r : g.relationships()) {
      std::string s = r.type + "|" + g.nodes()[r.from].id + "->" + g.nodes()[r.to].id + "|";
      for (const auto &[k, v] : r.props) s += k + "=" + kg::value_literal(v) + ";";
      out.insert(s);
    }
    return out;
  };
  for (int i = 0; i < 500; ++i) {
    auto g = test::random_graph(rng, 10, 16);
    if (i % 3 == 0) g.add_node("odd id " + std::to_string(i), {"Has Space"}, {{"x", kg::Value(-0.25)}});
    auto h = kg::ingest_script(kg::export_script(g));
    ASSERT_EQ(h.node_count(), g.node_count());
    ASSERT_EQ(h.relationship_count(), g.relationship_count());
    ASSERT_EQ(key(h), key(g));
  }
}

TEST(EvalProps, PercentMonotoneAndBounded) {
  for (std::size_t t = 1; t <= 200; ++t) {
    int prev = -1;
    for (std::size_t m = 0; m <= t; ++m) {
      int p = eval::percent(m, t);
      ASSERT_GE(p, prev);
      ASSERT_LE(p, 100);
      prev = p;
    }
    ASSERT_EQ(eval::percent(t, t), 100);
    ASSERT_EQ(eval::percent(0, t), 0);
  }
}

TEST(EvalProps, SelfMatchIsComplete) {
  std::mt19937_64 rng(504);
  for (int i = 0; i < 300; ++i) {
    auto g = test::random_graph(rng, 10, 14);
    for (const auto &r : eval::match_graph(g, eval::graph_truth(g))) ASSERT_EQ(r.matched, r.total);
    auto m = model::lower_to_model(RandomDiagram(rng));
    for (const auto &r : eval::match_process(m, eval::process_truth(m, {}))) ASSERT_EQ(r.matched, r.total);
  }
}
