#include <map>
#include <set>

#include "rvsc/gateway.hpp"
#include "rvsc/text.hpp"

namespace rvsc::gateway {

namespace {

const std::vector<PromptTemplate> &Templates() {
  static const std::vector<PromptTemplate> kTemplates = {
      {PromptId::kPlantUml, "P1_PLANTUML",
       "You are generating PlantUml activity diagram about RISC-V supply chain processes without comments and without "
       "explanations. Activity diagram should support multiple swimlanes and interaction between actors.",
       "Update given PlantUML diagram [PlantUML activity diagram text] based on given [textual description]/[input "
       "diagram].",
       "Answer with one @startuml ... @enduml block. Allowed lines: |Lane|, start, stop, :Activity;, "
       "if (condition?) then (yes) / else (no) / endif, fork / fork again / end fork, repeat / "
       "repeat while (condition?) is (label), note right: produces: <artifact>. No arrows, styling or titles."},
      {PromptId::kRules, "P2_RULES", "",
       "For given rules: [textual rules] and activity diagram: [PlantUML activity diagram text], generate list of "
       "rules mapped to appropriate ordering constraints: before, after, after-true, after-false. Identitfy activities "
       "(A) and roles for included activities (as R:A).",
       "Answer with one rule per line and nothing else, in the form rule <id> \"<description>\" : <form>(\"X\", \"Y\"). "
       "Forms: before(A, B), after(A, B), after_true(A, Decision), after_false(A, Decision), not_before(A, B), "
       "role(R, A), parallel(A, B). Use activity and lane names exactly as written in the diagram."},
      {PromptId::kGraph, "P3_GRAPH",
       "You are generating Neo4j model about supply chain key elements - stakeholders, products, their relationships "
       "and attributes - no comments, delimiters and explanations. Just extract node labels, properties and "
       "relationships, without constriants and indices. Example of simple output is given as [example knowledge graph "
       "model].",
       "Update given knowledge graph model [Neo4j graph model] based on given [textual description]/[input diagram].",
       "Answer with CREATE statements only, one per line: CREATE (alias:Label {name: \"...\", key: value}) for nodes "
       "and CREATE (a)-[:TYPE]->(b) for relationships between aliases created earlier."},
      {PromptId::kQuery, "P4_QUERY", "",
       "Generate a Cypher query from the [user text] using the provided Neo4j schema [current graph schema].",
       "Answer with a single read-only query: MATCH ... [WHERE ...] RETURN ... [ORDER BY ...] [LIMIT n]. "
       "No explanation."},
  };
  return kTemplates;
}

std::optional<std::string> Lookup(const Slots &slots, const std::string &name) {
  auto it = slots.find(name);
  if (it == slots.end()) return std::nullopt;
  return it->second;
}

}  // namespace

const PromptTemplate &prompt_template(PromptId id) {
  for (const auto &t : Templates())
    if (t.id == id) return t;
  throw PromptError("unknown prompt template");
}

std::string_view example_graph_model() {
  return "CREATE (v:Company {name: \"Vendor A\"})\n"
         "CREATE (c:Product {name: \"RISC-V Core\", type: \"IP\"})\n"
         "CREATE (s:Company {name: \"Startup B\"})\n"
         "CREATE (v)-[:DEVELOPS]->(c)\n"
         "CREATE (s)-[:LICENSES]->(c)\n";
}

namespace {

std::string Render(const std::string &text, const Slots &slots) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t open = text.find('[', i);
    if (open == std::string::npos) {
      out += text.substr(i);
      break;
    }
    std::size_t close = text.find(']', open);
    if (close == std::string::npos) {
      out += text.substr(i);
      break;
    }
    out += text.substr(i, open - i);
    std::string first = text.substr(open + 1, close - open - 1);
    std::size_t end = close + 1;
    std::optional<std::string> second;
    if (text.compare(end, 2, "/[") == 0) {
      std::size_t close2 = text.find(']', end + 2);
      if (close2 != std::string::npos) {
        second = text.substr(end + 2, close2 - end - 2);
        end = close2 + 1;
      }
    }
    auto a = Lookup(slots, first);
    if (second) {
      auto b = Lookup(slots, *second);
      if (!a && !b) throw PromptError("missing slot [" + first + "]/[" + *second + "]");
      if (a && b) out += *a + "/" + *b;
      else out += a ? *a : *b;
    } else {
      if (!a) throw PromptError("missing slot [" + first + "]");
      out += *a;
    }
    i = end;
  }
  return out;
}

}  // namespace

RenderedPrompt render_prompt(const PromptTemplate &tmpl, const Slots &slots) {
  return {Render(tmpl.system, slots), Render(tmpl.user, slots)};
}

std::string render_schema(const kg::PropertyGraph &graph) {
  std::map<std::string, std::set<std::string>, NaturalLess> labels;
  std::set<std::string> patterns;
  auto label_text = [](const kg::GraphNode &n) {
    std::string s;
    for (const auto &l : n.labels) s += ":" + l;
    return s;
  };
  for (const auto &n : graph.nodes())
    for (const auto &l : n.labels)
      for (const auto &[k, v] : n.props) labels[l].insert(k);
  for (const auto &n : graph.nodes())
    for (const auto &l : n.labels) labels.try_emplace(l);
  for (const auto &r : graph.relationships())
    patterns.insert("(" + label_text(graph.nodes()[r.from]) + ")-[:" + r.type + "]->(" +
                    label_text(graph.nodes()[r.to]) + ")");
  std::string out = "Node labels:\n";
  for (const auto &[label, keys] : labels) {
    out += "  " + label + " {";
    bool first = true;
    for (const auto &k : keys) {
      out += (first ? "" : ", ") + k;
      first = false;
    }
    out += "}\n";
  }
  out += "Relationships:\n";
  for (const auto &p : patterns) out += "  " + p + "\n";
  return out;
}

std::string strip_code_fences(std::string_view text) {
  std::string_view inner = text;
  std::size_t open = text.find("```");
  std::size_t body = open == std::string_view::npos ? open : text.find('\n', open);
  if (body != std::string_view::npos) {
    std::size_t close = text.find("```", body + 1);
    inner = text.substr(body + 1, close == std::string_view::npos ? std::string_view::npos : close - body - 1);
  }
  inner = trim(inner);
  return inner.empty() ? std::string() : std::string(inner) + "\n";
}

}  // namespace rvsc::gateway
