#include <gtest/gtest.h>

#include "rvsc/gateway.hpp"
#include "support.hpp"

using namespace rvsc::gateway;

namespace {

std::vector<std::string> Replay(const std::string &rel) {
  return nlohmann::json::parse(rvsc::test::read_fixture(rel)).get<std::vector<std::string>>();
}

GatewayOptions Opts(int retries = 3) { return {"test-model", 0.0, retries, "sk-secret-123"}; }

rvsc::diagram::DiagramAst ReferenceDiagram() {
  return rvsc::diagram::parse_activity_diagram(rvsc::test::read_fixture("riscv_process.puml"));
}

}  // namespace

TEST(Prompts, PlantUmlUserText) {
  const auto &p1 = prompt_template(PromptId::kPlantUml);
  auto r = render_prompt(p1, {{"PlantUML activity diagram text", ""},
                              {"textual description", rvsc::test::read_fixture("riscv_description.txt")}});
  EXPECT_EQ(r.user.rfind("Update given PlantUML diagram", 0), 0u) << r.user;
  EXPECT_EQ(r.user.find('['), std::string::npos);
  EXPECT_FALSE(r.system.empty());
}

TEST(Prompts, QueryPrompt) {
  auto g = rvsc::kg::ingest_script("CREATE (t:Company {name: 'TSMC'})\nCREATE (s:Company {name: 'Samsung'})");
  auto schema = render_schema(g);
  EXPECT_NE(schema.find("Company"), std::string::npos);
  auto r = render_prompt(prompt_template(PromptId::kQuery),
                         {{"user text", "list all foundries"}, {"current graph schema", schema}});
  EXPECT_NE(r.user.find("Generate a Cypher query"), std::string::npos);
  EXPECT_NE(r.user.find("list all foundries"), std::string::npos);
}

TEST(Prompts, MissingSlot) {
  EXPECT_THROW(render_prompt(prompt_template(PromptId::kQuery), {{"current graph schema", "x"}}), PromptError);
  EXPECT_THROW(render_prompt(prompt_template(PromptId::kPlantUml), {{"PlantUML activity diagram text", ""}}),
               PromptError);
}

TEST(Prompts, AlternativeSlots) {
  const auto &p3 = prompt_template(PromptId::kGraph);
  Slots base{{"Neo4j graph model", ""}, {"example knowledge graph model", std::string(example_graph_model())}};
  auto text_only = base;
  text_only["textual description"] = "TEXT";
  auto both = text_only;
  both["input diagram"] = "IMAGE";
  EXPECT_NE(render_prompt(p3, text_only).user.find("TEXT"), std::string::npos);
  EXPECT_EQ(render_prompt(p3, text_only).user.find("IMAGE"), std::string::npos);
  EXPECT_NE(render_prompt(p3, both).user.find("TEXT/IMAGE"), std::string::npos);
}

TEST(Prompts, ExampleGraphParses) {
  auto g = rvsc::kg::ingest_script(example_graph_model());
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.relationship_count(), 2u);
}

TEST(Prompts, StripFences) {
  EXPECT_EQ(strip_code_fences("```plantuml\n@startuml\n@enduml\n```"), "@startuml\n@enduml\n");
  EXPECT_EQ(strip_code_fences("  MATCH (a) RETURN a  "), "MATCH (a) RETURN a\n");
  EXPECT_EQ(strip_code_fences(""), "");
}

TEST(RequestBody, ImagesAndRedaction) {
  ChatRequest req{"m", 0.0, {{"user", "look", {{"image/png", "QUJD"}}}}};
  auto full = request_body(req, true);
  auto parts = full["messages"][0]["content"];
  ASSERT_TRUE(parts.is_array());
  EXPECT_NE(parts.dump().find("data:image/png;base64,QUJD"), std::string::npos);
  EXPECT_EQ(request_body(req, false).dump().find("QUJD"), std::string::npos);
  EXPECT_EQ(full["temperature"], 0.0);
}

TEST(Config, FileThenEnvironment) {
  auto path = std::filesystem::temp_directory_path() / "rvsc_gateway_config.json";
  {
    std::ofstream out(path);
    out << R"({"base_url": "http://localhost:9", "api_key": "k1", "model": "m1", "max_retries": 1})";
  }
  std::map<std::string, std::string> env{{"RVSC_MODEL", "m2"}, {"RVSC_TEMPERATURE", "0.5"}};
  auto lookup = [&](const std::string &k) -> std::optional<std::string> {
    auto it = env.find(k);
    return it == env.end() ? std::nullopt : std::optional<std::string>(it->second);
  };
  auto c = load_config(path.string(), lookup);
  EXPECT_EQ(c.base_url, "http://localhost:9");
  EXPECT_EQ(c.api_key, "k1");
  EXPECT_EQ(c.model_name, "m2");
  EXPECT_EQ(c.temperature, 0.5);
  EXPECT_EQ(c.max_retries, 1);
  EXPECT_EQ(load_config(std::nullopt, lookup).temperature, 0.5);
  EXPECT_THROW(validate_config(EndpointConfig{}), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(Gateway, ProcessReplayReproducesReference) {
  auto responses = Replay("replay/process_retry.json");
  ScriptedTransport t({responses[1]});
  Gateway gw(t, Opts());
  auto r = gw.extract_process(rvsc::test::read_fixture("riscv_description.txt"), nullptr);
  EXPECT_EQ(r.value.diagram, ReferenceDiagram());
  EXPECT_EQ(r.value.model, rvsc::model::lower_to_model(ReferenceDiagram()));
  EXPECT_EQ(r.transcript.size(), 1u);
  EXPECT_EQ(t.calls(), 1u);
}

TEST(Gateway, BadThenGoodSucceedsWithTwoEntries) {
  ScriptedTransport t(Replay("replay/process_retry.json"));
  Gateway gw(t, Opts());
  auto r = gw.extract_process("description", nullptr);
  ASSERT_EQ(r.transcript.size(), 2u);
  EXPECT_NE(r.transcript.entries()[0].outcome.find("parse error"), std::string::npos);
  EXPECT_EQ(r.transcript.entries()[1].outcome, "ok");
  // The second request carries the rejected answer and the parser message.
  const auto &msgs = t.requests()[1].messages;
  ASSERT_GE(msgs.size(), 2u);
  EXPECT_EQ(msgs[msgs.size() - 2].role, "assistant");
  EXPECT_NE(msgs.back().content.find("line "), std::string::npos);
}

TEST(Gateway, PersistentGarbageStopsAfterRetries) {
  for (int retries : {0, 1, 3}) {
    ScriptedTransport t(Replay("replay/garbage.json"));
    Gateway gw(t, Opts(retries));
    try {
      gw.extract_graph("description", nullptr);
      FAIL();
    } catch (const ExtractionError &e) {
      EXPECT_EQ(t.calls(), static_cast<std::size_t>(retries + 1));
      EXPECT_EQ(e.transcript().size(), static_cast<std::size_t>(retries + 1));
      EXPECT_TRUE(e.last_parse_error());
      EXPECT_FALSE(e.transport_failure());
    }
  }
}

TEST(Gateway, TransportFailureIsNotRetried) {
  FailingTransport t;
  Gateway gw(t, Opts());
  try {
    gw.nl_to_query("list all foundries", rvsc::kg::PropertyGraph{});
    FAIL();
  } catch (const ExtractionError &e) {
    EXPECT_TRUE(e.transport_failure());
    EXPECT_EQ(t.calls(), 1u);
  }
}

TEST(Gateway, GraphReplay) {
  ScriptedTransport t(Replay("replay/graph.json"));
  Gateway gw(t, Opts());
  auto r = gw.extract_graph(rvsc::test::read_fixture("riscv_description.txt"), nullptr);
  EXPECT_EQ(r.value.node_count(), 25u);
  EXPECT_EQ(r.value.relationship_count(), 23u);
}

TEST(Gateway, EmptyGraphIsRejected) {
  ScriptedTransport t({"// nothing", "CREATE (a:X {name: 'A'})"});
  Gateway gw(t, Opts());
  EXPECT_EQ(gw.extract_graph("d", nullptr).transcript.size(), 2u);
}

TEST(Gateway, RulesWithWarnings) {
  auto diagram = ReferenceDiagram();
  ScriptedTransport full({rvsc::test::read_fixture("riscv_rules.rules")});
  Gateway gw(full, Opts());
  auto all = gw.formalize_rules("rules text", diagram);
  EXPECT_EQ(all.value.size(), 14u);
  EXPECT_TRUE(all.warnings.empty());

  ScriptedTransport empty({""});
  Gateway gw2(empty, Opts());
  auto none = gw2.formalize_rules("", diagram);
  EXPECT_TRUE(none.value.empty());
  EXPECT_EQ(empty.calls(), 1u);

  ScriptedTransport ghost({"rule 1 : before(\"Ghost\", \"Develop CPU Core IP\")\nrule 2 : role(\"Nobody\", \"Deliver to OEM\")"});
  Gateway gw3(ghost, Opts());
  auto warned = gw3.formalize_rules("x", diagram);
  EXPECT_EQ(warned.value.size(), 2u);
  EXPECT_EQ(warned.warnings.size(), 2u);
}

TEST(Gateway, QueryRetryAndGarbage) {
  auto g = rvsc::kg::ingest_script(rvsc::test::read_fixture("riscv_graph.cypher"));
  ScriptedTransport t(Replay("replay/query_retry.json"));
  Gateway gw(t, Opts());
  auto r = gw.nl_to_query("Which foundries fabricate which products?", g);
  EXPECT_EQ(r.transcript.size(), 2u);
  EXPECT_EQ(rvsc::kg::execute(r.value, g).rows.size(), 2u);

  ScriptedTransport bad({"nope", "nope", "nope", "nope"});
  Gateway gw2(bad, Opts());
  EXPECT_THROW(gw2.nl_to_query("q", g), ExtractionError);
  EXPECT_EQ(bad.calls(), 4u);
}

TEST(Gateway, PriorAndImagesReachThePrompt) {
  auto diagram = ReferenceDiagram();
  ScriptedTransport t({rvsc::test::read_fixture("riscv_process.puml")});
  Gateway gw(t, Opts());
  gw.extract_process("", &diagram, {{"image/png", "AAAA"}});
  const auto &user = t.requests()[0].messages.back();
  EXPECT_NE(user.content.find(":Deliver to OEM;"), std::string::npos);
  EXPECT_NE(user.content.find("the attached diagram"), std::string::npos);
  ASSERT_EQ(user.images.size(), 1u);
}

TEST(Transcript, SecretIsRedacted) {
  Transcript tr("sk-secret-123");
  tr.append({1, nlohmann::json{{"auth", "Bearer sk-secret-123"}}, "echo sk-secret-123", "ok", 1.0});
  auto line = tr.to_jsonl();
  EXPECT_EQ(line.find("sk-secret-123"), std::string::npos);
  EXPECT_NE(line.find("[REDACTED]"), std::string::npos);
  EXPECT_EQ(std::count(line.begin(), line.end(), '\n'), 1);
}

TEST(Transcript, EveryCallRecordedOnce) {
  ScriptedTransport t({"bad", "also bad", rvsc::test::read_fixture("riscv_process.puml")});
  Gateway gw(t, Opts());
  auto r = gw.extract_process("d", nullptr);
  ASSERT_EQ(r.transcript.size(), t.calls());
  for (std::size_t i = 0; i < r.transcript.size(); ++i) EXPECT_EQ(r.transcript.entries()[i].attempt, int(i) + 1);
}
