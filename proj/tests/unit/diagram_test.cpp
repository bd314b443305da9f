#include <gtest/gtest.h>

#include "rvsc/diagram.hpp"
#include "support.hpp"

using namespace rvsc::diagram;
using rvsc::ParseError;

namespace {

template <typename T>
const T &As(const Element &e) {
  return std::get<T>(e.node);
}

}  // namespace

TEST(Parse, MinimalDiagram) {
  auto ast = parse_activity_diagram("@startuml\nstart\n:Do X;\nstop\n@enduml");
  ASSERT_EQ(ast.elements.size(), 3u);
  EXPECT_TRUE(std::holds_alternative<StartMarker>(ast.elements[0].node));
  EXPECT_EQ(As<Activity>(ast.elements[1]).label, "Do X");
  EXPECT_TRUE(std::holds_alternative<StopMarker>(ast.elements[2].node));
}

TEST(Parse, EndIsAStop) {
  auto ast = parse_activity_diagram("@startuml\nstart\n:A;\nend\n@enduml\n");
  EXPECT_TRUE(std::holds_alternative<StopMarker>(ast.elements.back().node));
}

TEST(Parse, MissingEndifPointsAtEnduml) {
  try {
    parse_activity_diagram("@startuml\nif (ok?) then (yes)\n:A;\n@enduml");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(e.message().find("endif"), std::string::npos) << e.message();
  }
}

TEST(Parse, RejectsMissingMarkers) {
  EXPECT_THROW(parse_activity_diagram("start\n:A;\nstop\n@enduml\n"), ParseError);
  EXPECT_THROW(parse_activity_diagram("@startuml\nstart\n:A;\nstop\n"), ParseError);
}

TEST(Parse, RejectsUnsupportedConstructs) {
  EXPECT_THROW(parse_activity_diagram("@startuml\nstart\nwhile (x?)\n:A;\nendwhile\n@enduml\n"), ParseError);
  EXPECT_THROW(parse_activity_diagram("@startuml\n:Unterminated\n@enduml\n"), ParseError);
  EXPECT_THROW(parse_activity_diagram("@startuml\nfork\n:A;\n@enduml\n"), ParseError);
  EXPECT_THROW(parse_activity_diagram("@startuml\nend fork\n@enduml\n"), ParseError);
}

TEST(Parse, ErrorCarriesSnippet) {
  try {
    parse_activity_diagram("@startuml\nstart\nbogus line\n@enduml\n");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.snippet(), "bogus line");
    EXPECT_NE(e.Describe().find("line 3"), std::string::npos);
  }
}

TEST(Parse, IfElseAndLabels) {
  auto ast = parse_activity_diagram(
      "@startuml\nstart\nif (Compliance Verified?) then (yes)\n:Integrate;\nelse (no)\n:Develop;\nendif\nstop\n@enduml\n");
  const auto &b = As<IfBlock>(ast.elements[1]);
  EXPECT_EQ(b.condition, "Compliance Verified?");
  EXPECT_EQ(b.then_label, "yes");
  ASSERT_TRUE(b.else_label);
  EXPECT_EQ(*b.else_label, "no");
  ASSERT_TRUE(b.else_body);
  EXPECT_EQ(As<Activity>(b.else_body->at(0)).label, "Develop");
}

TEST(Parse, ReferenceFixtureStructure) {
  auto ast = parse_activity_diagram(rvsc::test::read_fixture("riscv_process.puml"), "riscv_process.puml");
  int lanes = 0, notes = 0;
  std::function<void(const Block &)> walk = [&](const Block &b) {
    for (const auto &e : b) {
      if (std::holds_alternative<LaneSwitch>(e.node)) ++lanes;
      if (std::holds_alternative<Note>(e.node)) ++notes;
      if (auto *r = std::get_if<RepeatBlock>(&e.node)) walk(r->body);
      if (auto *f = std::get_if<ForkBlock>(&e.node))
        for (const auto &br : f->branches) walk(br);
      if (auto *i = std::get_if<IfBlock>(&e.node)) {
        walk(i->then_body);
        if (i->else_body) walk(*i->else_body);
      }
    }
  };
  walk(ast.elements);
  EXPECT_EQ(lanes, 8);
  EXPECT_EQ(notes, 9);
}

TEST(Serialize, MinimalDiagram) {
  DiagramAst ast;
  ast.elements = {{StartMarker{}}, {Activity{"Do X"}}, {StopMarker{}}};
  EXPECT_EQ(serialize_ast(ast), "@startuml\nstart\n:Do X;\nstop\n@enduml\n");
}

TEST(Serialize, ForkBranchesInOrder) {
  DiagramAst ast;
  ast.elements = {{StartMarker{}}, {ForkBlock{{{{Activity{"A"}}}, {{Activity{"B"}}}}}}, {StopMarker{}}};
  EXPECT_EQ(serialize_ast(ast), "@startuml\nstart\nfork\n  :A;\nfork again\n  :B;\nend fork\nstop\n@enduml\n");
}

TEST(Serialize, CanonicalFormIsAFixpoint) {
  const char *messy =
      "@startuml\r\n  start\r\n|Lane A|\r\n   :A;\r\nnote left: first\r\nrepeat\r\n:B;\r\nrepeat while (more?) is (yes)\r\n"
      "stop\r\n@enduml";
  auto once = serialize_ast(parse_activity_diagram(messy));
  EXPECT_EQ(serialize_ast(parse_activity_diagram(once)), once);
  EXPECT_EQ(once.back(), '\n');
  EXPECT_EQ(once.find('\r'), std::string::npos);
}
