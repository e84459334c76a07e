#include <gtest/gtest.h>

#include <random>

#include "scw/corpus.hpp"
#include "scw/prose.hpp"
#include "support/random_case.hpp"

namespace scw::prose {
namespace {

using R = RelationshipKind;

std::vector<std::string> codes(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const auto& d : diags) out.push_back(d.code);
  return out;
}

TEST(ParseStrict, TwoElementsOneContextEdge) {
  const auto out = parse_strict(
      "G1: The map system is acceptably safe to operate.\nC1: Definition of the map system\nG1 inContextOf C1");
  ASSERT_TRUE(out.ok());
  ASSERT_EQ(out.safety_case->elements.size(), 2u);
  ASSERT_EQ(out.safety_case->relationships.size(), 1u);
  EXPECT_EQ(out.safety_case->relationships[0], (Relationship{"G1", "C1", R::InContextOf}));
  EXPECT_EQ(out.safety_case->elements[0].text, "The map system is acceptably safe to operate.");
}

TEST(ParseStrict, EmptyDocumentIsP5) {
  const auto out = parse_strict("");
  EXPECT_FALSE(out.ok());
  EXPECT_EQ(codes(out.diagnostics), std::vector<std::string>{"P5"});
  EXPECT_EQ(codes(parse_strict("# only a comment\n\n").diagnostics), std::vector<std::string>{"P5"});
}

TEST(ParseStrict, SnPrefixWins) {
  const auto out = parse_strict("Sn1: Execution of the safety rules");
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.safety_case->elements[0].kind, ElementKind::Solution);
}

TEST(ParseStrict, HeaderDecoratorsAndForwardReferences) {
  const auto out = parse_strict(
      "case \"Demo\"\n"
      "G1 supportedBy G2, Sn1\n"
      "G1: Top claim holds\n"
      "G2: Sub claim holds [undeveloped] [off-diagram]\n"
      "Sn1: Evidence [uninstantiated]\n");
  ASSERT_TRUE(out.ok()) << (out.diagnostics.empty() ? "" : format_diagnostic(out.diagnostics[0]));
  const auto& sc = *out.safety_case;
  EXPECT_EQ(sc.title, "Demo");
  EXPECT_EQ(sc.elements[1].text, "Sub claim holds");
  EXPECT_TRUE(sc.elements[1].has(Decorator::Undeveloped));
  EXPECT_TRUE(sc.elements[1].has(Decorator::OffDiagram));
  EXPECT_TRUE(sc.elements[2].has(Decorator::Uninstantiated));
  EXPECT_EQ(sc.relationships.size(), 2u);
}

TEST(ParseStrict, ErrorCodesWithPositions) {
  const auto out = parse_strict(
      "G1: Claim\n"
      "G1: Again\n"
      "this is not gsn\n"
      "G2: Claim [bogus]\n"
      "G1 supportedBy G9\n");
  EXPECT_FALSE(out.safety_case);
  const auto& d = out.diagnostics;
  auto find = [&](std::string_view code) {
    for (const auto& x : d)
      if (x.code == code) return x;
    return Diagnostic{};
  };
  EXPECT_EQ(find("P2").line, 2);
  EXPECT_EQ(find("P1").line, 3);
  EXPECT_EQ(find("P4").line, 4);
  EXPECT_EQ(find("P4").column, 11);
  EXPECT_EQ(find("P3").line, 5);
}

TEST(ParseStrict, MalformedVariants) {
  EXPECT_FALSE(parse_strict("G1:   ").ok());
  EXPECT_FALSE(parse_strict("G0: zero id").ok());
  EXPECT_FALSE(parse_strict("G1: a\nG1 supportedBy G1").ok());
  EXPECT_FALSE(parse_strict("G1: a\nG1 supportedBy").ok());
  EXPECT_FALSE(parse_strict("G1: a\ncase \"late\"").ok());
  EXPECT_TRUE(parse_strict("G1: a\r\nG2: b\r\nG1 supportedBy G2\r\n").ok());
}

TEST(ParseStrict, TotalOnArbitraryBytes) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 300; ++i) {
    std::string s;
    for (int j = 0; j < 80; ++j) s += static_cast<char>(byte(rng));
    EXPECT_NO_THROW(parse_strict(s));
    EXPECT_NO_THROW(parse_lenient(s));
  }
}

TEST(ParseLenient, ConnectorUnderElement) {
  const auto out = parse_lenient("G1: Top claim\n  supported by: G2, S1\nG2: Sub claim\nS1: Argument over hazards");
  ASSERT_TRUE(out.safety_case);
  EXPECT_EQ(out.safety_case->elements.size(), 3u);
  ASSERT_EQ(out.safety_case->relationships.size(), 2u);
  for (const auto& r : out.safety_case->relationships) EXPECT_EQ(r.kind, R::SupportedBy);
  EXPECT_TRUE(out.diagnostics.empty());
}

TEST(ParseLenient, ChattyLineIsP1Warning) {
  const auto out = parse_lenient("Hello, here is your safety case!");
  ASSERT_TRUE(out.safety_case);
  EXPECT_TRUE(out.safety_case->elements.empty());
  ASSERT_EQ(out.diagnostics.size(), 1u);
  EXPECT_EQ(out.diagnostics[0].code, "P1");
  EXPECT_EQ(out.diagnostics[0].severity, Severity::Warning);
}

TEST(ParseLenient, ComplianceGoalExcerpt) {
  const auto out = parse_lenient(
      "G5: Compliance with all relevant safety standards and regulations.\n"
      "  Supported by: S3\n"
      "S3: Argument based on compliance evidence\n"
      "  Supported by: G6, G7\n"
      "G6: Machine design adheres to safety standards\n"
      "G7: Operational procedures align with safety regulations\n");
  ASSERT_TRUE(out.safety_case);
  const auto* g = out.safety_case->find("G5");
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->kind, ElementKind::Goal);
  EXPECT_EQ(g->text, "Compliance with all relevant safety standards and regulations.");
  EXPECT_EQ(out.safety_case->relationships.size(), 3u);
}

TEST(ParseLenient, MarkdownBulletsAndKindWords) {
  const auto out = parse_lenient(
      "# Safety case\n"
      "**G1 (Goal):** The system is safe\n"
      "- In context of: C1\n"
      "- Supported by:\n"
      "  - S1\n"
      "**C1 (Context):** Operating environment\n"
      "Strategy S1: Argument over hazards\n"
      "  * G2 and G3\n"
      "Goal G2: Hazard A is mitigated\n"
      "Goal G3: Hazard B is mitigated\n");
  ASSERT_TRUE(out.safety_case);
  const auto& sc = *out.safety_case;
  EXPECT_EQ(sc.elements.size(), 5u);
  const std::vector<Relationship> expected{{"G1", "C1", R::InContextOf},
                                           {"G1", "S1", R::SupportedBy},
                                           {"S1", "G2", R::SupportedBy},
                                           {"S1", "G3", R::SupportedBy}};
  EXPECT_EQ(sc.relationships, expected);
}

TEST(ParseLenient, DropsUndeclaredSelfAndDuplicateEdges) {
  const auto out = parse_lenient("G1: Claim\nG1: Second declaration\nG1 supportedBy G1, G2, Sn1\nSn1: Evidence\nG1 supportedBy Sn1");
  const auto& sc = *out.safety_case;
  EXPECT_EQ(sc.elements.size(), 2u);
  EXPECT_EQ(sc.elements[0].text, "Claim");
  EXPECT_EQ(sc.relationships, (std::vector<Relationship>{{"G1", "Sn1", R::SupportedBy}}));
  const auto c = codes(out.diagnostics);
  EXPECT_NE(std::find(c.begin(), c.end(), "P2"), c.end());
  EXPECT_NE(std::find(c.begin(), c.end(), "P3"), c.end());
  for (const auto& d : out.diagnostics) EXPECT_EQ(d.severity, Severity::Warning);
}

TEST(ParseLenient, DottedIdsAreNotElements) {
  const auto out = parse_lenient("Sn1.1: sub evidence");
  EXPECT_TRUE(out.safety_case->elements.empty());
}

TEST(Serialize, SingleElement) {
  SafetyCase sc;
  sc.elements.push_back(make_element("G1", "Top claim"));
  EXPECT_EQ(serialize(sc), "case \"\"\nG1: Top claim\n");
}

TEST(Serialize, GroupsConsecutiveRunsBySourceAndKind) {
  const auto& sc = corpus::get("map-system").safety_case;
  const auto text = serialize(sc);
  EXPECT_NE(text.find("G1 inContextOf C1, C2\n"), std::string::npos);
  const auto back = parse_strict(text);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back.safety_case, sc);
  EXPECT_TRUE(validate(*back.safety_case).empty());
}

TEST(Serialize, RejectsLineBreaks) {
  SafetyCase sc;
  sc.elements.push_back(GsnElement{"G1", ElementKind::Goal, "a\nb", {}});
  EXPECT_THROW(serialize(sc), SerializeError);
  sc.elements[0].text = "ok";
  sc.title = "two\nlines";
  EXPECT_THROW(serialize(sc), SerializeError);
}

TEST(RoundTrip, RandomCasesStrict) {
  std::mt19937 rng(20240917);
  for (int i = 0; i < 100; ++i) {
    const auto sc = testing::random_case(rng);
    const auto text = serialize(sc);
    const auto back = parse_strict(text);
    ASSERT_TRUE(back.ok()) << text;
    ASSERT_EQ(*back.safety_case, sc) << text;
    EXPECT_EQ(serialize(*back.safety_case), text);
  }
}

TEST(RoundTrip, RandomCasesLenientRecoversElementsAndEdges) {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto sc = testing::random_case(rng);
    const auto back = parse_lenient(serialize(sc));
    ASSERT_TRUE(back.safety_case);
    EXPECT_EQ(back.safety_case->elements, sc.elements);
    EXPECT_EQ(back.safety_case->relationships, sc.relationships);
  }
}

}  // namespace
}  // namespace scw::prose
