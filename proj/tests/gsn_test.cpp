#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "scw/corpus.hpp"
#include "scw/gsn.hpp"
#include "support/random_case.hpp"

namespace scw {
namespace {

using K = ElementKind;
using R = RelationshipKind;

SafetyCase make_case(std::vector<GsnElement> elements, std::vector<Relationship> rels = {}) {
  SafetyCase sc;
  sc.elements = std::move(elements);
  sc.relationships = std::move(rels);
  return sc;
}

std::vector<std::string> codes(const std::vector<Diagnostic>& diags) {
  std::vector<std::string> out;
  for (const auto& d : diags) out.push_back(d.code);
  return out;
}

bool has_code(const std::vector<Diagnostic>& diags, std::string_view code, std::string_view subject) {
  return std::any_of(diags.begin(), diags.end(),
                     [&](const Diagnostic& d) { return d.code == code && d.subject == subject; });
}

TEST(KindFromId, PrefixesAndMalformedIds) {
  EXPECT_EQ(kind_from_id("G1"), K::Goal);
  EXPECT_EQ(kind_from_id("S12"), K::Strategy);
  EXPECT_EQ(kind_from_id("Sn1"), K::Solution);
  EXPECT_EQ(kind_from_id("C3"), K::Context);
  EXPECT_EQ(kind_from_id("A1"), K::Assumption);
  EXPECT_EQ(kind_from_id("J7"), K::Justification);
  EXPECT_FALSE(kind_from_id("G0"));
  EXPECT_FALSE(kind_from_id("G01"));
  EXPECT_FALSE(kind_from_id("G"));
  EXPECT_FALSE(kind_from_id("X1"));
  EXPECT_FALSE(kind_from_id("g1"));
  EXPECT_FALSE(kind_from_id("Sn"));
  EXPECT_FALSE(kind_from_id("G1a"));
}

TEST(MakeElement, RejectsBadInput) {
  EXPECT_EQ(make_element("Sn2", "Test report").kind, K::Solution);
  EXPECT_THROW(make_element("Q1", "x"), InvalidElement);
  EXPECT_THROW(make_element("G1", ""), InvalidElement);
  EXPECT_THROW(make_element("G1", "two\nlines"), InvalidElement);
}

TEST(AllowedConnection, SpecExamples) {
  EXPECT_TRUE(allowed_connection(K::Goal, K::Solution, R::SupportedBy));
  EXPECT_TRUE(allowed_connection(K::Strategy, K::Goal, R::SupportedBy));
  EXPECT_FALSE(allowed_connection(K::Solution, K::Goal, R::SupportedBy));
  EXPECT_FALSE(allowed_connection(K::Context, K::Context, R::InContextOf));
  EXPECT_FALSE(allowed_connection(K::Goal, K::Context, R::SupportedBy));
  EXPECT_FALSE(allowed_connection(K::Strategy, K::Strategy, R::SupportedBy));
  EXPECT_FALSE(allowed_connection(K::Strategy, K::Solution, R::SupportedBy));
}

TEST(AllowedConnection, ExactlyTenTriples) {
  int allowed = 0;
  int total = 0;
  for (auto s : kAllElementKinds)
    for (auto t : kAllElementKinds)
      for (auto r : kAllRelationshipKinds) {
        ++total;
        allowed += allowed_connection(s, t, r) ? 1 : 0;
      }
  EXPECT_EQ(total, 72);
  EXPECT_EQ(allowed, 10);
}

TEST(Diagnostic, SeverityFromCode) {
  EXPECT_EQ(Diagnostic::make("E3", "x", "m").severity, Severity::Error);
  EXPECT_EQ(Diagnostic::make("W1", "x", "m").severity, Severity::Warning);
  Diagnostic d = Diagnostic::make("E3", "Sn1 supportedBy G1", "not allowed");
  EXPECT_NE(format_diagnostic(d).find("E3"), std::string::npos);
  d.line = 4;
  EXPECT_NE(format_diagnostic(d).find("line 4"), std::string::npos);
}

TEST(Validate, MapSystemIsClean) {
  const auto& sc = corpus::get("map-system").safety_case;
  EXPECT_TRUE(validate(sc).empty()) << codes(validate(sc)).size();
  EXPECT_EQ(root_of(sc), "G1");
}

TEST(Validate, SkeletonsHaveNoErrors) {
  for (const char* label : {"xray", "ml-tnr"}) {
    EXPECT_FALSE(has_errors(validate(corpus::get(label).safety_case))) << label;
  }
}

TEST(Validate, SolutionSupportingGoalIsE3AndE6) {
  auto sc = make_case({make_element("G1", "System is safe"), make_element("Sn1", "Test report")},
                      {{"Sn1", "G1", R::SupportedBy}});
  const auto diags = validate(sc);
  EXPECT_TRUE(has_code(diags, "E3", "Sn1 supportedBy G1"));
  EXPECT_TRUE(has_code(diags, "E6", "Sn1"));
}

TEST(Validate, CycleIsE4) {
  auto sc = make_case({make_element("G1", "System is safe"), make_element("G2", "Hazards are mitigated")},
                      {{"G1", "G2", R::SupportedBy}, {"G2", "G1", R::SupportedBy}});
  const auto diags = validate(sc);
  EXPECT_TRUE(has_code(diags, "E4", "G1"));
  // Both goals have incoming edges, so there is no root either.
  EXPECT_TRUE(has_code(diags, "E5", ""));
}

TEST(Validate, OneE4PerStronglyConnectedComponent) {
  auto sc = make_case({make_element("G1", "Top claim holds"), make_element("G2", "A holds"),
                       make_element("G3", "B holds"), make_element("G4", "C holds"), make_element("G5", "D holds")},
                      {{"G1", "G2", R::SupportedBy},
                       {"G2", "G3", R::SupportedBy},
                       {"G3", "G2", R::SupportedBy},
                       {"G1", "G4", R::SupportedBy},
                       {"G4", "G5", R::SupportedBy},
                       {"G5", "G4", R::SupportedBy}});
  const auto diags = validate(sc);
  const auto c = codes(diags);
  EXPECT_EQ(std::count(c.begin(), c.end(), "E4"), 2);
  EXPECT_TRUE(has_code(diags, "E4", "G2"));
  EXPECT_TRUE(has_code(diags, "E4", "G4"));
}

TEST(Validate, UnknownEndpointAndDuplicateId) {
  auto sc = make_case({make_element("G1", "System is safe"), make_element("G1", "System is safe again")},
                      {{"G1", "Sn9", R::SupportedBy}});
  const auto diags = validate(sc);
  EXPECT_TRUE(has_code(diags, "E1", "G1 supportedBy Sn9"));
  EXPECT_TRUE(has_code(diags, "E2", "G1"));
}

TEST(Validate, RootCount) {
  EXPECT_TRUE(has_code(validate(SafetyCase{}), "E5", ""));
  auto two = make_case({make_element("G1", "System is safe"), make_element("G2", "Hazards are mitigated")});
  EXPECT_TRUE(has_code(validate(two), "E5", ""));
  EXPECT_FALSE(root_of(two));
  ValidateOptions opts;
  opts.allow_multiple_roots = true;
  EXPECT_FALSE(has_code(validate(two, opts), "E5", ""));
  EXPECT_FALSE(root_of(SafetyCase{}));
}

TEST(Validate, LoneGoalOnlyWarnsW1) {
  auto sc = make_case({make_element("G1", "System is safe")});
  EXPECT_EQ(codes(validate(sc)), std::vector<std::string>{"W1"});
  sc.elements[0].decorators.insert(Decorator::Undeveloped);
  EXPECT_TRUE(validate(sc).empty());
}

TEST(Validate, StrategyWithoutGoalIsW2) {
  auto sc = make_case({make_element("G1", "System is safe"), make_element("S1", "Argument over hazards")},
                      {{"G1", "S1", R::SupportedBy}});
  EXPECT_TRUE(has_code(validate(sc), "W2", "S1"));
}

TEST(Validate, OrderedByCodeThenNaturalSubject) {
  auto sc = make_case({make_element("G10", "Claim"), make_element("G2", "Claim"), make_element("C1", "The map is wrong")},
                      {{"C1", "G2", R::SupportedBy}});
  const auto diags = validate(sc);
  for (std::size_t i = 1; i < diags.size(); ++i) EXPECT_LE(diags[i - 1].code, diags[i].code);
  std::vector<std::string> w3;
  for (const auto& d : diags)
    if (d.code == "W3") w3.push_back(d.subject);
  EXPECT_EQ(w3, (std::vector<std::string>{"G2", "G10"}));
  EXPECT_EQ(validate(sc), diags);  // pure
}

TEST(Validate, RemovingEdgesNeverAddsConnectionErrors) {
  std::mt19937 rng(7);
  for (int iter = 0; iter < 50; ++iter) {
    auto sc = testing::random_case(rng, 2, 15);
    // Sprinkle disallowed edges among the valid ones.
    for (std::size_t i = 0; i + 1 < sc.elements.size(); i += 3) {
      sc.relationships.push_back({sc.elements[i + 1].id, sc.elements[i].id, R::SupportedBy});
    }
    auto count = [](const SafetyCase& c) {
      const auto d = validate(c);
      return std::count_if(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "E3" || x.code == "E6"; });
    };
    const auto before = count(sc);
    while (!sc.relationships.empty()) {
      sc.relationships.pop_back();
      const auto after = count(sc);
      EXPECT_LE(after, before);
    }
  }
}

TEST(SemanticLint, Examples) {
  EXPECT_TRUE(semantic_lint(make_element("G1", "Map system is acceptably safe to operate")).empty());
  EXPECT_EQ(codes(semantic_lint(make_element("G1", "Safety"))), std::vector<std::string>{"W3"});
  EXPECT_EQ(codes(semantic_lint(make_element("C1", "The system is safe"))), std::vector<std::string>{"W4"});
  EXPECT_TRUE(semantic_lint(make_element("C1", "Definition of the map system")).empty());
  EXPECT_TRUE(semantic_lint(make_element("Sn1", "Execution of the safety rules")).empty());
  EXPECT_TRUE(semantic_lint(make_element("S1", "is is is")).empty());
  EXPECT_TRUE(semantic_lint(make_element("A1", "All hazards have been identified")).empty());
  EXPECT_TRUE(semantic_lint(make_element("G3", "Hazard H1 has been eliminated")).empty());
  EXPECT_TRUE(semantic_lint(make_element("J1", "Hazard analysis follows the standard")).empty());
}

TEST(SemanticLint, SuffixHeuristic) {
  // -ed and -ing count; lexicon nouns ending in -s do not.
  EXPECT_TRUE(semantic_lint(make_element("G1", "Hazards mitigated")).empty());
  EXPECT_TRUE(semantic_lint(make_element("G1", "Software testing")).empty());
  EXPECT_FALSE(semantic_lint(make_element("G1", "Safety requirements")).empty());
  EXPECT_FALSE(semantic_lint(make_element("G1", "Process status")).empty());
}

}  // namespace
}  // namespace scw
