#pragma once

#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "scw/gsn.hpp"

namespace scw::testing {

// Random structurally well-formed case: unique ids, every endpoint declared,
// edges drawn from the allowed connection matrix, no duplicate edges.
inline SafetyCase random_case(std::mt19937& rng, int min_elements = 1, int max_elements = 50) {
  static const char* const kWords[] = {"hazard", "system", "is",     "mitigated", "sensor", "data", "the",
                                       "safe",   "of",     "all",    "requirements", "met", "argument",
                                       "over",   "x-ray",  "(DAO)",  "ML:",      "rate,", "5%",   "tests"};
  static const ElementKind kKinds[] = {ElementKind::Goal,    ElementKind::Strategy,   ElementKind::Solution,
                                       ElementKind::Context, ElementKind::Assumption, ElementKind::Justification};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  SafetyCase sc;
  sc.title = pick(0, 3) == 0 ? "" : "Case " + std::to_string(pick(1, 999));
  const int n = pick(min_elements, max_elements);
  int counters[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const int k = i == 0 ? 0 : pick(0, 5);
    const std::string id = std::string(id_prefix(kKinds[k])) + std::to_string(++counters[k]);
    std::string text;
    const int words = pick(1, 8);
    for (int w = 0; w < words; ++w) {
      if (w) text += ' ';
      text += kWords[pick(0, 19)];
    }
    std::set<Decorator> decorators;
    if (pick(0, 5) == 0) decorators.insert(Decorator::Undeveloped);
    if (pick(0, 9) == 0) decorators.insert(Decorator::Uninstantiated);
    if (pick(0, 9) == 0) decorators.insert(Decorator::OffDiagram);
    sc.elements.push_back(GsnElement{id, kKinds[k], text, decorators});
  }
  std::set<std::tuple<std::string, std::string, RelationshipKind>> seen;
  const int edges = pick(0, 2 * n);
  for (int e = 0; e < edges; ++e) {
    const auto& s = sc.elements[static_cast<std::size_t>(pick(0, n - 1))];
    const auto& t = sc.elements[static_cast<std::size_t>(pick(0, n - 1))];
    const auto rel = pick(0, 1) ? RelationshipKind::SupportedBy : RelationshipKind::InContextOf;
    if (s.id == t.id || !allowed_connection(s.kind, t.kind, rel)) continue;
    if (!seen.emplace(s.id, t.id, rel).second) continue;
    sc.relationships.push_back(Relationship{s.id, t.id, rel});
  }
  return sc;
}

}  // namespace scw::testing
