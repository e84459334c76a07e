#include "scw/corpus.hpp"

#include <stdexcept>

namespace scw::corpus {

namespace {

struct Entry {
  const char* id;
  const char* text;
  Provenance provenance;
};

struct Edge {
  const char* source;
  const char* target;
  RelationshipKind kind;
};

constexpr auto kQ = Provenance::Quoted;
constexpr auto kR = Provenance::Reconstructed;
constexpr auto kSup = RelationshipKind::SupportedBy;
constexpr auto kCtx = RelationshipKind::InContextOf;

CorpusCase build(std::string label, std::string title, std::initializer_list<Entry> entries,
                 std::initializer_list<Edge> edges) {
  CorpusCase out;
  out.label = std::move(label);
  out.safety_case.title = std::move(title);
  for (const auto& e : entries) {
    out.safety_case.elements.push_back(make_element(e.id, e.text));
    out.provenance.emplace(e.id, e.provenance);
  }
  for (const auto& r : edges) {
    out.safety_case.relationships.push_back(Relationship{r.source, r.target, r.kind});
  }
  return out;
}

std::vector<CorpusCase> make_corpus() {
  std::vector<CorpusCase> cases;

  cases.push_back(build(
      "map-system", "Map system",
      {
          {"G1", "The map system is acceptably safe to operate", kQ},
          {"C1", "Definition of the map system", kQ},
          {"C2", "Role and context of the map", kQ},
          {"G2", "All identified hazards have been eliminated or sufficiently mitigated for safe operation", kQ},
          {"S2", "Argument over each identified hazard", kQ},
          {"A1", "All hazards have been identified", kQ},
          {"G3", "Hazard H1 has been eliminated", kQ},
          {"C3", "Hazards identified from DAO (Dysfunctional Analysis Ontology)", kQ},
          {"Sn1", "Execution of the safety rules", kQ},
      },
      {
          {"G1", "C1", kCtx},
          {"G1", "C2", kCtx},
          {"G1", "G2", kSup},
          {"G2", "S2", kSup},
          {"S2", "A1", kCtx},
          {"S2", "G3", kSup},
          {"G3", "C3", kCtx},
          {"G3", "Sn1", kSup},
      }));

  // Sn-to-subgoal attachment is balanced across G2/G3.
  cases.push_back(build(
      "xray", "X-ray machine",
      {
          {"G1", "Elimination of all factors leading to overradiation", kQ},
          {"S1", "Argument over each factor that can lead to overradiation", kR},
          {"G2", "Radiation output remains within the configured dose limit", kR},
          {"G3", "Failures of the beam control hardware are detected and contained", kR},
          {"Sn1", "Dose calibration test results", kR},
          {"Sn2", "Beam current monitor verification report", kR},
          {"Sn3", "Hardware interlock test results", kR},
          {"Sn4", "Fault tree analysis of the beam control unit", kR},
      },
      {
          {"G1", "S1", kSup},
          {"S1", "G2", kSup},
          {"S1", "G3", kSup},
          {"G2", "Sn1", kSup},
          {"G2", "Sn2", kSup},
          {"G3", "Sn3", kSup},
          {"G3", "Sn4", kSup},
      }));

  cases.push_back(build(
      "ml-tnr", "ML algorithm for tire noise recognition",
      {
          {"G1", "The ML algorithm complies with the safety requirements allocated to its function", kQ},
          {"S1", "Argument over each safety requirement allocated to the classifier", kR},
          {"G2", "The classifier meets its performance requirements for road surface classification", kR},
          {"G3", "False positive identifications of dry road surface conditions are acceptably rare", kR},
          {"Sn1", "Training data coverage analysis", kR},
          {"Sn2", "Validation data set description", kR},
          {"Sn3", "Classifier accuracy test results", kR},
          {"Sn4", "Robustness test results under sensor noise", kR},
          {"Sn5", "False positive rate measurements on held-out recordings", kR},
          {"Sn6", "Field test records from wheel-mounted microphones", kR},
          {"Sn7", "Review of misclassification root causes", kR},
      },
      {
          {"G1", "S1", kSup},
          {"S1", "G2", kSup},
          {"S1", "G3", kSup},
          {"G2", "Sn1", kSup},
          {"G2", "Sn2", kSup},
          {"G2", "Sn3", kSup},
          {"G2", "Sn4", kSup},
          {"G3", "Sn5", kSup},
          {"G3", "Sn6", kSup},
          {"G3", "Sn7", kSup},
      }));

  return cases;
}

const std::vector<CorpusCase>& all() {
  static const std::vector<CorpusCase> cases = make_corpus();
  return cases;
}

}  // namespace

std::string_view to_string(Provenance p) {
  return p == Provenance::Quoted ? "quoted" : "reconstructed";
}

const std::vector<std::string>& labels() {
  static const std::vector<std::string> out = [] {
    std::vector<std::string> v;
    for (const auto& c : all()) v.push_back(c.label);
    return v;
  }();
  return out;
}

std::optional<std::reference_wrapper<const CorpusCase>> find(std::string_view label) {
  for (const auto& c : all()) {
    if (c.label == label) return std::cref(c);
  }
  return std::nullopt;
}

const CorpusCase& get(std::string_view label) {
  auto found = find(label);
  if (!found) throw std::out_of_range("unknown corpus case '" + std::string(label) + "'");
  return found->get();
}

}  // namespace scw::corpus
