#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scw {

enum class ElementKind { Goal, Strategy, Solution, Context, Assumption, Justification };

enum class RelationshipKind { SupportedBy, InContextOf };

enum class Decorator { Undeveloped, Uninstantiated, OffDiagram };

inline constexpr ElementKind kAllElementKinds[] = {
    ElementKind::Goal,    ElementKind::Strategy,   ElementKind::Solution,
    ElementKind::Context, ElementKind::Assumption, ElementKind::Justification,
};

inline constexpr RelationshipKind kAllRelationshipKinds[] = {
    RelationshipKind::SupportedBy,
    RelationshipKind::InContextOf,
};

std::string_view to_string(ElementKind kind);
std::string_view to_string(RelationshipKind kind);
std::string_view to_string(Decorator decorator);

/// Id prefix used for a kind: G, S, Sn, C, A, J.
std::string_view id_prefix(ElementKind kind);

/// Kind implied by an element id ("Sn" is tested before "S"). Returns nullopt
/// unless the id is a known prefix followed by a positive decimal integer.
std::optional<ElementKind> kind_from_id(std::string_view id);

struct GsnElement {
  std::string id;
  ElementKind kind = ElementKind::Goal;
  std::string text;
  std::set<Decorator> decorators;

  bool has(Decorator d) const { return decorators.count(d) != 0; }
  friend bool operator==(const GsnElement&, const GsnElement&) = default;
};

struct Relationship {
  std::string source;
  std::string target;
  RelationshipKind kind = RelationshipKind::SupportedBy;

  friend bool operator==(const Relationship&, const Relationship&) = default;
};

/// "G1 supportedBy G2"; also the subject string used by relationship diagnostics.
std::string describe(const Relationship& rel);

struct SafetyCase {
  std::string title;
  std::vector<GsnElement> elements;
  std::vector<Relationship> relationships;

  /// First element with the given id, or nullptr.
  const GsnElement* find(std::string_view id) const;

  friend bool operator==(const SafetyCase&, const SafetyCase&) = default;
};

class InvalidElement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Builds an element whose kind is derived from the id prefix. Throws
/// InvalidElement for a malformed id, empty text or text with a line break.
GsnElement make_element(std::string id, std::string text, std::set<Decorator> decorators = {});

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string subject;
  std::string message;
  int line = 0;    // 1-based source line, 0 when not tied to a document
  int column = 0;  // 1-based

  /// Severity is taken from the code letter: E -> Error, W -> Warning.
  static Diagnostic make(std::string code, std::string subject, std::string message);

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string_view to_string(Severity severity);

/// "error E3 [Sn1 supportedBy G1]: ..." with an optional "line N:" prefix.
std::string format_diagnostic(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// --- rule engine ----------------------------------------------------------

/// Structural connection matrix. SupportedBy: Goal->Goal, Goal->Strategy,
/// Goal->Solution, Strategy->Goal. InContextOf: Goal and Strategy to
/// Context, Assumption, Justification. Everything else is disallowed.
constexpr bool allowed_connection(ElementKind source, ElementKind target, RelationshipKind rel) {
  using K = ElementKind;
  if (rel == RelationshipKind::SupportedBy) {
    if (source == K::Goal) {
      return target == K::Goal || target == K::Strategy || target == K::Solution;
    }
    return source == K::Strategy && target == K::Goal;
  }
  if (source != K::Goal && source != K::Strategy) return false;
  return target == K::Context || target == K::Assumption || target == K::Justification;
}

struct ValidateOptions {
  bool allow_multiple_roots = false;
};

/// Structural checks E1..E6, completeness warnings W1/W2 and the semantic
/// lints W3/W4. Sorted by code, then subject.
std::vector<Diagnostic> validate(const SafetyCase& sc, const ValidateOptions& options = {});

/// W3/W4 text-form heuristics for a single element.
std::vector<Diagnostic> semantic_lint(const GsnElement& element);

/// The unique Goal with no incoming SupportedBy edge.
std::optional<std::string> root_of(const SafetyCase& sc);

}  // namespace scw
