#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scw/gsn.hpp"

// Structured-prose (.gsn.txt) format:
//
//   # comment
//   case "Map system"
//   G1: The map system is acceptably safe to operate [undeveloped]
//   C1: Definition of the map system
//
//   G1 inContextOf C1
//   G1 supportedBy G2, S2
//
// Element kinds come from id prefixes. Relationships may reference elements
// declared later in the file.
namespace scw::prose {

/// Parser diagnostic codes.
inline constexpr std::string_view kMalformedLine = "P1";
inline constexpr std::string_view kDuplicateId = "P2";
inline constexpr std::string_view kUnresolvedReference = "P3";
inline constexpr std::string_view kUnknownDecorator = "P4";
inline constexpr std::string_view kEmptyDocument = "P5";

/// Version tag of the lenient extraction rules, recorded in run manifests.
inline constexpr std::string_view kLenientRulesVersion = "lenient-v1";

struct ParseOutcome {
  std::optional<SafetyCase> safety_case;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return safety_case.has_value() && !has_errors(diagnostics); }
};

/// CRLF/CR to LF.
std::string normalize_newlines(std::string_view text);

/// Strict parse of the canonical grammar. Any P-error means no case.
ParseOutcome parse_strict(std::string_view document);

/// Best-effort extraction from free-form model output. Always yields a case;
/// problems are reported as warnings.
ParseOutcome parse_lenient(std::string_view text);

class SerializeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical text. Consecutive relationships sharing source and kind are
/// merged onto one line, so stored order survives a round trip.
std::string serialize(const SafetyCase& sc);

}  // namespace scw::prose
