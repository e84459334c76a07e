#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scw/gsn.hpp"

namespace scw::corpus {

enum class Provenance {
  Quoted,         // element wording taken from the published reference case
  Reconstructed,  // filled in where the reference text is unavailable
};

std::string_view to_string(Provenance p);

struct CorpusCase {
  std::string label;
  SafetyCase safety_case;
  std::map<std::string, Provenance> provenance;  // keyed by element id
};

/// Bundled ground-truth cases: "map-system", "xray", "ml-tnr".
const std::vector<std::string>& labels();

/// Throws std::out_of_range for an unknown label.
const CorpusCase& get(std::string_view label);

std::optional<std::reference_wrapper<const CorpusCase>> find(std::string_view label);

}  // namespace scw::corpus
