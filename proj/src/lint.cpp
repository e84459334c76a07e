#include <algorithm>
#include <cctype>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scw/gsn.hpp"

// Text-form heuristics for element statements. Claims (goals, assumptions,
// justifications) should read as a noun phrase plus a verb phrase; contexts
// and solutions as a bare noun phrase. The lexicons below are frozen: changing
// them changes which warnings a given case produces.

namespace scw {

namespace {

// Auxiliaries and modals. Their presence marks a full clause.
constexpr std::string_view kClauseMarkers[] = {
    "am",   "are",   "be",    "been",  "being", "can",    "could", "did",
    "do",   "does",  "had",   "has",   "have",  "is",     "may",   "might",
    "must", "shall", "should", "was",  "were",  "will",   "would", "cannot",
};

constexpr std::string_view kCommonVerbs[] = {
    "achieve", "achieves", "adhere",   "adheres",   "align",     "aligns",    "allow",
    "allows",  "apply",    "applies",  "assure",    "assures",   "avoid",     "avoids",
    "cause",   "causes",   "comply",   "complies",  "contain",   "contains",  "control",
    "controls", "demonstrate", "demonstrates", "detect", "detects", "eliminate", "eliminates",
    "ensure",  "ensures",  "exceed",   "exceeds",   "fail",      "fails",     "fulfil",
    "fulfils", "fulfill",  "fulfills", "hold",      "holds",     "meet",      "meets",
    "mitigate", "mitigates", "operate", "operates", "perform",   "performs",  "prevent",
    "prevents", "protect", "protects", "remain",    "remains",   "satisfy",   "satisfies",
    "work",    "works",
};

// Nouns that would otherwise pass the -s / -ed / -ing suffix test.
constexpr std::string_view kNounExceptions[] = {
    "analyses",  "anything",   "basis",     "building",  "ceiling",   "during",   "engineering",
    "evidence",  "everything", "factors",   "feed",      "hazards",   "hundred",  "means",
    "need",      "needs",      "nothing",   "procedures", "process",  "records",  "regulations",
    "requirements", "results", "rules",     "seed",      "series",    "something", "speed",
    "spring",    "standards",  "status",    "string",    "systems",   "tests",    "thing",
    "things",    "training",   "warning",   "warnings",  "sensors",
};

bool contains(std::span<const std::string_view> lexicon, std::string_view token) {
  return std::find(lexicon.begin(), lexicon.end(), token) != lexicon.end();
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  bool has_letter = false;
  auto flush = [&] {
    if (!current.empty() && has_letter) out.push_back(current);
    current.clear();
    has_letter = false;
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
      has_letter = has_letter || std::isalpha(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

bool has_verb_suffix(std::string_view t) {
  if (t.size() >= 5 && t.ends_with("ing")) return true;
  if (t.size() >= 4 && t.ends_with("ed")) return true;
  if (t.size() >= 4 && t.ends_with("s")) {
    return !t.ends_with("ss") && !t.ends_with("us") && !t.ends_with("is");
  }
  return false;
}

bool is_verb_like(std::string_view token) {
  if (contains(kClauseMarkers, token) || contains(kCommonVerbs, token)) return true;
  return !contains(kNounExceptions, token) && has_verb_suffix(token);
}

}  // namespace

std::vector<Diagnostic> semantic_lint(const GsnElement& element) {
  std::vector<Diagnostic> out;
  const auto tokens = word_tokens(element.text);
  switch (element.kind) {
    case ElementKind::Goal:
    case ElementKind::Assumption:
    case ElementKind::Justification: {
      const bool verb = std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) { return is_verb_like(t); });
      if (tokens.size() < 2 || !verb) {
        out.push_back(Diagnostic::make(
            "W3", element.id,
            std::string(to_string(element.kind)) + " text should be a noun phrase plus a verb phrase"));
      }
      break;
    }
    case ElementKind::Context:
    case ElementKind::Solution: {
      const auto it = std::find_if(tokens.begin(), tokens.end(),
                                   [](const std::string& t) { return contains(kClauseMarkers, t); });
      if (it != tokens.end()) {
        out.push_back(Diagnostic::make(
            "W4", element.id,
            std::string(to_string(element.kind)) + " text reads as a full clause ('" + *it +
                "'); expected a noun phrase"));
      }
      break;
    }
    case ElementKind::Strategy:
      break;
  }
  return out;
}

}  // namespace scw
