#include "scw/prose.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace scw::prose {

namespace {

constexpr std::string_view kWhitespace = " \t\f\v";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(kWhitespace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kWhitespace);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::optional<Decorator> decorator_from_tag(std::string_view tag) {
  if (tag == "undeveloped") return Decorator::Undeveloped;
  if (tag == "uninstantiated") return Decorator::Uninstantiated;
  if (tag == "off-diagram") return Decorator::OffDiagram;
  return std::nullopt;
}

bool is_tag_candidate(std::string_view tag) {
  if (tag.empty() || tag.front() < 'a' || tag.front() > 'z') return false;
  return std::all_of(tag.begin(), tag.end(), [](char c) { return (c >= 'a' && c <= 'z') || c == '-'; });
}

struct TrailingTag {
  std::string tag;
  std::size_t offset;  // position of '[' in the text
};

// Peels one "[tag]" off the end of the text, if present.
std::optional<TrailingTag> peel_tag(std::string_view text) {
  if (text.empty() || text.back() != ']') return std::nullopt;
  const auto open = text.rfind('[');
  if (open == std::string_view::npos) return std::nullopt;
  std::string_view tag = text.substr(open + 1, text.size() - open - 2);
  if (!is_tag_candidate(tag)) return std::nullopt;
  return TrailingTag{std::string(tag), open};
}

Diagnostic parser_diagnostic(std::string_view code, Severity severity, std::string subject,
                             std::string message, int line, int column) {
  Diagnostic d;
  d.severity = severity;
  d.code = std::string(code);
  d.subject = std::move(subject);
  d.message = std::move(message);
  d.line = line;
  d.column = column;
  return d;
}

const std::regex& element_line_re() {
  static const std::regex re(R"(^(Sn|G|S|C|A|J)([0-9]+):(.*)$)");
  return re;
}

const std::regex& relationship_line_re() {
  static const std::regex re(R"(^(Sn|G|S|C|A|J)([0-9]+)[ \t]+(supportedBy|inContextOf)[ \t]+(.+)$)");
  return re;
}

struct PendingRelationship {
  Relationship rel;
  int line;
};

}  // namespace

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out += '\n';
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out += text[i];
    }
  }
  return out;
}

ParseOutcome parse_strict(std::string_view document) {
  const std::string normalized = normalize_newlines(document);
  const auto lines = split_lines(normalized);

  SafetyCase sc;
  std::vector<Diagnostic> diags;
  std::vector<PendingRelationship> pending;
  std::unordered_set<std::string> declared;
  bool header_seen = false;
  bool content_seen = false;

  auto error = [&](std::string_view code, std::string subject, std::string message, int line, int column) {
    diags.push_back(parser_diagnostic(code, Severity::Error, std::move(subject), std::move(message), line, column));
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    const std::string_view raw = lines[i];
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const int indent = static_cast<int>(raw.find_first_not_of(kWhitespace));

    if (line.starts_with("case ") || line == "case") {
      const std::string_view rest = trim(line.substr(4));
      if (header_seen || content_seen) {
        error(kMalformedLine, "", "case header must appear once, before any element", lineno, indent + 1);
      } else if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"') {
        error(kMalformedLine, "", "case header must be: case \"<title>\"", lineno, indent + 1);
      } else {
        sc.title = std::string(rest.substr(1, rest.size() - 2));
      }
      header_seen = true;
      continue;
    }

    const std::string line_str(line);
    std::smatch m;
    if (std::regex_match(line_str, m, element_line_re())) {
      content_seen = true;
      const std::string id = m[1].str() + m[2].str();
      if (!kind_from_id(id)) {
        error(kMalformedLine, id, "malformed element id " + id, lineno, indent + 1);
        continue;
      }
      std::string_view text = trim(std::string_view(line).substr(static_cast<std::size_t>(m.position(3))));
      std::set<Decorator> decorators;
      bool bad_tag = false;
      while (auto tag = peel_tag(text)) {
        if (auto d = decorator_from_tag(tag->tag)) {
          decorators.insert(*d);
        } else {
          const int column = static_cast<int>(text.data() - raw.data() + tag->offset) + 1;
          error(kUnknownDecorator, id, "unknown decorator tag [" + tag->tag + "]", lineno, column);
          bad_tag = true;
        }
        text = trim(text.substr(0, tag->offset));
      }
      if (text.empty()) {
        error(kMalformedLine, id, "element " + id + " has no text", lineno, indent + 1);
        continue;
      }
      if (bad_tag) continue;
      if (!declared.insert(id).second) {
        error(kDuplicateId, id, "duplicate element id " + id, lineno, indent + 1);
        continue;
      }
      sc.elements.push_back(GsnElement{id, *kind_from_id(id), std::string(text), std::move(decorators)});
      continue;
    }

    if (std::regex_match(line_str, m, relationship_line_re())) {
      content_seen = true;
      const std::string source = m[1].str() + m[2].str();
      const RelationshipKind kind =
          m[3].str() == "supportedBy" ? RelationshipKind::SupportedBy : RelationshipKind::InContextOf;
      if (!kind_from_id(source)) {
        error(kMalformedLine, source, "malformed element id " + source, lineno, indent + 1);
        continue;
      }
      std::vector<PendingRelationship> rels;
      bool ok = true;
      std::string_view targets = m[4].first == m[4].second ? std::string_view{}
                                                           : std::string_view(&*m[4].first, m[4].length());
      std::size_t offset = static_cast<std::size_t>(m.position(4));
      while (ok) {
        const auto comma = targets.find(',');
        const std::string_view piece = comma == std::string_view::npos ? targets : targets.substr(0, comma);
        const std::string target(trim(piece));
        const int column = indent + 1 + static_cast<int>(offset);
        if (!kind_from_id(target)) {
          error(kMalformedLine, source, "malformed target id '" + target + "'", lineno, column);
          ok = false;
        } else if (target == source) {
          error(kMalformedLine, source, "relationship from " + source + " to itself", lineno, column);
          ok = false;
        } else {
          rels.push_back({Relationship{source, target, kind}, lineno});
        }
        if (comma == std::string_view::npos) break;
        targets.remove_prefix(comma + 1);
        offset += comma + 1;
      }
      if (ok) pending.insert(pending.end(), rels.begin(), rels.end());
      continue;
    }

    error(kMalformedLine, "", "unrecognized line", lineno, indent + 1);
  }

  for (const auto& p : pending) {
    for (const std::string* end : {&p.rel.source, &p.rel.target}) {
      if (!declared.contains(*end)) {
        error(kUnresolvedReference, describe(p.rel), "relationship references undeclared id " + *end, p.line, 1);
      }
    }
    sc.relationships.push_back(p.rel);
  }

  if (sc.elements.empty() && sc.relationships.empty() && diags.empty()) {
    error(kEmptyDocument, "", "document declares no elements", 0, 0);
  }

  ParseOutcome outcome;
  outcome.diagnostics = std::move(diags);
  if (!has_errors(outcome.diagnostics)) outcome.safety_case = std::move(sc);
  return outcome;
}

// --- lenient extraction ----------------------------------------------------

namespace {

const std::regex& lenient_element_re() {
  static const std::regex re(
      R"(^(?:(?:Goal|Strategy|Solution|Context|Assumption|Justification)[ \t]*)?\(?(Sn|G|S|C|A|J)([0-9]+)(?![.][0-9])\)?(?:[ \t]*\((?:Goal|Strategy|Solution|Context|Assumption|Justification)\))?[ \t]*[:.\-][ \t]*(.+)$)");
  return re;
}

const std::regex& lenient_explicit_rel_re() {
  static const std::regex re(
      R"(^(Sn|G|S|C|A|J)([0-9]+)[ \t]*[:\-]?[ \t]*(?:is[ \t]+)?(supported[ \t]+by|supportedby|in[ \t]+context[ \t]+of|incontextof)\b[ \t]*[:\-]?[ \t]*(.*)$)",
      std::regex::icase);
  return re;
}

const std::regex& lenient_connector_re() {
  static const std::regex re(
      R"(^(?:is[ \t]+)?(supported[ \t]+by|supportedby|in[ \t]+context[ \t]+of|incontextof)\b[ \t]*[:\-]?[ \t]*(.*)$)",
      std::regex::icase);
  return re;
}

const std::regex& id_token_re() {
  static const std::regex re(R"(\b(Sn|G|S|C|A|J)([0-9]+)\b)");
  return re;
}

const std::regex& id_list_re() {
  static const std::regex re(
      R"(^(Sn|G|S|C|A|J)[0-9]+([ \t]*(,|and|&)?[ \t]*(Sn|G|S|C|A|J)[0-9]+)*[ \t]*[.,;]?$)");
  return re;
}

const std::regex& bullet_re() {
  static const std::regex re(R"(^(?:[-*+]|\xE2\x80\xA2|[0-9]+[.)])[ \t]+)");
  return re;
}

std::string strip_markdown(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '`') continue;
    if ((line[i] == '*' || line[i] == '_') && i + 1 < line.size() && line[i + 1] == line[i]) {
      ++i;
      continue;
    }
    out += line[i];
  }
  return out;
}

RelationshipKind inferred_kind(const std::string& target) {
  const auto kind = kind_from_id(target);
  if (kind == ElementKind::Context || kind == ElementKind::Assumption || kind == ElementKind::Justification) {
    return RelationshipKind::InContextOf;
  }
  return RelationshipKind::SupportedBy;
}

RelationshipKind connector_kind(std::string connector) {
  std::transform(connector.begin(), connector.end(), connector.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return connector.starts_with("supported") ? RelationshipKind::SupportedBy : RelationshipKind::InContextOf;
}

std::vector<std::string> ids_in(const std::string& text) {
  std::vector<std::string> ids;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), id_token_re()); it != std::sregex_iterator(); ++it) {
    std::string id = (*it)[1].str() + (*it)[2].str();
    if (kind_from_id(id)) ids.push_back(std::move(id));
  }
  return ids;
}

}  // namespace

ParseOutcome parse_lenient(std::string_view text) {
  const std::string normalized = normalize_newlines(text);
  const auto lines = split_lines(normalized);

  SafetyCase sc;
  std::vector<Diagnostic> diags;
  std::vector<PendingRelationship> pending;
  std::unordered_set<std::string> declared;
  std::optional<std::string> current;
  std::optional<RelationshipKind> connector;

  auto warn = [&](std::string_view code, std::string subject, std::string message, int line) {
    diags.push_back(parser_diagnostic(code, Severity::Warning, std::move(subject), std::move(message), line, 1));
  };
  auto attach = [&](const std::string& source, const std::vector<std::string>& targets,
                    std::optional<RelationshipKind> kind, int line) {
    for (const auto& t : targets) {
      pending.push_back({Relationship{source, t, kind ? *kind : inferred_kind(t)}, line});
    }
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    const std::string_view raw = lines[i];
    const bool indented = !raw.empty() && (raw.front() == ' ' || raw.front() == '\t');
    std::string line(trim(raw));
    if (line.empty() || line.front() == '#' || line.starts_with("```")) continue;
    line = std::string(trim(strip_markdown(line)));
    bool bulleted = false;
    std::smatch m;
    if (std::regex_search(line, m, bullet_re())) {
      line = line.substr(static_cast<std::size_t>(m.length(0)));
      bulleted = true;
    }
    if (line.empty()) continue;

    if (line.starts_with("case \"") && line.size() >= 7 && line.back() == '"') {
      sc.title = line.substr(6, line.size() - 7);
      continue;
    }

    if (std::regex_match(line, m, lenient_explicit_rel_re())) {
      const std::string source = m[1].str() + m[2].str();
      const RelationshipKind kind = connector_kind(m[3].str());
      current = source;
      connector = kind;
      attach(source, ids_in(m[4].str()), kind, lineno);
      continue;
    }

    if (std::regex_match(line, m, lenient_element_re())) {
      const std::string id = m[1].str() + m[2].str();
      if (!kind_from_id(id)) {
        warn(kMalformedLine, id, "malformed element id " + id, lineno);
        continue;
      }
      std::string_view body = trim(std::string_view(line).substr(static_cast<std::size_t>(m.position(3))));
      std::set<Decorator> decorators;
      while (auto tag = peel_tag(body)) {
        const auto d = decorator_from_tag(tag->tag);
        if (!d) break;
        decorators.insert(*d);
        body = trim(body.substr(0, tag->offset));
      }
      current = id;
      connector.reset();
      if (body.empty()) {
        warn(kMalformedLine, id, "element " + id + " has no text", lineno);
        continue;
      }
      if (!declared.insert(id).second) {
        warn(kDuplicateId, id, "duplicate element id " + id + "; keeping the first declaration", lineno);
        continue;
      }
      sc.elements.push_back(GsnElement{id, *kind_from_id(id), std::string(body), std::move(decorators)});
      continue;
    }

    if (std::regex_match(line, m, lenient_connector_re())) {
      if (!current) {
        warn(kMalformedLine, "", "connector with no preceding element", lineno);
        continue;
      }
      connector = connector_kind(m[1].str());
      attach(*current, ids_in(m[2].str()), connector, lineno);
      continue;
    }

    if ((bulleted || indented) && current && std::regex_match(line, id_list_re())) {
      attach(*current, ids_in(line), connector, lineno);
      continue;
    }

    warn(kMalformedLine, "", "unrecognized line", lineno);
  }

  std::set<std::tuple<std::string, std::string, RelationshipKind>> seen;
  for (const auto& p : pending) {
    const auto& rel = p.rel;
    if (rel.source == rel.target) {
      warn(kMalformedLine, describe(rel), "dropping relationship from an element to itself", p.line);
      continue;
    }
    if (!declared.contains(rel.source) || !declared.contains(rel.target)) {
      const std::string& missing = declared.contains(rel.source) ? rel.target : rel.source;
      warn(kUnresolvedReference, describe(rel), "dropping relationship to undeclared id " + missing, p.line);
      continue;
    }
    if (!seen.emplace(rel.source, rel.target, rel.kind).second) continue;
    sc.relationships.push_back(rel);
  }

  ParseOutcome outcome;
  outcome.safety_case = std::move(sc);
  outcome.diagnostics = std::move(diags);
  return outcome;
}

// --- serialization ---------------------------------------------------------

std::string serialize(const SafetyCase& sc) {
  if (sc.title.find_first_of("\r\n") != std::string::npos) {
    throw SerializeError("case title contains a line break");
  }
  std::string out = "case \"" + sc.title + "\"\n";
  for (const auto& e : sc.elements) {
    if (e.text.find_first_of("\r\n") != std::string::npos) {
      throw SerializeError("element " + e.id + " text contains a line break");
    }
    out += e.id;
    out += ": ";
    out += e.text;
    for (Decorator d : e.decorators) {
      out += " [";
      out += to_string(d);
      out += ']';
    }
    out += '\n';
  }
  if (sc.relationships.empty()) return out;

  out += '\n';
  for (std::size_t i = 0; i < sc.relationships.size();) {
    const Relationship& first = sc.relationships[i];
    out += first.source;
    out += ' ';
    out += to_string(first.kind);
    out += ' ';
    out += first.target;
    std::size_t j = i + 1;
    for (; j < sc.relationships.size(); ++j) {
      const Relationship& next = sc.relationships[j];
      if (next.source != first.source || next.kind != first.kind) break;
      out += ", ";
      out += next.target;
    }
    out += '\n';
    i = j;
  }
  return out;
}

}  // namespace scw::prose
