#include "scw/dot.hpp"

#include <cctype>
#include <unordered_set>

namespace scw::dot {

namespace {

std::string graph_name(const std::string& title) {
  std::string out;
  for (char c : title) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  if (out.empty()) return "safety_case";
  if (std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), '_');
  return out;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Escapes each line separately and joins them with a DOT "\n".
std::string label_lines(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const auto nl = text.find('\n', start);
    out += escape(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (nl == std::string_view::npos) break;
    out += "\\n";
    start = nl + 1;
  }
  return out;
}

std::string shape_attributes(ElementKind kind) {
  switch (kind) {
    case ElementKind::Goal: return "shape=box";
    case ElementKind::Strategy: return "shape=parallelogram";
    case ElementKind::Solution: return "shape=circle";
    case ElementKind::Context: return "shape=box, style=rounded";
    case ElementKind::Assumption:
    case ElementKind::Justification: return "shape=ellipse";
  }
  return "shape=box";
}

std::string node_label(const GsnElement& e, std::size_t wrap) {
  std::string label = e.id + "\n" + wrap_text(e.text, wrap);
  if (e.kind == ElementKind::Assumption) label += "\nA";
  if (e.kind == ElementKind::Justification) label += "\nJ";
  std::string glyphs;
  if (e.has(Decorator::Undeveloped)) glyphs += "\xE2\x97\x87";  // ◇
  if (e.has(Decorator::Uninstantiated)) {
    if (!glyphs.empty()) glyphs += ' ';
    glyphs += "\xE2\x96\xBD";  // ▽
  }
  if (!glyphs.empty()) label += "\n" + glyphs;
  return label;
}

}  // namespace

std::string wrap_text(std::string_view text, std::size_t width) {
  std::string out;
  std::size_t line_len = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    if (i >= text.size()) break;
    const auto end = text.find(' ', i);
    const std::string_view word = text.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i);
    if (line_len > 0 && line_len + 1 + word.size() > width) {
      out += '\n';
      line_len = 0;
    } else if (line_len > 0) {
      out += ' ';
      ++line_len;
    }
    out += word;
    line_len += word.size();
    i += word.size();
  }
  return out;
}

std::string to_dot(const SafetyCase& sc, const DotOptions& options) {
  if (!options.force && has_errors(validate(sc, options.validation))) {
    throw RenderError("case has validation errors; use --force to render anyway");
  }

  std::string out = "digraph " + graph_name(sc.title) + " {\n";
  out += "  rankdir=TB;\n";
  out += "  node [fontname=\"Helvetica\"];\n";
  std::unordered_set<std::string> emitted;
  for (const auto& e : sc.elements) {
    if (!emitted.insert(e.id).second) continue;
    out += "  \"" + escape(e.id) + "\" [" + shape_attributes(e.kind);
    if (e.has(Decorator::OffDiagram)) out += ", peripheries=2";
    out += ", label=\"" + label_lines(node_label(e, options.wrap)) + "\"];\n";
  }
  for (const auto& rel : sc.relationships) {
    out += "  \"" + escape(rel.source) + "\" -> \"" + escape(rel.target) + "\" [arrowhead=";
    out += rel.kind == RelationshipKind::SupportedBy ? "normal" : "empty";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace scw::dot
