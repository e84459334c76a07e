#include "scw/gsn.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "natural_order.hpp"

namespace scw {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Goal: return "Goal";
    case ElementKind::Strategy: return "Strategy";
    case ElementKind::Solution: return "Solution";
    case ElementKind::Context: return "Context";
    case ElementKind::Assumption: return "Assumption";
    case ElementKind::Justification: return "Justification";
  }
  return "?";
}

std::string_view to_string(RelationshipKind kind) {
  return kind == RelationshipKind::SupportedBy ? "supportedBy" : "inContextOf";
}

std::string_view to_string(Decorator decorator) {
  switch (decorator) {
    case Decorator::Undeveloped: return "undeveloped";
    case Decorator::Uninstantiated: return "uninstantiated";
    case Decorator::OffDiagram: return "off-diagram";
  }
  return "?";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::string_view id_prefix(ElementKind kind) {
  switch (kind) {
    case ElementKind::Goal: return "G";
    case ElementKind::Strategy: return "S";
    case ElementKind::Solution: return "Sn";
    case ElementKind::Context: return "C";
    case ElementKind::Assumption: return "A";
    case ElementKind::Justification: return "J";
  }
  return "";
}

std::optional<ElementKind> kind_from_id(std::string_view id) {
  // Order matters: "Sn" before "S".
  static constexpr std::pair<std::string_view, ElementKind> kPrefixes[] = {
      {"Sn", ElementKind::Solution}, {"G", ElementKind::Goal},
      {"S", ElementKind::Strategy},  {"C", ElementKind::Context},
      {"A", ElementKind::Assumption}, {"J", ElementKind::Justification},
  };
  for (const auto& [prefix, kind] : kPrefixes) {
    if (!id.starts_with(prefix)) continue;
    const std::string_view digits = id.substr(prefix.size());
    // Canonical positive decimal: no leading zeros, so G1 and G01 never coexist.
    if (digits.empty() || digits.front() == '0') return std::nullopt;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    return kind;
  }
  return std::nullopt;
}

std::string describe(const Relationship& rel) {
  std::string out = rel.source;
  out += ' ';
  out += to_string(rel.kind);
  out += ' ';
  out += rel.target;
  return out;
}

const GsnElement* SafetyCase::find(std::string_view id) const {
  for (const auto& e : elements) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

GsnElement make_element(std::string id, std::string text, std::set<Decorator> decorators) {
  const auto kind = kind_from_id(id);
  if (!kind) throw InvalidElement("malformed element id '" + id + "'");
  if (text.empty()) throw InvalidElement("element " + id + " has empty text");
  if (text.find_first_of("\r\n") != std::string::npos) {
    throw InvalidElement("element " + id + " text contains a line break");
  }
  return GsnElement{std::move(id), *kind, std::move(text), std::move(decorators)};
}

Diagnostic Diagnostic::make(std::string code, std::string subject, std::string message) {
  Diagnostic d;
  d.severity = (!code.empty() && code.front() == 'W') ? Severity::Warning : Severity::Error;
  d.code = std::move(code);
  d.subject = std::move(subject);
  d.message = std::move(message);
  return d;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream out;
  if (d.line > 0) {
    out << "line " << d.line;
    if (d.column > 0) out << ':' << d.column;
    out << ": ";
  }
  out << to_string(d.severity) << ' ' << d.code;
  if (!d.subject.empty()) out << " [" << d.subject << ']';
  out << ": " << d.message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

bool is_terminal_kind(ElementKind kind) {
  return kind == ElementKind::Solution || kind == ElementKind::Context ||
         kind == ElementKind::Assumption || kind == ElementKind::Justification;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

std::vector<std::string> root_candidates(const SafetyCase& sc) {
  std::unordered_set<std::string> supported;
  for (const auto& rel : sc.relationships) {
    if (rel.kind == RelationshipKind::SupportedBy) supported.insert(rel.target);
  }
  std::vector<std::string> roots;
  std::unordered_set<std::string> seen;
  for (const auto& e : sc.elements) {
    if (e.kind != ElementKind::Goal || !seen.insert(e.id).second) continue;
    if (!supported.contains(e.id)) roots.push_back(e.id);
  }
  return roots;
}

// Tarjan's SCC over SupportedBy edges between known elements. Every component
// that is larger than one node, or a node with a self edge, is a cycle.
std::vector<std::vector<std::string>> supported_by_cycles(
    const std::vector<std::string>& nodes,
    const std::unordered_map<std::string, std::vector<std::string>>& adjacency) {
  std::unordered_map<std::string, int> index;
  std::unordered_map<std::string, int> lowlink;
  std::unordered_set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> cycles;
  int counter = 0;

  std::function<void(const std::string&)> connect = [&](const std::string& v) {
    index[v] = lowlink[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    bool self_loop = false;
    if (auto it = adjacency.find(v); it != adjacency.end()) {
      for (const auto& w : it->second) {
        if (w == v) self_loop = true;
        if (!index.contains(w)) {
          connect(w);
          lowlink[v] = std::min(lowlink[v], lowlink[w]);
        } else if (on_stack.contains(w)) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      }
    }
    if (lowlink[v] != index[v]) return;
    std::vector<std::string> component;
    std::string w;
    do {
      w = stack.back();
      stack.pop_back();
      on_stack.erase(w);
      component.push_back(w);
    } while (w != v);
    if (component.size() > 1 || self_loop) cycles.push_back(std::move(component));
  };

  for (const auto& n : nodes) {
    if (!index.contains(n)) connect(n);
  }
  return cycles;
}

}  // namespace

std::optional<std::string> root_of(const SafetyCase& sc) {
  auto roots = root_candidates(sc);
  if (roots.size() != 1) return std::nullopt;
  return roots.front();
}

std::vector<Diagnostic> validate(const SafetyCase& sc, const ValidateOptions& options) {
  std::vector<Diagnostic> out;

  std::unordered_map<std::string, const GsnElement*> by_id;
  std::vector<std::string> declared;
  for (const auto& e : sc.elements) {
    if (!by_id.emplace(e.id, &e).second) {
      out.push_back(Diagnostic::make("E2", e.id, "duplicate element id " + e.id));
    } else {
      declared.push_back(e.id);
    }
  }

  std::unordered_map<std::string, std::vector<std::string>> supported_children;
  std::unordered_set<std::string> has_outgoing;
  for (const auto& rel : sc.relationships) {
    const auto src = by_id.find(rel.source);
    const auto dst = by_id.find(rel.target);
    if (src == by_id.end() || dst == by_id.end()) {
      const std::string& missing = src == by_id.end() ? rel.source : rel.target;
      out.push_back(Diagnostic::make("E1", describe(rel), "relationship references unknown id " + missing));
      continue;
    }
    has_outgoing.insert(rel.source);
    const ElementKind sk = src->second->kind;
    const ElementKind tk = dst->second->kind;
    if (!allowed_connection(sk, tk, rel.kind)) {
      std::string msg = std::string(to_string(sk)) + " may not connect to " +
                        std::string(to_string(tk)) + " via " + std::string(to_string(rel.kind));
      out.push_back(Diagnostic::make("E3", describe(rel), std::move(msg)));
    }
    if (rel.kind == RelationshipKind::SupportedBy) {
      supported_children[rel.source].push_back(rel.target);
    }
  }

  std::vector<std::string> order;
  for (const auto& id : declared) order.push_back(id);
  for (auto cycle : supported_by_cycles(order, supported_children)) {
    std::sort(cycle.begin(), cycle.end(), natural_less);
    out.push_back(Diagnostic::make("E4", cycle.front(),
                                   "supportedBy cycle through " + join_ids(cycle)));
  }

  const auto roots = root_candidates(sc);
  if (roots.empty() || (roots.size() > 1 && !options.allow_multiple_roots)) {
    std::string msg = "expected exactly one root goal, found " + std::to_string(roots.size());
    if (!roots.empty()) msg += " (" + join_ids(roots) + ")";
    out.push_back(Diagnostic::make("E5", "", std::move(msg)));
  }

  for (const auto& id : declared) {
    const GsnElement& e = *by_id.at(id);
    if (is_terminal_kind(e.kind) && has_outgoing.contains(id)) {
      out.push_back(Diagnostic::make(
          "E6", id, std::string(to_string(e.kind)) + " " + id + " must not have outgoing relationships"));
    }
  }

  for (const auto& id : declared) {
    const GsnElement& e = *by_id.at(id);
    if (e.has(Decorator::Undeveloped)) continue;
    const auto it = supported_children.find(id);
    const auto& children = it == supported_children.end() ? std::vector<std::string>{} : it->second;
    if (e.kind == ElementKind::Goal && children.empty()) {
      out.push_back(Diagnostic::make("W1", id, "leaf goal " + id + " has no solution and is not marked undeveloped"));
    }
    if (e.kind == ElementKind::Strategy) {
      const bool supports_goal = std::any_of(children.begin(), children.end(), [&](const std::string& c) {
        return by_id.at(c)->kind == ElementKind::Goal;
      });
      if (!supports_goal) {
        out.push_back(Diagnostic::make("W2", id, "strategy " + id + " has no supporting goal and is not marked undeveloped"));
      }
    }
  }

  for (const auto& id : declared) {
    for (auto& d : semantic_lint(*by_id.at(id))) out.push_back(std::move(d));
  }

  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.code != b.code) return a.code < b.code;
    return natural_less(a.subject, b.subject);
  });
  return out;
}

}  // namespace scw
