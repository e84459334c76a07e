#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "scw/gsn.hpp"

namespace scw::dot {

struct DotOptions {
  std::size_t wrap = 30;  // label wrap width in characters
  bool force = false;     // render even when validation reports errors
  ValidateOptions validation;
};

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Renders a goal structure as a Graphviz digraph.
///
/// Goal: box. Strategy: parallelogram. Solution: circle. Context: rounded
/// box. Assumption / Justification: ellipse with a trailing "A" / "J" line.
/// SupportedBy edges use a filled arrowhead, InContextOf a hollow one.
/// Undeveloped and Uninstantiated append a glyph line to the label;
/// OffDiagram draws a doubled border.
///
/// Throws RenderError when the case has validation errors and `force` is off.
std::string to_dot(const SafetyCase& sc, const DotOptions& options = {});

/// Greedy word wrap; words longer than the width stay on their own line.
std::string wrap_text(std::string_view text, std::size_t width);

}  // namespace scw::dot
