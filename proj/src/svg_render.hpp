#pragma once

#include <string>
#include <utility>
#include <vector>

#include "profile_curve.hpp"

namespace slab {

struct SvgStyle {
  std::string stroke;       // empty -> deterministic palette color by index
  double stroke_width = 0;  // 0 -> default width
  std::string label;        // legend entry; empty -> no legend row
  bool dashed = false;
};

// Half-plane overlay of profile curves with the rotation axis, equal-aspect
// scaling, and a legend. Output bytes depend only on the inputs.
std::string render_profile_svg(const std::vector<ProfileCurve>& curves,
                               const std::vector<SvgStyle>& styles, const std::string& title);

// Simple polyline chart for diagnostic series (one polyline per series).
std::string render_series_svg(
    const std::vector<std::vector<std::pair<double, double>>>& series,
    const std::vector<std::string>& labels, const std::string& title,
    const std::string& x_label, const std::string& y_label);

}  // namespace slab
