#include "svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "io_util.hpp"

namespace slab {

namespace {

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr double kW = 860, kH = 640;
constexpr double kML = 70, kMR = 30, kMT = 50, kMB = 55;

std::string num(double v) {
  // pixel coordinates rounded to 0.01 keep the files small and deterministic
  double r = std::round(v * 100.0) / 100.0;
  if (r == 0) r = 0;  // normalize -0
  return format_double(r);
}

std::string tick(double v) {
  double r = std::round(v * 1000.0) / 1000.0;
  if (r == 0) r = 0;
  return format_double(r);
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

struct Mapper {
  double x0, x1, y0, y1;  // data ranges
  double px0, px1, py0, py1;  // pixel ranges (py0 is the bottom)
  double sx, sy;
  void init(double ax, double bx, double ay, double by, bool equal_aspect) {
    x0 = ax;
    x1 = bx;
    y0 = ay;
    y1 = by;
    if (x1 - x0 < 1e-12) {
      x0 -= 0.5;
      x1 += 0.5;
    }
    if (y1 - y0 < 1e-12) {
      y0 -= 0.5;
      y1 += 0.5;
    }
    double padx = 0.04 * (x1 - x0), pady = 0.04 * (y1 - y0);
    x0 -= padx;
    x1 += padx;
    y0 -= pady;
    y1 += pady;
    px0 = kML;
    px1 = kW - kMR;
    py0 = kH - kMB;
    py1 = kMT;
    sx = (px1 - px0) / (x1 - x0);
    sy = (py0 - py1) / (y1 - y0);
    if (equal_aspect) {
      double s = std::min(sx, sy);
      double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
      double hx = 0.5 * (px1 - px0) / s, hy = 0.5 * (py0 - py1) / s;
      x0 = cx - hx;
      x1 = cx + hx;
      y0 = cy - hy;
      y1 = cy + hy;
      sx = sy = s;
    }
  }
  double X(double x) const { return px0 + (x - x0) * sx; }
  double Y(double y) const { return py0 - (y - y0) * sy; }
};

void frame_and_ticks(std::ostringstream& o, const Mapper& m, const std::string& title,
                     const std::string& x_label, const std::string& y_label) {
  o << "<rect x=\"" << num(m.px0) << "\" y=\"" << num(m.py1) << "\" width=\""
    << num(m.px1 - m.px0) << "\" height=\"" << num(m.py0 - m.py1)
    << "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double fx = m.x0 + (m.x1 - m.x0) * k / 4.0;
    double fy = m.y0 + (m.y1 - m.y0) * k / 4.0;
    double px = m.X(fx), py = m.Y(fy);
    o << "<line x1=\"" << num(px) << "\" y1=\"" << num(m.py0) << "\" x2=\"" << num(px)
      << "\" y2=\"" << num(m.py0 + 5) << "\" stroke=\"#404040\" stroke-width=\"1\"/>\n";
    o << "<text x=\"" << num(px) << "\" y=\"" << num(m.py0 + 20)
      << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#202020\">" << tick(fx)
      << "</text>\n";
    o << "<line x1=\"" << num(m.px0 - 5) << "\" y1=\"" << num(py) << "\" x2=\"" << num(m.px0)
      << "\" y2=\"" << num(py) << "\" stroke=\"#404040\" stroke-width=\"1\"/>\n";
    o << "<text x=\"" << num(m.px0 - 8) << "\" y=\"" << num(py + 4)
      << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#202020\">" << tick(fy)
      << "</text>\n";
  }
  o << "<text x=\"" << num(0.5 * (m.px0 + m.px1)) << "\" y=\"28\" font-size=\"16\" "
       "text-anchor=\"middle\" fill=\"#000000\">"
    << esc(title) << "</text>\n";
  o << "<text x=\"" << num(0.5 * (m.px0 + m.px1)) << "\" y=\"" << num(kH - 16)
    << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#202020\">" << esc(x_label)
    << "</text>\n";
  o << "<text x=\"18\" y=\"" << num(0.5 * (m.py0 + m.py1))
    << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#202020\" transform=\"rotate(-90 18 "
    << num(0.5 * (m.py0 + m.py1)) << ")\">" << esc(y_label) << "</text>\n";
}

void legend(std::ostringstream& o, const std::vector<SvgStyle>& styles, const Mapper& m) {
  double lx = m.px1 - 180, ly = m.py1 + 16;
  for (size_t k = 0; k < styles.size(); ++k) {
    if (styles[k].label.empty()) continue;
    std::string color = styles[k].stroke.empty() ? kPalette[k % 8] : styles[k].stroke;
    o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 28)
      << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (styles[k].dashed) o << " stroke-dasharray=\"6 4\"";
    o << "/>\n";
    o << "<text x=\"" << num(lx + 34) << "\" y=\"" << num(ly)
      << "\" font-size=\"12\" fill=\"#202020\">" << esc(styles[k].label) << "</text>\n";
    ly += 18;
  }
}

std::string header() {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kW) << "\" height=\""
    << num(kH) << "\" viewBox=\"0 0 " << num(kW) << " " << num(kH) << "\">\n"
    << "<rect width=\"" << num(kW) << "\" height=\"" << num(kH) << "\" fill=\"#ffffff\"/>\n";
  return o.str();
}

}  // namespace

std::string render_profile_svg(const std::vector<ProfileCurve>& curves,
                               const std::vector<SvgStyle>& styles, const std::string& title) {
  if (curves.empty()) throw CurveError("nothing to render");
  double ax = std::numeric_limits<double>::infinity(), bx = -ax;
  double ay = 0, by = -std::numeric_limits<double>::infinity();
  for (const auto& c : curves)
    for (size_t j = 0; j < c.size(); ++j) {
      ax = std::min(ax, c.x[j]);
      bx = std::max(bx, c.x[j]);
      by = std::max(by, c.r[j]);
    }
  Mapper m;
  m.init(ax, bx, ay, by, true);

  std::ostringstream o;
  o << header();
  frame_and_ticks(o, m, title, "x", "r");
  // rotation axis r = 0
  if (m.y0 <= 0 && m.y1 >= 0)
    o << "<line x1=\"" << num(m.px0) << "\" y1=\"" << num(m.Y(0)) << "\" x2=\"" << num(m.px1)
      << "\" y2=\"" << num(m.Y(0))
      << "\" stroke=\"#909090\" stroke-width=\"1\" stroke-dasharray=\"3 3\"/>\n";
  for (size_t k = 0; k < curves.size(); ++k) {
    const ProfileCurve& c = curves[k];
    SvgStyle st = k < styles.size() ? styles[k] : SvgStyle{};
    std::string color = st.stroke.empty() ? kPalette[k % 8] : st.stroke;
    double width = st.stroke_width > 0 ? st.stroke_width : 1.6;
    o << "<path d=\"";
    for (size_t j = 0; j < c.size(); ++j)
      o << (j == 0 ? "M " : " L ") << num(m.X(c.x[j])) << " " << num(m.Y(c.r[j]));
    if (c.closed) o << " Z";
    o << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\"";
    if (st.dashed) o << " stroke-dasharray=\"6 4\"";
    o << "/>\n";
  }
  legend(o, styles, m);
  o << "</svg>\n";
  return o.str();
}

std::string render_series_svg(
    const std::vector<std::vector<std::pair<double, double>>>& series,
    const std::vector<std::string>& labels, const std::string& title,
    const std::string& x_label, const std::string& y_label) {
  if (series.empty()) throw CurveError("nothing to render");
  double ax = std::numeric_limits<double>::infinity(), bx = -ax, ay = ax, by = -ax;
  for (const auto& s : series)
    for (const auto& p : s) {
      ax = std::min(ax, p.first);
      bx = std::max(bx, p.first);
      ay = std::min(ay, p.second);
      by = std::max(by, p.second);
    }
  Mapper m;
  m.init(ax, bx, ay, by, false);

  std::ostringstream o;
  o << header();
  frame_and_ticks(o, m, title, x_label, y_label);
  std::vector<SvgStyle> styles;
  for (size_t k = 0; k < series.size(); ++k) {
    SvgStyle st;
    if (k < labels.size()) st.label = labels[k];
    styles.push_back(st);
    if (series[k].empty()) continue;
    o << "<path d=\"";
    for (size_t j = 0; j < series[k].size(); ++j)
      o << (j == 0 ? "M " : " L ") << num(m.X(series[k][j].first)) << " "
        << num(m.Y(series[k][j].second));
    o << "\" fill=\"none\" stroke=\"" << kPalette[k % 8] << "\" stroke-width=\"1.6\"/>\n";
  }
  legend(o, styles, m);
  o << "</svg>\n";
  return o.str();
}

}  // namespace slab
