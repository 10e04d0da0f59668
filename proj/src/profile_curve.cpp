#include "profile_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "io_util.hpp"

namespace slab {

void validate_curve(const ProfileCurve& c) {
  if (c.n < 2) throw CurveError("n must be >= 2");
  size_t N = c.x.size();
  if (c.r.size() != N) throw CurveError("x/r size mismatch");
  if (!c.theta.empty() && c.theta.size() != N) throw CurveError("tangent_angles size mismatch");
  size_t min_nodes = c.closed ? 3 : 2;
  if (N < min_nodes) throw CurveError("too few nodes");
  if (c.closed && c.axis_anchored) throw CurveError("closed curve cannot be axis_anchored");
  for (size_t j = 0; j < N; ++j) {
    if (!std::isfinite(c.x[j]) || !std::isfinite(c.r[j]))
      throw CurveError("non-finite node coordinate at node " + std::to_string(j), (int)j);
    if (c.r[j] <= 0.0)
      throw CurveError("node radius r <= 0 at node " + std::to_string(j), (int)j);
  }
  size_t n_seg = c.closed ? N : N - 1;
  for (size_t j = 0; j < n_seg; ++j) {
    size_t k = (j + 1) % N;
    double dx = c.x[k] - c.x[j], dr = c.r[k] - c.r[j];
    if (dx * dx + dr * dr == 0.0)
      throw CurveError("zero-length segment at node " + std::to_string(j), (int)j);
  }
}

ProfileCurve curve_from_json(const nlohmann::json& j) {
  ProfileCurve c;
  if (!j.is_object()) throw CurveError("curve JSON must be an object");
  if (!j.contains("n") || !j.contains("closed") || !j.contains("nodes"))
    throw CurveError("curve JSON needs fields n, closed, nodes");
  c.n = j.at("n").get<int>();
  c.closed = j.at("closed").get<bool>();
  if (j.contains("axis_anchored")) c.axis_anchored = j.at("axis_anchored").get<bool>();
  const auto& nodes = j.at("nodes");
  if (!nodes.is_array()) throw CurveError("nodes must be an array");
  c.x.reserve(nodes.size());
  c.r.reserve(nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) {
    const auto& p = nodes[k];
    if (!p.is_array() || p.size() != 2)
      throw CurveError("node " + std::to_string(k) + " is not an [x, r] pair", (int)k);
    c.x.push_back(p[0].get<double>());
    c.r.push_back(p[1].get<double>());
  }
  if (j.contains("tangent_angles")) {
    for (const auto& v : j.at("tangent_angles")) c.theta.push_back(v.get<double>());
  }
  validate_curve(c);
  return c;
}

nlohmann::json curve_to_json(const ProfileCurve& c) {
  nlohmann::json j;
  j["n"] = c.n;
  j["closed"] = c.closed;
  if (c.axis_anchored) j["axis_anchored"] = true;
  auto nodes = nlohmann::json::array();
  for (size_t k = 0; k < c.size(); ++k) nodes.push_back({c.x[k], c.r[k]});
  j["nodes"] = std::move(nodes);
  if (!c.theta.empty()) j["tangent_angles"] = c.theta;
  return j;
}

ProfileCurve load_curve(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CurveError(std::string("curve JSON parse error: ") + e.what());
  }
  return curve_from_json(j);
}

void save_curve(const ProfileCurve& c, const std::string& path) {
  write_text_file_atomic(path, curve_to_json(c).dump(1) + "\n");
}

double curve_length(const ProfileCurve& c) {
  size_t N = c.size(), n_seg = c.closed ? N : N - 1;
  double L = 0;
  for (size_t j = 0; j < n_seg; ++j) {
    size_t k = (j + 1) % N;
    L += std::hypot(c.x[k] - c.x[j], c.r[k] - c.r[j]);
  }
  return L;
}

double enclosed_area(const ProfileCurve& c) {
  if (!c.closed) throw CurveError("enclosed_area needs a closed curve");
  size_t N = c.size();
  double A = 0;
  for (size_t j = 0; j < N; ++j) {
    size_t k = (j + 1) % N;
    A += c.x[j] * c.r[k] - c.x[k] * c.r[j];
  }
  return 0.5 * A;
}

double bbox_diameter(const ProfileCurve& c) {
  double xlo = c.x[0], xhi = c.x[0], rlo = c.r[0], rhi = c.r[0];
  for (size_t j = 1; j < c.size(); ++j) {
    xlo = std::min(xlo, c.x[j]);
    xhi = std::max(xhi, c.x[j]);
    rlo = std::min(rlo, c.r[j]);
    rhi = std::max(rhi, c.r[j]);
  }
  return std::hypot(xhi - xlo, rhi - rlo);
}

void radial_extent(const ProfileCurve& c, double& d_min, double& d_max) {
  d_min = std::numeric_limits<double>::infinity();
  d_max = 0;
  for (size_t j = 0; j < c.size(); ++j) {
    double d = std::hypot(c.x[j], c.r[j]);
    d_min = std::min(d_min, d);
    d_max = std::max(d_max, d);
  }
}

ProfileCurve scaled(const ProfileCurve& c, double s) {
  ProfileCurve out = c;
  for (auto& v : out.x) v *= s;
  for (auto& v : out.r) v *= s;
  return out;
}

namespace {

// Unit tangents for Hermite resampling: stored angles if present, else
// second-order non-uniform central differences (periodic).
void node_tangents(const ProfileCurve& c, std::vector<double>& tx, std::vector<double>& tr) {
  size_t N = c.size();
  tx.resize(N);
  tr.resize(N);
  if (!c.theta.empty()) {
    for (size_t j = 0; j < N; ++j) {
      tx[j] = std::cos(c.theta[j]);
      tr[j] = std::sin(c.theta[j]);
    }
    return;
  }
  for (size_t j = 0; j < N; ++j) {
    size_t jm = (j + N - 1) % N, jp = (j + 1) % N;
    double ha = std::hypot(c.x[j] - c.x[jm], c.r[j] - c.r[jm]);
    double hb = std::hypot(c.x[jp] - c.x[j], c.r[jp] - c.r[j]);
    double ca = -hb / (ha * (ha + hb)), c0 = (hb - ha) / (ha * hb), cb = ha / (hb * (ha + hb));
    double dx = ca * c.x[jm] + c0 * c.x[j] + cb * c.x[jp];
    double dr = ca * c.r[jm] + c0 * c.r[j] + cb * c.r[jp];
    double g = std::hypot(dx, dr);
    tx[j] = dx / g;
    tr[j] = dr / g;
  }
}

ProfileCurve resample_closed(const ProfileCurve& c, size_t n_out) {
  size_t N = c.size();
  std::vector<double> tx, tr;
  node_tangents(c, tx, tr);
  std::vector<double> s(N + 1);
  s[0] = 0;
  for (size_t j = 0; j < N; ++j) {
    size_t k = (j + 1) % N;
    s[j + 1] = s[j] + std::hypot(c.x[k] - c.x[j], c.r[k] - c.r[j]);
  }
  double L = s[N];
  ProfileCurve out;
  out.n = c.n;
  out.closed = true;
  out.x.resize(n_out);
  out.r.resize(n_out);
  out.theta.resize(n_out);
  size_t seg = 0;
  for (size_t k = 0; k < n_out; ++k) {
    double sq = (double)k * L / (double)n_out;
    while (seg + 1 < N && s[seg + 1] <= sq) ++seg;
    size_t j0 = seg, j1 = (seg + 1) % N;
    double d = s[seg + 1] - s[seg];
    double u = (sq - s[seg]) / d;
    double u2 = u * u, u3 = u2 * u;
    double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    out.x[k] = h00 * c.x[j0] + h10 * d * tx[j0] + h01 * c.x[j1] + h11 * d * tx[j1];
    out.r[k] = h00 * c.r[j0] + h10 * d * tr[j0] + h01 * c.r[j1] + h11 * d * tr[j1];
    double g00 = 6 * u2 - 6 * u, g10 = 3 * u2 - 4 * u + 1;
    double g01 = -6 * u2 + 6 * u, g11 = 3 * u2 - 2 * u;
    double dx = g00 * c.x[j0] + g10 * d * tx[j0] + g01 * c.x[j1] + g11 * d * tx[j1];
    double dr = g00 * c.r[j0] + g10 * d * tr[j0] + g01 * c.r[j1] + g11 * d * tr[j1];
    out.theta[k] = std::atan2(dr, dx);
  }
  validate_curve(out);
  return out;
}

}  // namespace

ProfileCurve resample(const ProfileCurve& c, double target_spacing) {
  if (!c.closed) throw CurveError("resample supports closed curves only");
  if (c.size() < 8) throw CurveError("resample needs at least 8 nodes");
  if (!(target_spacing > 0)) throw CurveError("target_spacing must be > 0");
  double L = curve_length(c);
  size_t n_out = (size_t)std::max<long long>(8, std::llround(L / target_spacing));
  return resample_closed(c, n_out);
}

ProfileCurve resample_to_count(const ProfileCurve& c, size_t n_nodes) {
  if (!c.closed) throw CurveError("resample supports closed curves only");
  if (c.size() < 8 || n_nodes < 8) throw CurveError("resample needs at least 8 nodes");
  return resample_closed(c, n_nodes);
}

namespace {

double point_segment_dist2(double px, double py, double ax, double ay, double bx, double by) {
  double vx = bx - ax, vy = by - ay;
  double wx = px - ax, wy = py - ay;
  double vv = vx * vx + vy * vy;
  double t = vv > 0 ? (wx * vx + wy * vy) / vv : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  double dx = wx - t * vx, dy = wy - t * vy;
  return dx * dx + dy * dy;
}

double directed_hausdorff(const ProfileCurve& a, const ProfileCurve& b) {
  size_t Nb = b.size(), n_seg = b.closed ? Nb : Nb - 1;
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < n_seg; ++j) {
      size_t k = (j + 1) % Nb;
      best = std::min(best, point_segment_dist2(a.x[i], a.r[i], b.x[j], b.r[j], b.x[k], b.r[k]));
      if (best == 0) break;
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

int orient(double ax, double ay, double bx, double by, double cx, double cy) {
  double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return (v > 0) - (v < 0);
}

bool segments_cross(double ax, double ay, double bx, double by,
                    double cx, double cy, double dx, double dy) {
  int o1 = orient(ax, ay, bx, by, cx, cy);
  int o2 = orient(ax, ay, bx, by, dx, dy);
  int o3 = orient(cx, cy, dx, dy, ax, ay);
  int o4 = orient(cx, cy, dx, dy, bx, by);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

double hausdorff_distance(const ProfileCurve& a, const ProfileCurve& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

bool has_self_intersection(const ProfileCurve& c, int* seg_a, int* seg_b) {
  size_t N = c.size(), n_seg = c.closed ? N : N - 1;
  for (size_t i = 0; i < n_seg; ++i) {
    size_t i1 = (i + 1) % N;
    for (size_t j = i + 2; j < n_seg; ++j) {
      size_t j1 = (j + 1) % N;
      if (j1 == i) continue;  // wrap-adjacent pair shares a node
      if (segments_cross(c.x[i], c.r[i], c.x[i1], c.r[i1], c.x[j], c.r[j], c.x[j1], c.r[j1])) {
        if (seg_a) *seg_a = (int)i;
        if (seg_b) *seg_b = (int)j;
        return true;
      }
    }
  }
  return false;
}

EnclosureResult enclosure_test(const ProfileCurve& inner, const ProfileCurve& outer) {
  if (!outer.closed) throw CurveError("enclosure_test needs a closed outer curve");
  EnclosureResult res;
  size_t No = outer.size();
  // transversal crossings between the two polylines
  size_t inner_segs = inner.closed ? inner.size() : inner.size() - 1;
  for (size_t i = 0; i < inner_segs && !res.intersects; ++i) {
    size_t i1 = (i + 1) % inner.size();
    for (size_t j = 0; j < No; ++j) {
      size_t j1 = (j + 1) % No;
      if (segments_cross(inner.x[i], inner.r[i], inner.x[i1], inner.r[i1],
                         outer.x[j], outer.r[j], outer.x[j1], outer.r[j1])) {
        res.intersects = true;
        break;
      }
    }
  }
  if (res.intersects) return res;
  // even-odd rule per inner node
  for (size_t i = 0; i < inner.size(); ++i) {
    double px = inner.x[i], py = inner.r[i];
    bool in = false;
    for (size_t j = 0; j < No; ++j) {
      size_t k = (j + 1) % No;
      double yj = outer.r[j], yk = outer.r[k];
      if ((yj > py) == (yk > py)) continue;
      double xc = outer.x[j] + (py - yj) / (yk - yj) * (outer.x[k] - outer.x[j]);
      if (px < xc) in = !in;
    }
    if (!in) return res;  // enclosed stays false
  }
  res.enclosed = true;
  return res;
}

}  // namespace slab
