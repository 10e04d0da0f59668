#include "shooting.hpp"

#include <algorithm>
#include <cmath>

#include "geometry.hpp"
#include "io_util.hpp"

namespace slab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void shrinker_ode_rhs(int n, double x, double r, double theta, double& dx, double& dr,
                      double& dtheta) {
  double c = std::cos(theta), s = std::sin(theta);
  dx = c;
  dr = s;
  dtheta = 0.5 * (x * s - r * c) + (n - 1) * c / r;
}

namespace {

struct State {
  double x, r, th;
};

inline State rk4_step(int n, const State& y, double h) {
  double k1x, k1r, k1t, k2x, k2r, k2t, k3x, k3r, k3t, k4x, k4r, k4t;
  shrinker_ode_rhs(n, y.x, y.r, y.th, k1x, k1r, k1t);
  shrinker_ode_rhs(n, y.x + 0.5 * h * k1x, y.r + 0.5 * h * k1r, y.th + 0.5 * h * k1t, k2x, k2r,
                   k2t);
  shrinker_ode_rhs(n, y.x + 0.5 * h * k2x, y.r + 0.5 * h * k2r, y.th + 0.5 * h * k2t, k3x, k3r,
                   k3t);
  shrinker_ode_rhs(n, y.x + h * k3x, y.r + h * k3r, y.th + h * k3t, k4x, k4r, k4t);
  return {y.x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x),
          y.r + h / 6 * (k1r + 2 * k2r + 2 * k3r + k4r),
          y.th + h / 6 * (k1t + 2 * k2t + 2 * k3t + k4t)};
}

}  // namespace

ShotTrajectory shoot_half(int n, double r0, const ShootOptions& opt) {
  ShotTrajectory out;
  if (!(r0 > 0)) throw ShootError("shoot needs r0 > 0");
  State y{0.0, r0, 0.0};
  out.x.push_back(y.x);
  out.r.push_back(y.r);
  out.theta.push_back(y.th);
  double s = 0;
  bool started = false;
  while (s < opt.s_max) {
    State yn = rk4_step(n, y, opt.ds);
    s += opt.ds;
    if (yn.r < opt.r_floor) {
      out.kind = ShotKind::axis;
      return out;
    }
    if (std::abs(yn.x) > opt.coord_cap || yn.r > opt.coord_cap) {
      out.kind = ShotKind::escape;
      return out;
    }
    if (y.x > 1e-4) started = true;
    if (started && yn.x <= 0.0 && std::cos(yn.th) < 0.0) {
      // secant refinement of the step fraction hitting x = 0
      double a = 0, b = opt.ds, fa = y.x, fb = yn.x;
      State ym = yn;
      for (int it = 0; it < 80; ++it) {
        double m = b - fb * (b - a) / (fb - fa);
        ym = rk4_step(n, y, m);
        double fm = ym.x;
        if (std::abs(fm) < 1e-15) break;
        if (fa * fm < 0) {
          b = m;
          fb = fm;
        } else {
          a = m;
          fa = fm;
        }
      }
      out.x.push_back(ym.x);
      out.r.push_back(ym.r);
      out.theta.push_back(ym.th);
      out.kind = ShotKind::returned;
      out.miss = ym.th - kPi;
      return out;
    }
    y = yn;
    out.x.push_back(y.x);
    out.r.push_back(y.r);
    out.theta.push_back(y.th);
  }
  out.kind = ShotKind::no_return;
  return out;
}

std::vector<ScanRow> scan_miss(int n, double lo, double hi, double step, const ShootOptions& opt) {
  std::vector<ScanRow> rows;
  for (double r0 = lo; r0 <= hi + 1e-12; r0 += step) {
    ShotTrajectory t = shoot_half(n, r0, opt);
    rows.push_back({r0, t.kind == ShotKind::returned ? t.miss : 0.0, t.kind});
  }
  return rows;
}

std::vector<std::pair<double, double>> find_brackets(const std::vector<ScanRow>& rows) {
  std::vector<std::pair<double, double>> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].kind == ShotKind::returned && rows[i].kind == ShotKind::returned &&
        rows[i - 1].miss * rows[i].miss < 0)
      out.emplace_back(rows[i - 1].r0, rows[i].r0);
  }
  return out;
}

namespace {

// Closed CCW profile from the half trajectory: forward leg plus x-mirror.
// Reversed traversal of the mirrored leg carries tangent angle theta -> -theta
// (stored as 2*pi - theta so the angle is continuous along the loop).
ProfileCurve assemble_closed(int n, const ShotTrajectory& t) {
  ProfileCurve c;
  c.n = n;
  c.closed = true;
  size_t M = t.x.size();
  c.x = t.x;
  c.r = t.r;
  c.theta = t.theta;
  for (size_t k = M - 2; k >= 1; --k) {
    c.x.push_back(-t.x[k]);
    c.r.push_back(t.r[k]);
    c.theta.push_back(2 * kPi - t.theta[k]);
  }
  return c;
}

void symmetrize_profile(ProfileCurve& c) {
  size_t N = c.size();
  bool have_theta = !c.theta.empty();
  c.x[0] = 0;
  if (N % 2 == 0) c.x[N / 2] = 0;
  for (size_t j = 1; 2 * j < N; ++j) {
    size_t k = N - j;
    double xm = 0.5 * (c.x[j] - c.x[k]);
    double rm = 0.5 * (c.r[j] + c.r[k]);
    c.x[j] = xm;
    c.x[k] = -xm;
    c.r[j] = rm;
    c.r[k] = rm;
    if (have_theta) {
      // average the tangent with the mirror image of its partner
      double vx = 0.5 * (std::cos(c.theta[j]) + std::cos(c.theta[k]));
      double vr = 0.5 * (std::sin(c.theta[j]) - std::sin(c.theta[k]));
      c.theta[j] = std::atan2(vr, vx);
      c.theta[k] = std::atan2(-vr, vx);
    }
  }
}

}  // namespace

ShooterResult find_torus(int n, double lo, double hi, double tol, size_t n_nodes,
                         const ShootOptions& opt) {
  ShooterResult res;
  res.n = n;
  ShotTrajectory ta = shoot_half(n, lo, opt), tb = shoot_half(n, hi, opt);
  if (ta.kind != ShotKind::returned || tb.kind != ShotKind::returned)
    throw ShootError("bracket endpoint trajectory did not return to x = 0");
  if (ta.miss * tb.miss >= 0)
    throw ShootError("no sign change of the miss angle over the bracket");
  res.bracket_history.emplace_back(lo, ta.miss);
  res.bracket_history.emplace_back(hi, tb.miss);
  double a = lo, b = hi, fa = ta.miss;
  ShotTrajectory best = std::abs(ta.miss) < std::abs(tb.miss) ? ta : tb;
  double best_r0 = std::abs(ta.miss) < std::abs(tb.miss) ? lo : hi;
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    ShotTrajectory tm = shoot_half(n, m, opt);
    if (tm.kind != ShotKind::returned)
      throw ShootError("trajectory inside the bracket failed to return");
    res.bracket_history.emplace_back(m, tm.miss);
    if (std::abs(tm.miss) < std::abs(best.miss)) {
      best = tm;
      best_r0 = m;
    }
    if (std::abs(tm.miss) < tol) {
      res.converged = true;
      break;
    }
    if (fa * tm.miss < 0)
      b = m;
    else {
      a = m;
      fa = tm.miss;
    }
    if (b - a < 1e-15 * std::max(1.0, std::abs(a))) break;
  }
  res.r0 = best_r0;
  res.miss = best.miss;
  ProfileCurve closed = assemble_closed(n, best);
  res.profile = resample_to_count(closed, n_nodes);
  symmetrize_profile(res.profile);
  validate_curve(res.profile);
  auto S = shrinker_residual(res.profile);
  double rmax = 0;
  for (double v : S) rmax = std::max(rmax, std::abs(v));
  res.residual_max = rmax;
  return res;
}

ShooterResult find_torus_auto(int n, double tol, size_t n_nodes, const ShootOptions& opt) {
  double rc = std::sqrt(2.0 * (n - 1));
  double lo = 0.15 * rc, hi = 0.95 * rc;
  auto rows = scan_miss(n, lo, hi, (hi - lo) / 64, opt);
  auto brackets = find_brackets(rows);
  if (brackets.empty()) throw ShootError("no miss-angle sign change found in the scan range");
  return find_torus(n, brackets.front().first, brackets.front().second, tol, n_nodes, opt);
}

ProfileCurve reference_sphere(int n, double radius, size_t nodes, double center_x) {
  ProfileCurve c;
  c.n = n;
  c.closed = false;
  c.axis_anchored = true;
  c.x.resize(nodes);
  c.r.resize(nodes);
  c.theta.resize(nodes);
  for (size_t j = 0; j < nodes; ++j) {
    double phi = (j + 0.5) * kPi / nodes;  // doubled-circle angle, CCW
    c.x[j] = center_x + radius * std::cos(phi);
    c.r[j] = radius * std::sin(phi);
    c.theta[j] = std::atan2(std::cos(phi), -std::sin(phi));
  }
  validate_curve(c);
  return c;
}

ProfileCurve reference_circle(int n, double cx, double cr, double radius, size_t nodes) {
  ProfileCurve c;
  c.n = n;
  c.closed = true;
  c.x.resize(nodes);
  c.r.resize(nodes);
  c.theta.resize(nodes);
  for (size_t j = 0; j < nodes; ++j) {
    double phi = 2 * kPi * j / nodes;
    c.x[j] = cx + radius * std::cos(phi);
    c.r[j] = cr + radius * std::sin(phi);
    c.theta[j] = std::atan2(std::cos(phi), -std::sin(phi));
  }
  validate_curve(c);
  return c;
}

ProfileCurve reference_cylinder_segment(int n, double r, double x0, double x1, size_t nodes) {
  ProfileCurve c;
  c.n = n;
  c.closed = false;
  c.x.resize(nodes);
  c.r.assign(nodes, r);
  for (size_t j = 0; j < nodes; ++j) c.x[j] = x0 + (x1 - x0) * j / double(nodes - 1);
  validate_curve(c);
  return c;
}

nlohmann::json shooter_result_to_json(const ShooterResult& res) {
  nlohmann::json j;
  j["n"] = res.n;
  j["r0"] = res.r0;
  j["miss"] = res.miss;
  j["residual_max"] = res.residual_max;
  j["converged"] = res.converged;
  double dmin, dmax;
  radial_extent(res.profile, dmin, dmax);
  j["d_min"] = dmin;
  j["d_max"] = dmax;
  j["r_min"] = *std::min_element(res.profile.r.begin(), res.profile.r.end());
  j["r_max"] = *std::max_element(res.profile.r.begin(), res.profile.r.end());
  j["nodes"] = res.profile.size();
  auto hist = nlohmann::json::array();
  for (auto& [r0, miss] : res.bracket_history) hist.push_back({r0, miss});
  j["bracket_history"] = std::move(hist);
  return j;
}

}  // namespace slab
