#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slab {

void geometry_bundle_into(const ProfileCurve& c, GeometryBundle& g, double r_floor) {
  size_t N = c.size();
  for (auto* v : {&g.tau_x, &g.tau_r, &g.nu_x, &g.nu_r, &g.kappa, &g.H, &g.A2, &g.support,
                  &g.spacing})
    v->resize(N);
  int n = c.n;
  bool plain_open = !c.closed && !c.axis_anchored;

  // segment lengths once; ghost half-segments for anchored curves
  static thread_local std::vector<double> seg;
  size_t n_seg = c.closed ? N : N - 1;
  seg.resize(n_seg);
  g.h_min = std::numeric_limits<double>::infinity();
  g.h_max = 0;
  g.length = 0;
  for (size_t j = 0; j < n_seg; ++j) {
    size_t k = j + 1 == N ? 0 : j + 1;
    double dx = c.x[k] - c.x[j], dr = c.r[k] - c.r[j];
    double h = std::sqrt(dx * dx + dr * dr);
    seg[j] = h;
    g.h_min = std::min(g.h_min, h);
    g.h_max = std::max(g.h_max, h);
    g.length += h;
  }

  g.max_abs_A2 = 0;
  g.max_abs_kappa = 0;
  double inv_nm1 = 1.0 / (n - 1);

  auto eval_node = [&](size_t j, double xm, double rm, double ha, double xp, double rp,
                       double hb) {
    double r = c.r[j];
    if (r < r_floor) throw AxisContactError("axis contact at node " + std::to_string(j), (int)j);
    double ca = -hb / (ha * (ha + hb));
    double c0 = (hb - ha) / (ha * hb);
    double cb = ha / (hb * (ha + hb));
    double x1 = ca * xm + c0 * c.x[j] + cb * xp;
    double r1 = ca * rm + c0 * c.r[j] + cb * rp;
    double da = 2.0 / (ha * (ha + hb)), d0 = -2.0 / (ha * hb), db = 2.0 / (hb * (ha + hb));
    double x2 = da * xm + d0 * c.x[j] + db * xp;
    double r2 = da * rm + d0 * c.r[j] + db * rp;
    double gp2 = x1 * x1 + r1 * r1;
    double gp = std::sqrt(gp2);
    double kap = (x1 * r2 - r1 * x2) / (gp2 * gp);
    double tx = x1 / gp, tr = r1 / gp;
    double hoop = (n - 1) * (-tx) / r;
    g.tau_x[j] = tx;
    g.tau_r[j] = tr;
    g.nu_x[j] = tr;
    g.nu_r[j] = -tx;
    g.kappa[j] = kap;
    g.H[j] = kap + hoop;
    double a2 = kap * kap + hoop * hoop * inv_nm1;
    g.A2[j] = a2;
    g.support[j] = c.x[j] * tr + c.r[j] * (-tx);
    g.spacing[j] = 0.5 * (ha + hb);
    if (a2 > g.max_abs_A2) g.max_abs_A2 = a2;
    double ak = std::abs(kap);
    if (ak > g.max_abs_kappa) g.max_abs_kappa = ak;
  };

  if (c.closed) {
    eval_node(0, c.x[N - 1], c.r[N - 1], seg[N - 1], c.x[1], c.r[1], seg[0]);
    for (size_t j = 1; j + 1 < N; ++j)
      eval_node(j, c.x[j - 1], c.r[j - 1], seg[j - 1], c.x[j + 1], c.r[j + 1], seg[j]);
    eval_node(N - 1, c.x[N - 2], c.r[N - 2], seg[N - 2], c.x[0], c.r[0], seg[N - 1]);
  } else if (c.axis_anchored) {
    eval_node(0, c.x[0], -c.r[0], 2 * c.r[0], c.x[1], c.r[1], seg[0]);
    for (size_t j = 1; j + 1 < N; ++j)
      eval_node(j, c.x[j - 1], c.r[j - 1], seg[j - 1], c.x[j + 1], c.r[j + 1], seg[j]);
    eval_node(N - 1, c.x[N - 2], c.r[N - 2], seg[N - 2], c.x[N - 1], -c.r[N - 1],
              2 * c.r[N - 1]);
  } else {
    // plain open curve: one-sided second-order stencils at the ends
    for (size_t j = 1; j + 1 < N; ++j)
      eval_node(j, c.x[j - 1], c.r[j - 1], seg[j - 1], c.x[j + 1], c.r[j + 1], seg[j]);
    auto one_sided = [&](size_t j, size_t a, size_t b, size_t cc, double sj) {
      double r = c.r[j];
      if (r < r_floor)
        throw AxisContactError("axis contact at node " + std::to_string(j), (int)j);
      double s0 = 0, s1 = seg[a], s2 = seg[a] + seg[a + 1];
      auto w = [&](double si, double sa, double sb) {
        return ((sj - sa) + (sj - sb)) / ((si - sa) * (si - sb));
      };
      double wa = w(s0, s1, s2), wb = w(s1, s0, s2), wc = w(s2, s0, s1);
      double x1 = wa * c.x[a] + wb * c.x[b] + wc * c.x[cc];
      double r1 = wa * c.r[a] + wb * c.r[b] + wc * c.r[cc];
      double da = 2.0 / ((s0 - s1) * (s0 - s2)), db = 2.0 / ((s1 - s0) * (s1 - s2)),
             dc = 2.0 / ((s2 - s0) * (s2 - s1));
      double x2 = da * c.x[a] + db * c.x[b] + dc * c.x[cc];
      double r2 = da * c.r[a] + db * c.r[b] + dc * c.r[cc];
      double gp2 = x1 * x1 + r1 * r1;
      double gp = std::sqrt(gp2);
      double kap = (x1 * r2 - r1 * x2) / (gp2 * gp);
      double tx = x1 / gp, tr = r1 / gp;
      double hoop = (n - 1) * (-tx) / r;
      g.tau_x[j] = tx;
      g.tau_r[j] = tr;
      g.nu_x[j] = tr;
      g.nu_r[j] = -tx;
      g.kappa[j] = kap;
      g.H[j] = kap + hoop;
      g.A2[j] = kap * kap + hoop * hoop * inv_nm1;
      g.support[j] = c.x[j] * tr + c.r[j] * (-tx);
      g.spacing[j] = j == 0 ? seg[0] : seg[N - 2];
      g.max_abs_A2 = std::max(g.max_abs_A2, g.A2[j]);
      g.max_abs_kappa = std::max(g.max_abs_kappa, std::abs(kap));
    };
    one_sided(0, 0, 1, 2, 0.0);
    one_sided(N - 1, N - 3, N - 2, N - 1, seg[N - 3] + seg[N - 2]);
  }
}

GeometryBundle geometry_bundle(const ProfileCurve& c, double r_floor) {
  GeometryBundle g;
  geometry_bundle_into(c, g, r_floor);
  return g;
}

std::vector<double> shrinker_residual(const ProfileCurve& c) {
  GeometryBundle g = geometry_bundle(c);
  std::vector<double> S(c.size());
  for (size_t j = 0; j < c.size(); ++j) S[j] = g.H[j] - 0.5 * g.support[j];
  return S;
}

void parabolic_residual(const ProfileCurve& c, double t, std::vector<double>& S,
                        std::vector<double>& F) {
  if (!(t < 0)) throw CurveError("parabolic residual is defined for t < 0 only");
  GeometryBundle g = geometry_bundle(c);
  size_t N = c.size();
  S.resize(N);
  F.resize(N);
  for (size_t j = 0; j < N; ++j) {
    S[j] = g.H[j] - g.support[j] / (-2.0 * t);
    F[j] = g.support[j] + 2.0 * t * g.H[j];
  }
}

double conformal_factor(int n, double x, double r) {
  if (!(r > 0)) throw CurveError("conformal factor needs r > 0");
  return std::pow(r, n - 1) * std::exp(-(x * x + r * r) / 4.0);
}

void conformal_log_gradient(int n, double x, double r, double& gx, double& gr) {
  if (!(r > 0)) throw CurveError("conformal gradient needs r > 0");
  gx = -x / 2.0;
  gr = (n - 1) / r - r / 2.0;
}

ProfileCurve normal_offset(const ProfileCurve& c, double a) {
  GeometryBundle g = geometry_bundle(c);
  for (size_t j = 0; j < c.size(); ++j) {
    if (1.0 + a * g.kappa[j] <= 0.0)
      throw CurveError("offset reaches the focal distance at node " + std::to_string(j), (int)j);
  }
  ProfileCurve out = c;
  for (size_t j = 0; j < c.size(); ++j) {
    out.x[j] = c.x[j] + a * g.nu_x[j];
    out.r[j] = c.r[j] + a * g.nu_r[j];
  }
  validate_curve(out);  // catches axis contact (r <= 0)
  int sa = -1, sb = -1;
  if (c.closed && has_self_intersection(out, &sa, &sb))
    throw CurveError("offset curve self-intersects near segments " + std::to_string(sa) + "/" +
                         std::to_string(sb),
                     sa);
  return out;
}

}  // namespace slab
