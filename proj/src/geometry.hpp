#pragma once
#include <vector>

#include "profile_curve.hpp"

namespace slab {

// Per-node differential geometry of the revolved hypersurface. Conventions:
// CCW traversal of closed profiles, outward normal nu = (tau_r, -tau_x),
// kappa = dtheta/ds, H = kappa + (n-1) nu_r / r, |A|^2 = kappa^2 + (n-1)(nu_r/r)^2,
// support = <X, nu>. Calibration: sphere of radius R about the origin gives
// kappa = 1/R, H = n/R, support = R.
struct GeometryBundle {
  std::vector<double> tau_x, tau_r, nu_x, nu_r;
  std::vector<double> kappa, H, A2, support, spacing;
  double h_min = 0, h_max = 0, length = 0;
  double max_abs_A2 = 0, max_abs_kappa = 0;
};

struct AxisContactError : CurveError {
  AxisContactError(const std::string& msg, int node) : CurveError(msg, node) {}
};

// Second-order stencils on the (non-uniform) chord-length parameter.
// Closed: periodic. Open: one-sided at the ends. Axis-anchored: ghost nodes
// reflected through r = 0 (the smooth continuation across the axis).
void geometry_bundle_into(const ProfileCurve& c, GeometryBundle& g, double r_floor = 0.0);
GeometryBundle geometry_bundle(const ProfileCurve& c, double r_floor = 0.0);

std::vector<double> shrinker_residual(const ProfileCurve& c);  // H - support/2
// S = H - support/(-2t), F = support + 2tH (t < 0); F = 2t*S up to rounding.
void parabolic_residual(const ProfileCurve& c, double t, std::vector<double>& S,
                        std::vector<double>& F);

// Angenent metric: lambda = r^{n-1} e^{-(x^2+r^2)/4}; profile geodesics of
// lambda |dX| are exactly the shrinker profiles (kappa = -<grad log lambda, nu>).
double conformal_factor(int n, double x, double r);
void conformal_log_gradient(int n, double x, double r, double& gx, double& gr);

// X + a*nu per node (a < 0 moves inward). Rejects offsets beyond the focal
// scale (1 + a*kappa must stay positive), axis contact, and self-intersection.
ProfileCurve normal_offset(const ProfileCurve& c, double a);

}  // namespace slab
