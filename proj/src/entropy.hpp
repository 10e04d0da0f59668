#pragma once
#include "profile_curve.hpp"

namespace slab {

// Gaussian-weighted quantities of the revolved hypersurface.
//   L_n  = integral of lambda ds along the profile (lambda = conformal factor)
//   A    = Vol(S^{n-1}) * L_n      (Gaussian area)
//   F01  = A / (4 pi)^{n/2}        (density at center 0, scale 1; entropy of a shrinker)
double weighted_length(const ProfileCurve& c);
double sphere_volume(int n);  // Vol(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2)
double gaussian_area(const ProfileCurve& c);
double entropy_compact(const ProfileCurve& c);
double dn_bound(int n);  // 2^n Gamma(n/2)

// Rotationally averaged Gaussian kernel: mean over S^{n-1} of e^{k w1},
// premultiplied by e^{-k} for stability (closed forms for n <= 5).
double angular_mean_scaled(int n, double kappa);

// F_{x0,t0} with x0 = (a, d, 0, ...): axis coordinate a, radial offset d >= 0.
double gaussian_density(const ProfileCurve& c, double center_a, double center_d, double t0);

// Gaussian density of the self-shrinking cylinder S^{n-1} x R (sqrt(2 pi / e) for n = 2).
double cylinder_density(int n);

struct SupResult {
  double value = 0, center_a = 0, center_d = 0, scale = 1;
};
// Grid supremum of recentered/rescaled densities; the grid contains the exact
// points (center 0, scale 1) and (center 0, scale 1/4).
SupResult entropy_sup_grid(const ProfileCurve& c);

struct EntropyReport {
  int n = 2;
  double L_n = 0, A = 0, F01 = 0, entropy_sup = 0, bound_dn = 0;
  bool bound_len_ok = false, bound_entropy_ok = false;
  bool has_sup = false;
  SupResult sup;
};
EntropyReport entropy_report(const ProfileCurve& c, bool with_sup_grid);
nlohmann::json entropy_report_to_json(const EntropyReport& rep);

}  // namespace slab
