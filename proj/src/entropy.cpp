#include "entropy.hpp"

#include <algorithm>
#include <cmath>

#include "geometry.hpp"

namespace slab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Abramowitz & Stegun 9.8.1-9.8.4 rational fits, in scaled form e^{-x} I_k(x).
double i0_scaled(double x) {
  if (x < 3.75) {
    double t = (x / 3.75) * (x / 3.75);
    double p = 1.0 + t * (3.5156229 + t * (3.0899424 + t * (1.2067492 +
               t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
    return std::exp(-x) * p;
  }
  double t = 3.75 / x;
  double p = 0.39894228 + t * (0.01328592 + t * (0.00225319 + t * (-0.00157565 +
             t * (0.00916281 + t * (-0.02057706 + t * (0.02635537 +
             t * (-0.01647633 + t * 0.00392377)))))));
  return p / std::sqrt(x);
}

double i1_over_x_scaled(double x) {
  if (x < 3.75) {
    double t = (x / 3.75) * (x / 3.75);
    double p = 0.5 + t * (0.87890594 + t * (0.51498869 + t * (0.15084934 +
               t * (0.02658733 + t * (0.00301532 + t * 0.00032411)))));
    return std::exp(-x) * p;
  }
  double t = 3.75 / x;
  double p = 0.39894228 + t * (-0.03988024 + t * (-0.00362018 + t * (0.00163801 +
             t * (-0.01031555 + t * (0.02282967 + t * (-0.02895312 +
             t * (0.01787654 - t * 0.00420059)))))));
  return p / (x * std::sqrt(x));
}

// e^{-k} * Gamma(n/2) (2/k)^{n/2-1} I_{n/2-1}(k) for general n, via the uniform
// asymptotic series (used only for n > 5 at large k).
double bessel_asymptotic_scaled(int n, double k) {
  double nu = 0.5 * n - 1.0;
  double mu = 4 * nu * nu;
  double corr = 1.0 - (mu - 1) / (8 * k) + (mu - 1) * (mu - 9) / (128 * k * k);
  return std::tgamma(0.5 * n) * std::pow(2.0 / k, nu) * corr / std::sqrt(2 * kPi * k);
}

}  // namespace

double angular_mean_scaled(int n, double kappa) {
  double k = std::abs(kappa);
  switch (n) {
    case 2:
      return i0_scaled(k);
    case 3:
      return k < 1e-12 ? std::exp(-k) : -std::expm1(-2 * k) / (2 * k);
    case 4:
      return 2.0 * i1_over_x_scaled(k);
    case 5: {
      if (k < 1e-3) return std::exp(-k) * (1 + k * k / 10 + k * k * k * k / 280);
      double e2 = std::exp(-2 * k);
      return 3.0 / (k * k) * (0.5 * (1 + e2) + std::expm1(-2 * k) / (2 * k));
    }
    default: {
      if (k < 1e-3) return std::exp(-k) * (1 + k * k / (2 * n));
      if (k > 30.0) return bessel_asymptotic_scaled(n, k);
      // 64-point Gauss-Legendre fallback on the revolution angle
      static const int m = 64;
      double num = 0, den = 0;
      for (int q = 0; q < m; ++q) {
        // midpoint rule is spectrally bad but adequate here: smooth periodic-free
        // integrand on [0, pi] with moderate k; 64 panels keep error < 1e-8
        double phi = (q + 0.5) * kPi / m;
        double w = std::pow(std::sin(phi), n - 2);
        num += w * std::exp(k * (std::cos(phi) - 1.0));
        den += w;
      }
      return num / den;
    }
  }
}

double weighted_length(const ProfileCurve& c) {
  size_t N = c.size(), n_seg = c.closed ? N : N - 1;
  double L = 0;
  for (size_t j = 0; j < n_seg; ++j) {
    size_t k = (j + 1) % N;
    double ds = std::hypot(c.x[k] - c.x[j], c.r[k] - c.r[j]);
    L += 0.5 * (conformal_factor(c.n, c.x[j], c.r[j]) + conformal_factor(c.n, c.x[k], c.r[k])) * ds;
  }
  return L;
}

double sphere_volume(int n) { return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n); }

double gaussian_area(const ProfileCurve& c) { return sphere_volume(c.n) * weighted_length(c); }

double entropy_compact(const ProfileCurve& c) {
  return gaussian_area(c) / std::pow(4 * kPi, 0.5 * c.n);
}

double dn_bound(int n) { return std::pow(2.0, n) * std::tgamma(0.5 * n); }

double gaussian_density(const ProfileCurve& c, double center_a, double center_d, double t0) {
  if (!(t0 > 0)) throw CurveError("gaussian_density needs scale t0 > 0");
  double d = std::abs(center_d);
  int n = c.n;
  size_t N = c.size(), n_seg = c.closed ? N : N - 1;
  auto node_value = [&](size_t j) {
    double dx = c.x[j] - center_a, dr = c.r[j] - d;
    double kap = c.r[j] * d / (2 * t0);
    return std::pow(c.r[j], n - 1) * std::exp(-(dx * dx + dr * dr) / (4 * t0)) *
           angular_mean_scaled(n, kap);
  };
  double acc = 0;
  double prev = node_value(0), first = prev;
  for (size_t j = 0; j < n_seg; ++j) {
    size_t k = (j + 1) % N;
    double cur = k == 0 ? first : node_value(k);
    double ds = std::hypot(c.x[k] - c.x[j], c.r[k] - c.r[j]);
    acc += 0.5 * (prev + cur) * ds;
    prev = cur;
  }
  return std::pow(4 * kPi * t0, -0.5 * n) * sphere_volume(n) * acc;
}

double cylinder_density(int n) {
  return std::pow(4 * kPi, -0.5 * n) * 2.0 * std::sqrt(kPi) * sphere_volume(n) *
         std::pow(2.0 * (n - 1), 0.5 * (n - 1)) * std::exp(-0.5 * (n - 1));
}

SupResult entropy_sup_grid(const ProfileCurve& c) {
  double dmin, dmax;
  radial_extent(c, dmin, dmax);
  SupResult best;
  best.value = -1;
  auto consider = [&](double a, double d, double t0) {
    double v = gaussian_density(c, a, d, t0);
    if (v > best.value) best = {v, a, d, t0};
  };
  for (int k = 0; k <= 13; ++k) {
    double t0 = std::pow(2.0, -4.0 + 0.5 * k);  // hits 1/4 and 1 exactly
    for (int j = 0; j <= 8; ++j) consider(-dmax + j * dmax / 4.0, 0.0, t0);
    for (int j = 1; j <= 4; ++j) consider(0.0, j * dmax / 4.0, t0);
  }
  return best;
}

EntropyReport entropy_report(const ProfileCurve& c, bool with_sup_grid) {
  EntropyReport rep;
  rep.n = c.n;
  rep.L_n = weighted_length(c);
  rep.A = sphere_volume(c.n) * rep.L_n;
  rep.F01 = rep.A / std::pow(4 * kPi, 0.5 * c.n);
  rep.bound_dn = dn_bound(c.n);
  rep.bound_len_ok = rep.L_n < rep.bound_dn;
  if (with_sup_grid) {
    rep.sup = entropy_sup_grid(c);
    rep.entropy_sup = rep.sup.value;
    rep.has_sup = true;
  } else {
    rep.entropy_sup = rep.F01;
  }
  rep.bound_entropy_ok = rep.entropy_sup < 2.0;
  return rep;
}

nlohmann::json entropy_report_to_json(const EntropyReport& rep) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["L_n"] = rep.L_n;
  j["A"] = rep.A;
  j["F01"] = rep.F01;
  j["entropy_sup"] = rep.entropy_sup;
  j["bound_dn"] = rep.bound_dn;
  j["bound_len_ok"] = rep.bound_len_ok;
  j["bound_entropy_ok"] = rep.bound_entropy_ok;
  if (rep.has_sup) {
    j["sup_center_a"] = rep.sup.center_a;
    j["sup_center_d"] = rep.sup.center_d;
    j["sup_scale"] = rep.sup.scale;
  }
  return j;
}

}  // namespace slab
