#include <doctest.h>

#include <cmath>

#include "geometry.hpp"
#include "shooting.hpp"

using namespace slab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("geometry") {

TEST_CASE("closed circle profile: curvature, mean curvature, support") {
  // circle of radius 1/2 about (0, 2); kappa = 2, nu = (cos phi, sin phi)
  int n = 2;
  size_t N = 512;
  ProfileCurve c = reference_circle(n, 0, 2, 0.5, N);
  GeometryBundle g = geometry_bundle(c);
  for (size_t j = 0; j < N; ++j) {
    double phi = 2 * kPi * (double)j / (double)N;
    double hoop = std::sin(phi) / (2.0 + 0.5 * std::sin(phi));
    CHECK(g.kappa[j] == doctest::Approx(2.0).epsilon(5e-4));
    CHECK(g.nu_x[j] == doctest::Approx(std::cos(phi)).epsilon(2e-4));
    CHECK(g.nu_r[j] == doctest::Approx(std::sin(phi)).epsilon(2e-4));
    CHECK(g.H[j] == doctest::Approx(2.0 + hoop).epsilon(1e-3));
    CHECK(g.A2[j] == doctest::Approx(4.0 + hoop * hoop).epsilon(1e-3));
    CHECK(g.support[j] == doctest::Approx(0.5 + 2.0 * std::sin(phi)).epsilon(1e-3));
  }
  CHECK(g.length == doctest::Approx(kPi).epsilon(1e-4));
  // the hoop term peaks at the bottom of the circle where r = 1.5
  CHECK(g.max_abs_A2 == doctest::Approx(4.0 + 4.0 / 9.0).epsilon(2e-3));
}

TEST_CASE("anchored semicircle is the shrinker sphere when R = sqrt(2n)") {
  int n = 2;
  double R = 2.0;  // sqrt(2 * 2)
  size_t N = 512;
  ProfileCurve c = reference_sphere(n, R, N);
  GeometryBundle g = geometry_bundle(c);
  double worst_S = 0;
  for (size_t j = 0; j < N; ++j) {
    worst_S = std::max(worst_S, std::abs(g.H[j] - 0.5 * g.support[j]));
    CHECK(g.support[j] == doctest::Approx(R).epsilon(2e-3));
  }
  CHECK(worst_S < 5e-3);
  size_t mid = N / 2;
  CHECK(g.H[mid] == doctest::Approx(n / R).epsilon(5e-4));
  CHECK(g.kappa[mid] == doctest::Approx(1.0 / R).epsilon(5e-4));
  CHECK(g.A2[mid] == doctest::Approx(n / (R * R)).epsilon(1e-3));

  auto S = shrinker_residual(c);
  double rmax = 0;
  for (double v : S) rmax = std::max(rmax, std::abs(v));
  CHECK(rmax < 5e-3);
}

TEST_CASE("open cylinder segment matches the shrinker cylinder closed form") {
  // r = sqrt(2(n-1)) = 2 for n = 3; traversal with increasing x gives
  // nu = (0, -1), so H = -(n-1)/r and support = -r
  int n = 3;
  ProfileCurve c = reference_cylinder_segment(n, 2.0, -1.0, 1.0, 128);
  GeometryBundle g = geometry_bundle(c);
  for (size_t j = 0; j < c.size(); ++j) {
    CHECK(g.kappa[j] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(g.H[j] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(g.A2[j] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(g.support[j] == doctest::Approx(-2.0).epsilon(1e-10));
  }
  auto S = shrinker_residual(c);
  for (double v : S) CHECK(v == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("parabolic residual vanishes on the exact shrinking sphere") {
  // R(t) = sqrt(-2n t): at t = -1, n = 2 the radius is 2
  ProfileCurve c = reference_sphere(2, 2.0, 256);
  std::vector<double> S, F;
  parabolic_residual(c, -1.0, S, F);
  REQUIRE(S.size() == c.size());
  REQUIRE(F.size() == c.size());
  for (size_t j = 0; j < c.size(); ++j) {
    CHECK(std::abs(S[j]) < 1e-2);
    CHECK(std::abs(F[j]) < 2e-2);
  }
  // F = 2t S exactly, by definition
  for (size_t j = 0; j < c.size(); ++j)
    CHECK(F[j] == doctest::Approx(2.0 * (-1.0) * S[j]).epsilon(1e-12));
}

TEST_CASE("normal offset moves a circle radially") {
  ProfileCurve c = reference_circle(2, 0, 2, 0.5, 256);
  ProfileCurve in = normal_offset(c, -0.1);
  for (size_t j = 0; j < in.size(); ++j)
    CHECK(std::hypot(in.x[j], in.r[j] - 2.0) == doctest::Approx(0.4).epsilon(1e-5));
  ProfileCurve out = normal_offset(c, 0.2);
  for (size_t j = 0; j < out.size(); ++j)
    CHECK(std::hypot(out.x[j], out.r[j] - 2.0) == doctest::Approx(0.7).epsilon(1e-5));
}

TEST_CASE("normal offset refuses to cross the focal set") {
  ProfileCurve c = reference_circle(2, 0, 2, 0.5, 256);
  CHECK_THROWS_AS(normal_offset(c, -0.6), CurveError);
}

TEST_CASE("geometry rejects dipping below the radius floor") {
  ProfileCurve c = reference_circle(2, 0, 2, 0.5, 64);
  c.r[10] = 1e-12;
  CHECK_THROWS_AS(geometry_bundle(c, 1e-9), AxisContactError);
  // and the node index is carried on the exception
  try {
    geometry_bundle(c, 1e-9);
    FAIL("expected AxisContactError");
  } catch (const CurveError& e) {
    CHECK(e.node == 10);
  }
}

TEST_CASE("conformal factor matches the metric weight") {
  // lambda = r^{n-1} e^{-(x^2+r^2)/4}
  double x = 0.3, r = 1.7;
  int n = 3;
  double expect = std::pow(r, n - 1) * std::exp(-(x * x + r * r) / 4.0);
  CHECK(conformal_factor(n, x, r) == doctest::Approx(expect).epsilon(1e-12));
  // gradient of log lambda: (-x/2, (n-1)/r - r/2)
  double gx = 0, gr = 0;
  conformal_log_gradient(n, x, r, gx, gr);
  CHECK(gx == doctest::Approx(-x / 2).epsilon(1e-12));
  CHECK(gr == doctest::Approx((n - 1) / r - r / 2).epsilon(1e-12));
}

}  // TEST_SUITE
