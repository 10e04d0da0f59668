#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "profile_curve.hpp"
#include "shooting.hpp"
#include "test_helpers.hpp"

using namespace slab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("profile_curve") {

TEST_CASE("json round trip preserves every field") {
  ProfileCurve c = reference_circle(3, 0.25, 2.0, 0.5, 64);
  nlohmann::json j = curve_to_json(c);
  ProfileCurve back = curve_from_json(j);
  REQUIRE(back.size() == c.size());
  CHECK(back.n == 3);
  CHECK(back.closed);
  CHECK_FALSE(back.axis_anchored);
  for (size_t k = 0; k < c.size(); ++k) {
    CHECK(back.x[k] == c.x[k]);
    CHECK(back.r[k] == c.r[k]);
    CHECK(back.theta[k] == c.theta[k]);
  }
}

TEST_CASE("save and load give bitwise-equal nodes") {
  std::string dir = fresh_dir("profile_curve");
  ProfileCurve c = reference_sphere(2, 1.5, 48, 0.3);
  save_curve(c, dir + "/c.json");
  ProfileCurve back = load_curve(dir + "/c.json");
  REQUIRE(back.size() == c.size());
  CHECK(back.axis_anchored);
  for (size_t k = 0; k < c.size(); ++k) {
    CHECK(back.x[k] == c.x[k]);
    CHECK(back.r[k] == c.r[k]);
  }
}

TEST_CASE("validation rejects malformed curves") {
  ProfileCurve c = reference_circle(2, 0, 2, 0.5, 32);

  ProfileCurve bad = c;
  bad.n = 1;
  CHECK_THROWS_AS(validate_curve(bad), CurveError);

  bad = c;
  bad.r[5] = -0.1;
  CHECK_THROWS_AS(validate_curve(bad), CurveError);

  bad = c;
  bad.x[7] = std::nan("");
  CHECK_THROWS_AS(validate_curve(bad), CurveError);

  bad = c;
  bad.x[3] = bad.x[4];
  bad.r[3] = bad.r[4];
  CHECK_THROWS_AS(validate_curve(bad), CurveError);

  bad = c;
  bad.r.pop_back();
  CHECK_THROWS_AS(validate_curve(bad), CurveError);

  bad = c;
  bad.axis_anchored = true;  // closed + anchored is contradictory
  CHECK_THROWS_AS(validate_curve(bad), CurveError);

  // the thrown node index is reported
  try {
    bad = c;
    bad.r[5] = 0.0;
    validate_curve(bad);
    FAIL("expected CurveError");
  } catch (const CurveError& e) {
    CHECK(e.node == 5);
  }
}

TEST_CASE("length and area of a circle") {
  double R = 0.5;
  ProfileCurve c = reference_circle(2, 0.1, 2.0, R, 512);
  CHECK(curve_length(c) == doctest::Approx(2 * kPi * R).epsilon(1e-4));
  CHECK(enclosed_area(c) == doctest::Approx(kPi * R * R).epsilon(1e-4));
  // CCW orientation means positive signed area
  CHECK(enclosed_area(c) > 0);
  ProfileCurve open = reference_cylinder_segment(2, 1.0, -1, 1, 16);
  CHECK_THROWS_AS(enclosed_area(open), CurveError);
}

TEST_CASE("radial extent is the distance-to-origin band") {
  ProfileCurve c = reference_circle(2, 0.0, 2.0, 0.5, 256);  // N divisible by 4
  double lo = 0, hi = 0;
  radial_extent(c, lo, hi);
  CHECK(lo == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(hi == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(bbox_diameter(c) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("hermite resampling keeps a circle round") {
  ProfileCurve c = reference_circle(2, 0.0, 2.0, 0.5, 257);
  ProfileCurve f = resample_to_count(c, 512);
  REQUIRE(f.size() == 512);
  double worst = 0;
  for (size_t k = 0; k < f.size(); ++k)
    worst = std::max(worst, std::abs(std::hypot(f.x[k], f.r[k] - 2.0) - 0.5));
  CHECK(worst < 1e-6);
  CHECK(curve_length(f) == doctest::Approx(curve_length(c)).epsilon(1e-4));
  // node 0 is pinned to arc-length origin
  CHECK(f.x[0] == doctest::Approx(c.x[0]).epsilon(1e-12));
  ProfileCurve open = reference_sphere(2, 1.0, 64);
  CHECK_THROWS_AS(resample_to_count(open, 128), CurveError);
}

TEST_CASE("scaled multiplies coordinates") {
  ProfileCurve c = reference_circle(2, 0.5, 2.0, 0.25, 32);
  ProfileCurve s = scaled(c, 2.0);
  for (size_t k = 0; k < c.size(); ++k) {
    CHECK(s.x[k] == 2.0 * c.x[k]);
    CHECK(s.r[k] == 2.0 * c.r[k]);
  }
}

TEST_CASE("hausdorff distance between offset circles") {
  ProfileCurve a = reference_circle(2, 0.0, 2.0, 0.5, 512);
  ProfileCurve b = reference_circle(2, 0.0, 2.2, 0.5, 512);
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.2).epsilon(1e-3));
  CHECK(hausdorff_distance(a, a) == 0.0);
}

TEST_CASE("self intersection detection") {
  ProfileCurve c = reference_circle(2, 0, 2, 0.5, 64);
  CHECK_FALSE(has_self_intersection(c));
  // pinch the circle into a bowtie by reflecting half of it through r = 2
  ProfileCurve bow = c;
  for (size_t k = 0; k < bow.size(); ++k)
    if (bow.x[k] > 0) bow.r[k] = 4.0 - bow.r[k];
  int sa = -1, sb = -1;
  CHECK(has_self_intersection(bow, &sa, &sb));
  CHECK(sa >= 0);
  CHECK(sb > sa);
}

TEST_CASE("enclosure test distinguishes inside, outside, crossing") {
  ProfileCurve outer = reference_circle(2, 0, 2, 1.0, 128);
  ProfileCurve inner = reference_circle(2, 0, 2, 0.5, 64);
  EnclosureResult res = enclosure_test(inner, outer);
  CHECK(res.enclosed);
  CHECK_FALSE(res.intersects);

  res = enclosure_test(outer, inner);
  CHECK_FALSE(res.enclosed);
  CHECK_FALSE(res.intersects);

  ProfileCurve crossing = reference_circle(2, 0.8, 2, 0.5, 64);
  res = enclosure_test(crossing, outer);
  CHECK(res.intersects);
  CHECK_FALSE(res.enclosed);
}

}  // TEST_SUITE
