#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace slab {

// Meridian curve of a rotationally symmetric hypersurface in R^{n+1}, living in
// the (x, r) half-plane, r > 0. Closed profiles (tori) are traversed CCW.
// Open curves exist for calibration fixtures only; axis_anchored means both
// ends adjoin r = 0 with nodes at half-spacing from the axis crossing
// (cell-centered), so stencils can mirror through the axis.
struct ProfileCurve {
  int n = 2;  // the S^{n-1} factor: surface is in R^{n+1}
  bool closed = true;
  bool axis_anchored = false;
  std::vector<double> x, r;
  std::vector<double> theta;  // optional per-node tangent angles (empty if unknown)

  size_t size() const { return x.size(); }
};

struct CurveError : std::runtime_error {
  int node = -1;
  CurveError(const std::string& msg, int node_index = -1)
      : std::runtime_error(msg), node(node_index) {}
};

void validate_curve(const ProfileCurve& c);

ProfileCurve curve_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const ProfileCurve& c);
ProfileCurve load_curve(const std::string& path);
void save_curve(const ProfileCurve& c, const std::string& path);

double curve_length(const ProfileCurve& c);           // polyline length (closed: includes seam)
double enclosed_area(const ProfileCurve& c);          // shoelace, CCW positive (closed only)
double bbox_diameter(const ProfileCurve& c);          // diagonal of the bounding box
void radial_extent(const ProfileCurve& c, double& d_min, double& d_max);  // min/max |X|
ProfileCurve scaled(const ProfileCurve& c, double s);

// Arc-length uniform resampling via cubic Hermite segments. Uses stored tangent
// angles when present, else 3-point estimates. Closed curves only; the node
// count becomes round(length / target_spacing).
ProfileCurve resample(const ProfileCurve& c, double target_spacing);
ProfileCurve resample_to_count(const ProfileCurve& c, size_t n_nodes);

// Symmetric polyline Hausdorff distance (node-to-segment, exact for segments).
double hausdorff_distance(const ProfileCurve& a, const ProfileCurve& b);

bool has_self_intersection(const ProfileCurve& c, int* seg_a = nullptr, int* seg_b = nullptr);

struct EnclosureResult {
  bool enclosed = false;
  bool intersects = false;
};
// True iff every node of `inner` lies in the closed region bounded by `outer`
// (even-odd rule on the profile plane). Intersecting curves report false.
EnclosureResult enclosure_test(const ProfileCurve& inner, const ProfileCurve& outer);

}  // namespace slab
