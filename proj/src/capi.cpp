#include "shrinkerlab.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>

#include <json.hpp>

#include "entropy.hpp"
#include "family.hpp"
#include "flow.hpp"
#include "geometry.hpp"
#include "io_util.hpp"
#include "profile_curve.hpp"
#include "shooting.hpp"

struct slab_curve {
  slab::ProfileCurve c;
};

struct slab_shooter_result {
  slab::ShooterResult r;
};

namespace {

thread_local std::string g_error;
thread_local int g_error_node = -1;

void set_error(const std::string& msg, int node = -1) {
  g_error = msg;
  g_error_node = node;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
slab_status guarded(Fn&& fn) {
  try {
    fn();
    set_error("");
    return SLAB_OK;
  } catch (const slab::CurveError& e) {
    set_error(e.what(), e.node);
    return SLAB_ERR_INVALID_CURVE;
  } catch (const slab::ShootError& e) {
    set_error(e.what());
    return SLAB_ERR_NUMERIC;
  } catch (const nlohmann::json::exception& e) {
    set_error(e.what());
    return SLAB_ERR_INVALID_ARGUMENT;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return SLAB_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SLAB_ERR_FAULT;
  }
}

slab_status bad_argument(const char* msg) {
  set_error(msg);
  return SLAB_ERR_INVALID_ARGUMENT;
}

int default_threads() {
  if (const char* env = std::getenv("SHRINKERLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace

extern "C" {

const char* slab_status_message(slab_status status) {
  switch (status) {
    case SLAB_OK: return "ok";
    case SLAB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SLAB_ERR_INVALID_CURVE: return "invalid curve";
    case SLAB_ERR_IO: return "i/o failure";
    case SLAB_ERR_NUMERIC: return "numerical failure";
    case SLAB_ERR_FAULT: return "internal fault";
  }
  return "unknown status";
}

const char* slab_last_error(void) { return g_error.c_str(); }

int slab_last_error_node(void) { return g_error_node; }

void slab_string_free(char* text) { std::free(text); }

slab_status slab_curve_load(const char* path, slab_curve** out) {
  if (!path || !out) return bad_argument("null path or output handle");
  return guarded([&] { *out = new slab_curve{slab::load_curve(path)}; });
}

slab_status slab_curve_save(const slab_curve* curve, const char* path) {
  if (!curve || !path) return bad_argument("null curve or path");
  return guarded([&] { slab::save_curve(curve->c, path); });
}

slab_status slab_curve_from_json(const char* text, slab_curve** out) {
  if (!text || !out) return bad_argument("null text or output handle");
  return guarded([&] {
    slab::ProfileCurve c = slab::curve_from_json(nlohmann::json::parse(text));
    slab::validate_curve(c);
    *out = new slab_curve{std::move(c)};
  });
}

slab_status slab_curve_to_json(const slab_curve* curve, char** out_text) {
  if (!curve || !out_text) return bad_argument("null curve or output pointer");
  return guarded([&] { *out_text = dup_string(slab::curve_to_json(curve->c).dump(2) + "\n"); });
}

void slab_curve_free(slab_curve* curve) { delete curve; }

slab_status slab_curve_stats(const slab_curve* curve, int* n, int* closed, int* axis_anchored,
                             size_t* nodes, double* length, double* d_min, double* d_max) {
  if (!curve) return bad_argument("null curve");
  return guarded([&] {
    if (n) *n = curve->c.n;
    if (closed) *closed = curve->c.closed ? 1 : 0;
    if (axis_anchored) *axis_anchored = curve->c.axis_anchored ? 1 : 0;
    if (nodes) *nodes = curve->c.size();
    if (length) *length = slab::curve_length(curve->c);
    if (d_min || d_max) {
      double lo = 0, hi = 0;
      slab::radial_extent(curve->c, lo, hi);
      if (d_min) *d_min = lo;
      if (d_max) *d_max = hi;
    }
  });
}

slab_status slab_curve_resample(const slab_curve* curve, size_t nodes, slab_curve** out) {
  if (!curve || !out) return bad_argument("null curve or output handle");
  if (nodes < 8) return bad_argument("resample needs at least 8 nodes");
  return guarded([&] { *out = new slab_curve{slab::resample_to_count(curve->c, nodes)}; });
}

slab_status slab_curve_offset(const slab_curve* curve, double a, slab_curve** out) {
  if (!curve || !out) return bad_argument("null curve or output handle");
  return guarded([&] { *out = new slab_curve{slab::normal_offset(curve->c, a)}; });
}

slab_status slab_curve_scale(const slab_curve* curve, double factor, slab_curve** out) {
  if (!curve || !out) return bad_argument("null curve or output handle");
  if (!(factor > 0)) return bad_argument("scale factor must be positive");
  return guarded([&] { *out = new slab_curve{slab::scaled(curve->c, factor)}; });
}

slab_status slab_curve_hausdorff(const slab_curve* a, const slab_curve* b, double* out) {
  if (!a || !b || !out) return bad_argument("null curve or output pointer");
  return guarded([&] { *out = slab::hausdorff_distance(a->c, b->c); });
}

slab_status slab_curve_residual_max(const slab_curve* curve, double* out) {
  if (!curve || !out) return bad_argument("null curve or output pointer");
  return guarded([&] {
    double m = 0;
    for (double v : slab::shrinker_residual(curve->c)) m = std::max(m, std::abs(v));
    *out = m;
  });
}

slab_status slab_curve_residual_min(const slab_curve* curve, double* out) {
  if (!curve || !out) return bad_argument("null curve or output pointer");
  return guarded([&] {
    double m = std::numeric_limits<double>::infinity();
    for (double v : slab::shrinker_residual(curve->c)) m = std::min(m, v);
    *out = m;
  });
}

slab_status slab_curve_enclosure(const slab_curve* inner, const slab_curve* outer,
                                 int* enclosed, int* intersects) {
  if (!inner || !outer) return bad_argument("null curve");
  return guarded([&] {
    slab::EnclosureResult res = slab::enclosure_test(inner->c, outer->c);
    if (enclosed) *enclosed = res.enclosed ? 1 : 0;
    if (intersects) *intersects = res.intersects ? 1 : 0;
  });
}

slab_status slab_entropy_report_json(const slab_curve* curve, int with_sup_grid,
                                     char** out_json) {
  if (!curve || !out_json) return bad_argument("null curve or output pointer");
  return guarded([&] {
    slab::EntropyReport rep = slab::entropy_report(curve->c, with_sup_grid != 0);
    *out_json = dup_string(slab::entropy_report_to_json(rep).dump(2) + "\n");
  });
}

slab_status slab_gaussian_density(const slab_curve* curve, double center_a, double center_d,
                                  double t0, double* out) {
  if (!curve || !out) return bad_argument("null curve or output pointer");
  if (!(t0 > 0)) return bad_argument("gaussian scale t0 must be positive");
  return guarded([&] { *out = slab::gaussian_density(curve->c, center_a, center_d, t0); });
}

double slab_cylinder_density(int n) { return slab::cylinder_density(n); }

double slab_dn_bound(int n) { return slab::dn_bound(n); }

slab_status slab_shoot_scan_json(int n, double lo, double hi, double step, char** out_json) {
  if (!out_json) return bad_argument("null output pointer");
  if (n < 2) return bad_argument("dimension n must be >= 2");
  if (!(lo > 0) || !(hi > lo) || !(step > 0)) return bad_argument("need 0 < lo < hi and step > 0");
  return guarded([&] {
    auto rows = slab::scan_miss(n, lo, hi, step);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& row : rows) {
      const char* kind = "no_return";
      switch (row.kind) {
        case slab::ShotKind::returned: kind = "returned"; break;
        case slab::ShotKind::axis: kind = "axis"; break;
        case slab::ShotKind::escape: kind = "escape"; break;
        case slab::ShotKind::no_return: kind = "no_return"; break;
      }
      j.push_back({{"r0", row.r0}, {"miss", row.miss}, {"kind", kind}});
    }
    *out_json = dup_string(j.dump(2) + "\n");
  });
}

slab_status slab_find_torus(int n, double lo, double hi, double tol, size_t nodes,
                            slab_shooter_result** out) {
  if (!out) return bad_argument("null output handle");
  if (n < 2) return bad_argument("dimension n must be >= 2");
  if (tol <= 0) tol = 1e-12;
  if (nodes == 0) nodes = 2048;
  if (nodes < 64) return bad_argument("torus profile needs at least 64 nodes");
  bool auto_bracket = lo == 0 && hi == 0;
  if (!auto_bracket && !(lo > 0 && hi > lo))
    return bad_argument("bracket must satisfy 0 < lo < hi (or lo = hi = 0 for auto)");
  return guarded([&] {
    slab::ShooterResult r = auto_bracket ? slab::find_torus_auto(n, tol, nodes)
                                         : slab::find_torus(n, lo, hi, tol, nodes);
    *out = new slab_shooter_result{std::move(r)};
  });
}

slab_status slab_shooter_result_json(const slab_shooter_result* result, char** out_json) {
  if (!result || !out_json) return bad_argument("null result or output pointer");
  return guarded(
      [&] { *out_json = dup_string(slab::shooter_result_to_json(result->r).dump(2) + "\n"); });
}

slab_status slab_shooter_result_curve(const slab_shooter_result* result, slab_curve** out) {
  if (!result || !out) return bad_argument("null result or output handle");
  return guarded([&] { *out = new slab_curve{result->r.profile}; });
}

void slab_shooter_result_free(slab_shooter_result* result) { delete result; }

slab_status slab_evolve_to_dir(const slab_curve* curve, double t0, int use_t_cap,
                               double t_cap, const char* out_dir, int* outcome,
                               char** out_summary_json) {
  if (!curve || !out_dir) return bad_argument("null curve or output directory");
  if (use_t_cap && !(t_cap > t0)) return bad_argument("t_cap must exceed t0");
  return guarded([&] {
    slab::FlowOptions fo;
    fo.t0 = t0;
    fo.use_t_cap = use_t_cap != 0;
    fo.t_cap = t_cap;
    slab::Trajectory traj = slab::evolve(curve->c, fo);
    slab::SingularityRecord rec = slab::detect_singularity(traj);
    slab::write_trajectory_dir(traj, &rec, out_dir);
    if (outcome) *outcome = static_cast<int>(traj.outcome);
    if (out_summary_json) {
      nlohmann::json j;
      j["schema"] = "evolve_summary v1";
      j["outcome"] = static_cast<int>(traj.outcome);
      j["stop_reason"] = traj.stop_reason;
      j["t0"] = traj.t0;
      j["t_end"] = traj.t_end;
      j["steps"] = traj.steps;
      j["snapshots"] = traj.snapshots.size();
      j["dense_rows"] = traj.dense.size();
      j["t_sing"] = rec.t_sing;
      j["d_sing"] = rec.d_sing;
      j["kind"] = rec.kind;
      j["circle_verdict"] = rec.circle_verdict;
      j["confident"] = rec.confident;
      j["type_one_sup"] = rec.type_one_sup;
      j["out_dir"] = out_dir;
      *out_summary_json = dup_string(j.dump(2) + "\n");
    }
  });
}

slab_status slab_construct_family(const slab_curve* torus, int n, const int* i_list,
                                  size_t i_count, size_t nodes, double t0,
                                  const char* out_dir, int threads,
                                  char** out_summary_json) {
  if (!out_dir) return bad_argument("null output directory");
  if (!i_list || i_count == 0) return bad_argument("empty perturbation index list");
  if (nodes == 0) nodes = 1024;
  return guarded([&] {
    slab::ProfileCurve base;
    if (torus) {
      base = torus->c;
      if (base.size() != nodes) base = slab::resample_to_count(base, nodes);
    } else {
      if (n < 2) throw slab::ShootError("dimension n must be >= 2 when no torus is supplied");
      base = slab::find_torus_auto(n, 1e-12, nodes).profile;
    }
    slab::FamilyOptions fam;
    fam.i_list.assign(i_list, i_list + i_count);
    fam.t0 = t0;
    fam.threads = threads > 0 ? threads : default_threads();
    fam.out_dir = out_dir;
    slab::FamilyReport rep = slab::run_family(base, fam);
    slab::write_family_outputs(rep, out_dir);
    if (out_summary_json)
      *out_summary_json = dup_string(slab::render_family_report(out_dir, false));
  });
}

slab_status slab_report_render(const char* family_dir, int with_svg,
                               char** out_summary_json) {
  if (!family_dir) return bad_argument("null family directory");
  return guarded([&] {
    std::string summary = slab::render_family_report(family_dir, with_svg != 0);
    if (out_summary_json) *out_summary_json = dup_string(summary);
  });
}

}  // extern "C"
