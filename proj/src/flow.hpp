#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "profile_curve.hpp"

namespace slab {

// Mean-curvature front tracking for rotationally symmetric hypersurfaces,
// driven through the profile curve.  Closed profiles get a tangential
// redistribution term that keeps the node spacing uniform; axis-anchored
// profiles (spheres) evolve by the normal velocity alone.

struct FlowOptions {
  double t0 = -1.0;          // initial time
  double t_cap = 0.0;        // stop when t reaches this (truncated outcome)
  bool use_t_cap = false;    // t_cap is opt-in; default runs until blow-up
  double c_cfl = 0.2;        // dt = c_cfl * min(h_min^2, 1/max|A|^2)
  double omega = 0.1;        // spacing spring gain per step (omega*dt lumped)
  double stop_curv = 1e3;    // stop when max|A| * d_max(0) exceeds this
  double stop_diam_frac = 1e-3;   // stop when bbox diameter < frac * initial
  double r_floor_frac = 1e-6;     // axis-contact floor as fraction of d_max(0)
  double snap_dlnt = 0.01;        // snapshot cadence in ln(-t) (t < 0 phase)
  double snap_curv_factor = 1.0905077326652577;  // 2^(1/8): curvature trigger
  double spread_trigger = 1.8;    // resample when h_max/h_min exceeds this
  size_t max_steps = 400000000;
  bool record_dense = true;
};

// Per-step scalar diagnostics, kept in memory and written to series.csv.
struct DenseRow {
  double t;
  double max_abs_A;  // sqrt(max |A|^2)
  double min_r;
  double d_min, d_max;   // radial extent of the revolved surface
  double min_S, max_F;   // parabolic residuals; NaN once t >= 0
  double length, area;   // profile length and enclosed area (closed only)
};

struct Snapshot {
  double t;
  ProfileCurve curve;
};

struct FlowEvent {
  double t;
  std::string kind;     // "snapshot", "resample", "reject", "stop"
  std::string detail;
};

enum class FlowOutcome { singular = 0, truncated = 2, fault = 3 };

struct Trajectory {
  int n = 2;
  FlowOutcome outcome = FlowOutcome::fault;
  std::string stop_reason;
  double t0 = 0, t_end = 0;
  size_t steps = 0;
  double initial_dmax = 0, initial_diam = 0;
  std::vector<Snapshot> snapshots;
  std::vector<FlowEvent> events;
  std::vector<DenseRow> dense;
  ProfileCurve final_curve;
};

Trajectory evolve(const ProfileCurve& c0, const FlowOptions& opt);

// Blow-up analysis from the dense series plus the final curve.
struct SingularityRecord {
  double t_sing = 0;
  double d_sing = 0;       // length-weighted mean radius of the final curve
  double center_x = 0;     // length-weighted mean axis position
  double type_one_sup = 0;       // sup over the run of (t_sing - t) * max|A|^2
  double fit_rel_residual = 1;   // RMS residual of the 1/max|A|^2 fit, relative
  double final_diam_ratio = 0;   // bbox diameter of final curve / d_sing
  bool confident = false;        // fit_rel_residual < 0.1 and singular outcome
  std::string kind = "none";     // "point", "circle", or "none"
  bool circle_verdict = false;   // kind=="circle" and final curve is tiny vs d_sing
};

SingularityRecord detect_singularity(const Trajectory& traj);

// (t, (t_sing - t) * max|A|^2) sampled at the stored snapshots.
std::vector<std::pair<double, double>> type_one_series(const Trajectory& traj,
                                                       const SingularityRecord& rec);

// Discrete linearization check: || dF/dt - Lap_M F - |A|^2 F ||_inf per interior
// snapshot, with dF/dt from closest-point matching against adjacent snapshots.
std::vector<std::pair<double, double>> jacobi_residual(const Trajectory& traj);

// Sharp interior/exterior ball curvatures against a positive weight q.
struct NoncollapseRatios {
  double max_interior = 0;  // max over nodes of (sup admissible Z) / q
  double min_exterior = 0;  // min over nodes of (inf admissible Z) / q
};
NoncollapseRatios noncollapsing_ratios(const ProfileCurve& c, const std::vector<double>& q);

// Weight selector per the two monitored quantities: H (mean curvature) or
// G := -F = -(<X,nu> + 2tH), the positive choice on shrinker-mean-convex
// flows at t < 0 (t is required for G and ignored for H).
enum class NcWeight { H, G };
NoncollapseRatios noncollapsing_ratios(const ProfileCurve& c, NcWeight w, double t = -1.0);

// Gaussian-density series monitored at the detected singular point:
// (t, density of the snapshot at (center_x, d_sing) with scale t_sing - t).
std::vector<std::pair<double, double>> huisken_series(const Trajectory& traj,
                                                      const SingularityRecord& rec);

/// Directory persistence: series.csv, snap_<k>.json, events.json, run.json,
// singularity.json (when a record is supplied).
void write_trajectory_dir(const Trajectory& traj, const SingularityRecord* rec,
                          const std::string& dir);
Trajectory load_trajectory_dir(const std::string& dir);
// Snapshots only (skips the dense series) -- cheap enough for report figures.
std::vector<Snapshot> load_snapshots_dir(const std::string& dir);
bool trajectory_dir_complete(const std::string& dir);

std::string singularity_to_json(const SingularityRecord& rec);
SingularityRecord singularity_from_json(const std::string& text);

}  // namespace slab
