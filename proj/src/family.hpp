#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flow.hpp"
#include "profile_curve.hpp"

namespace slab {

// Inward-perturbation family: T_i = torus offset by -1/i, flowed to the
// neckpinch, rescaled by the pinch radius, and aggregated into a report.

struct PerturbResult {
  int i = 0;
  ProfileCurve curve;
  double hausdorff_c0 = 0;     // = 1/i for a constant normal offset
  double nu_sup_diff = 0;      // sup over matched nodes of |nu_i - nu|
  double kappa_sup_diff = 0;   // sup over matched nodes of |kappa_i - kappa|
  double min_S_predicted = 0;  // (1/i) * min(|A|^2 + 1/2) over the torus
  double min_S_measured = 0;   // min shrinker residual on T_i
};

// Throws CurveError when the offset breaks shrinker mean convexity
// (min residual <= 0, i too small) or self-intersects.
PerturbResult build_perturbed(const ProfileCurve& torus, int i);

// Parabolic rescaling about the detected pinch: curves / d_sing, t / d_sing^2.
struct RescaledFlow {
  std::vector<Snapshot> snapshots;
  double t_sing = 0;  // rescaled singular time t~ = t_sing / d_sing^2
  double d_orig = 1;  // the scale divided out
};
RescaledFlow rescale_snapshots(const Trajectory& traj, const SingularityRecord& rec);

// Full-trajectory rescaling (snapshots + dense series + record); the scaling
// identities (max|A~| = d * max|A|, scale-invariant type-I sup) are exact.
Trajectory rescale_flow(const Trajectory& traj, const SingularityRecord& rec,
                        SingularityRecord* rec_out);

// Per-early-snapshot (t~, hausdorff(rescaled curve, sqrt(-t~) * torus) / sqrt(-t~)).
std::vector<std::pair<double, double>> blowdown_check(const RescaledFlow& rf,
                                                      const ProfileCurve& torus);

struct CauchyTable {
  std::vector<double> times;              // common rescaled grid
  std::vector<std::pair<int, int>> pairs; // consecutive (i, i')
  std::vector<std::vector<double>> dist;  // [pair][time] Hausdorff distances
  bool decreasing = false;                // later pairs closer at every time
};
CauchyTable convergence_report(const std::vector<int>& i_list,
                               const std::vector<RescaledFlow>& flows);

struct FamilyMemberRow {
  int i = 0;
  bool clean = false;          // singular outcome with a confident fit
  std::string flow_dir;        // archived run directory (relative name)
  double hausdorff = 0, nu_sup_diff = 0, kappa_sup_diff = 0;
  double min_S_initial = 0, min_S_predicted = 0;
  double min_S_worst = 0, max_F_worst = 0;
  double witness_margin = 0;   // min_S_initial / noise floor
  double t_i = 0, d_i = 0, center_x = 0;
  double ratio = 0;            // d_i^2 / (-t_i)
  double t_tilde = 0;          // t_i / d_i^2
  double type_one_sup = 0;
  double entropy_sup = 0, entropy_gap = 0;
  bool circle_verdict = false, confident = false;
  bool enclosure_ok = false;   // inside sqrt(-t) * torus at every snapshot
  bool radius_band_ok = false;  // d_min, d_max within [sqrt(-2t)/C, C*sqrt(-2t)] throughout
  double radius_band_margin_lo = 0, radius_band_margin_hi = 0;  // worst bound slack (>1 = holds)
  bool huisken_monotone = false;
  double huisken_terminal = 0, huisken_max_uptick = 0;
  double blowdown_earliest = 0;
  bool blowdown_trend_ok = false;
  size_t steps = 0;
};

struct FamilyReport {
  int n = 2;
  std::vector<int> i_list;
  ProfileCurve torus;
  double torus_residual_max = 0;  // discretization noise floor for S
  double torus_entropy_sup = 0;
  double radius_band_C = 0;       // shrinker extremal ratio x 1.1
  double cylinder_density = 0;
  std::vector<FamilyMemberRow> rows;
  CauchyTable cauchy;
  std::vector<std::vector<std::pair<double, double>>> blowdown;  // per i
  // i = 16 linearization/noncollapsing monitors (empty when 16 not run)
  std::vector<std::pair<double, double>> jacobi_16;
  std::vector<std::vector<double>> noncollapse_16;  // rows (t, max k/q, min k/q)
  bool noncollapse_trend_ok = false;
  // cross-i verdicts
  bool t_monotone = false, d_monotone = false;
  double typeI_band_ratio = 0;
  bool blowdown_ok = false;
  bool all_circle = false, all_preserved = false, all_enclosed = false;
  bool all_radius_band = false, all_huisken = false;
};

struct FamilyOptions {
  std::vector<int> i_list{4, 8, 16, 32};
  double t0 = -1.0;
  int threads = 1;
  std::string out_dir;  // required: per-i runs are archived before aggregation
  FlowOptions flow;
};

FamilyReport run_family(const ProfileCurve& torus, const FamilyOptions& opt);

nlohmann::json family_report_to_json(const FamilyReport& rep);
// family_report.json, cauchy.csv, blowdown.csv, torus.json under dir
void write_family_outputs(const FamilyReport& rep, const std::string& dir);

// Summarize an archived family directory; with_svg additionally renders
// profiles_unrescaled.svg, profiles_rescaled.svg and type_one_ratio.svg into
// it from the stored snapshots. Returns the summary as JSON text.
std::string render_family_report(const std::string& family_dir, bool with_svg);

}  // namespace slab
