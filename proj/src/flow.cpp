#include "flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include <json.hpp>

#include "entropy.hpp"
#include "io_util.hpp"

namespace slab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool state_ok(const ProfileCurve& c, double r_floor) {
  size_t N = c.size();
  for (size_t j = 0; j < N; ++j) {
    if (!std::isfinite(c.x[j]) || !std::isfinite(c.r[j])) return false;
    if (!(c.r[j] > r_floor)) return false;
  }
  // chord-reversal guard: adjacent chords must not fold back on each other
  size_t n_seg = c.closed ? N : N - 1;
  double ax = 0, ar = 0;
  for (size_t j = 0; j + 1 < N; ++j) {
    double bx = c.x[j + 1] - c.x[j], br = c.r[j + 1] - c.r[j];
    if (bx == 0 && br == 0) return false;
    if (j > 0 && ax * bx + ar * br <= 0) return false;
    ax = bx;
    ar = br;
  }
  if (c.closed && n_seg == N) {
    double bx = c.x[0] - c.x[N - 1], br = c.r[0] - c.r[N - 1];
    if (bx == 0 && br == 0) return false;
    if (ax * bx + ar * br <= 0) return false;
    double cx = c.x[1] - c.x[0], cr = c.r[1] - c.r[0];
    if (bx * cx + br * cr <= 0) return false;
  }
  return true;
}

}  // namespace

Trajectory evolve(const ProfileCurve& c0, const FlowOptions& opt) {
  validate_curve(c0);
  if (!c0.closed && !c0.axis_anchored)
    throw CurveError("evolve needs a closed or axis-anchored profile");

  Trajectory traj;
  traj.n = c0.n;
  traj.t0 = opt.t0;
  ProfileCurve cur = c0;
  cur.theta.clear();  // tangent angles are not propagated by the flow
  size_t N = cur.size();

  double dmin0, dmax0;
  radial_extent(cur, dmin0, dmax0);
  traj.initial_dmax = dmax0;
  traj.initial_diam = bbox_diameter(cur);
  double r_floor = opt.r_floor_frac * dmax0;

  GeometryBundle g1, g2;
  std::vector<double> vx1(N), vr1(N), vx2(N), vr2(N), seg(N), growth(N);
  ProfileCurve pred = cur, cand = cur;

  // normal velocity -H nu plus, on closed profiles, a tangential term that
  // equalizes the chord growth rates and relaxes the spacing toward uniform
  auto velocity = [&](const ProfileCurve& c, const GeometryBundle& g, double dt,
                      std::vector<double>& vx, std::vector<double>& vr) {
    size_t M = c.size();
    for (size_t j = 0; j < M; ++j) {
      vx[j] = -g.H[j] * g.nu_x[j];
      vr[j] = -g.H[j] * g.nu_r[j];
    }
    if (!c.closed) return;
    double mean_growth = 0;
    for (size_t j = 0; j < M; ++j) {
      size_t jm = j == 0 ? M - 1 : j - 1;
      double ex = c.x[j] - c.x[jm], er = c.r[j] - c.r[jm];
      double h = std::sqrt(ex * ex + er * er);
      seg[j] = h;
      growth[j] = ((vx[j] - vx[jm]) * ex + (vr[j] - vr[jm]) * er) / h;
      mean_growth += growth[j];
    }
    mean_growth /= (double)M;
    double hbar = g.length / (double)M;
    double alpha = opt.omega / dt;
    double T = 0;
    for (size_t j = 1; j < M; ++j) {
      T += (mean_growth - growth[j]) + alpha * (hbar - seg[j]);
      vx[j] += T * g.tau_x[j];
      vr[j] += T * g.tau_r[j];
    }
  };

  double t = opt.t0;
  bool ln_cadence = opt.t0 < 0;
  double lnmt0 = ln_cadence ? std::log(-opt.t0) : 0.0;
  size_t lnt_k = 1;
  auto lnt_target = [&]() { return -std::exp(lnmt0 - (double)lnt_k * opt.snap_dlnt); };
  double curv_target = 0;
  FlowOutcome outcome = FlowOutcome::fault;
  std::string stop_reason;
  size_t steps = 0;

  while (true) {
    try {
      geometry_bundle_into(cur, g1, r_floor);
      if (cur.closed && g1.h_max / g1.h_min > opt.spread_trigger) {
        cur = resample_to_count(cur, N);
        cur.theta.clear();
        traj.events.push_back({t, "resample", "spacing spread"});
        geometry_bundle_into(cur, g1, r_floor);
      }
    } catch (const CurveError& e) {
      outcome = FlowOutcome::fault;
      stop_reason = std::string("geometry: ") + e.what();
      break;
    }

    double max_abs_A = std::sqrt(g1.max_abs_A2);
    if (curv_target == 0) curv_target = max_abs_A * opt.snap_curv_factor;
    double dmin, dmax;
    radial_extent(cur, dmin, dmax);
    double diam = bbox_diameter(cur);

    if (opt.record_dense) {
      DenseRow row;
      row.t = t;
      row.max_abs_A = max_abs_A;
      row.min_r = *std::min_element(cur.r.begin(), cur.r.end());
      row.d_min = dmin;
      row.d_max = dmax;
      if (t < 0) {
        double min_S = kInf, max_F = -kInf;
        for (size_t j = 0; j < N; ++j) {
          double S = g1.H[j] - g1.support[j] / (-2.0 * t);
          double F = g1.support[j] + 2.0 * t * g1.H[j];
          min_S = std::min(min_S, S);
          max_F = std::max(max_F, F);
        }
        row.min_S = min_S;
        row.max_F = max_F;
      } else {
        row.min_S = row.max_F = kNaN;
      }
      row.length = g1.length;
      row.area = cur.closed ? enclosed_area(cur) : kNaN;
      traj.dense.push_back(row);
    }

    bool want_snap = traj.snapshots.empty();
    std::string snap_why = want_snap ? "initial" : "";
    if (ln_cadence && t < 0) {
      double target = lnt_target();
      if (t >= target - 1e-12 * std::abs(target)) {
        if (!want_snap) {
          want_snap = true;
          snap_why = "cadence";
        }
        while (t >= lnt_target() - 1e-12 * std::abs(lnt_target())) ++lnt_k;
      }
    }
    if (max_abs_A >= curv_target) {
      if (!want_snap) {
        want_snap = true;
        snap_why = "curvature";
      }
      while (max_abs_A >= curv_target) curv_target *= opt.snap_curv_factor;
    }
    if (want_snap && (traj.snapshots.empty() || t > traj.snapshots.back().t)) {
      traj.snapshots.push_back({t, cur});
      traj.events.push_back({t, "snapshot", snap_why});
    }

    if (max_abs_A * dmax0 >= opt.stop_curv) {
      outcome = FlowOutcome::singular;
      stop_reason = "curvature_blowup";
      break;
    }
    if (diam < opt.stop_diam_frac * traj.initial_diam) {
      outcome = FlowOutcome::singular;
      stop_reason = "diameter_collapse";
      break;
    }
    if (opt.use_t_cap && t >= opt.t_cap - 1e-14 * std::max(1.0, std::abs(opt.t_cap))) {
      outcome = FlowOutcome::truncated;
      stop_reason = "t_cap";
      break;
    }
    if (steps >= opt.max_steps) {
      outcome = FlowOutcome::truncated;
      stop_reason = "step_budget";
      break;
    }

    double dt = opt.c_cfl * std::min(g1.h_min * g1.h_min,
                                     1.0 / std::max(g1.max_abs_A2, 1e-30));
    bool clipped = false;
    double t_target = 0;
    if (ln_cadence && t < 0) {
      double target = lnt_target();
      if (t + dt >= target) {
        dt = target - t;
        clipped = true;
        t_target = target;
      }
    }
    if (opt.use_t_cap && t + dt >= opt.t_cap) {
      dt = opt.t_cap - t;
      clipped = true;
      t_target = opt.t_cap;
    }
    if (!(dt > 0) || !std::isfinite(dt)) {
      outcome = FlowOutcome::fault;
      stop_reason = "dt_underflow";
      break;
    }

    // Heun step; on a rejected update halve dt and rebuild both stages
    int tries = 0;
    bool accepted = false;
    for (; tries < 10; ++tries) {
      velocity(cur, g1, dt, vx1, vr1);
      for (size_t j = 0; j < N; ++j) {
        pred.x[j] = cur.x[j] + dt * vx1[j];
        pred.r[j] = cur.r[j] + dt * vr1[j];
      }
      bool ok = state_ok(pred, r_floor);
      if (ok) {
        try {
          geometry_bundle_into(pred, g2, r_floor);
        } catch (const CurveError&) {
          ok = false;
        }
      }
      if (ok) {
        velocity(pred, g2, dt, vx2, vr2);
        for (size_t j = 0; j < N; ++j) {
          cand.x[j] = cur.x[j] + 0.5 * dt * (vx1[j] + vx2[j]);
          cand.r[j] = cur.r[j] + 0.5 * dt * (vr1[j] + vr2[j]);
        }
        ok = state_ok(cand, r_floor);
      }
      if (ok) {
        accepted = true;
        break;
      }
      dt *= 0.5;
      clipped = false;
    }
    if (!accepted) {
      outcome = FlowOutcome::fault;
      stop_reason = "step_rejected";
      break;
    }
    if (tries > 0)
      traj.events.push_back({t, "reject", std::to_string(tries) + " halvings"});
    cur.x.swap(cand.x);
    cur.r.swap(cand.r);
    t = clipped ? t_target : t + dt;
    ++steps;
  }

  traj.outcome = outcome;
  traj.stop_reason = stop_reason;
  traj.t_end = t;
  traj.steps = steps;
  traj.final_curve = cur;
  if (traj.snapshots.empty() || traj.snapshots.back().t < t) {
    traj.snapshots.push_back({t, cur});
    traj.events.push_back({t, "snapshot", "final"});
  }
  traj.events.push_back({t, "stop", stop_reason});
  return traj;
}

SingularityRecord detect_singularity(const Trajectory& traj) {
  SingularityRecord rec;
  const ProfileCurve& f = traj.final_curve;
  size_t N = f.size();
  size_t n_seg = f.closed ? N : N - 1;
  double L = 0, sx = 0, sr = 0;
  for (size_t j = 0; j < n_seg; ++j) {
    size_t k = j + 1 == N ? 0 : j + 1;
    double dx = f.x[k] - f.x[j], dr = f.r[k] - f.r[j];
    double ds = std::sqrt(dx * dx + dr * dr);
    L += ds;
    sx += 0.5 * (f.x[k] + f.x[j]) * ds;
    sr += 0.5 * (f.r[k] + f.r[j]) * ds;
  }
  if (L > 0) {
    rec.center_x = sx / L;
    rec.d_sing = sr / L;
  }
  rec.final_diam_ratio = rec.d_sing > 0 ? bbox_diameter(f) / rec.d_sing : kInf;

  if (traj.outcome != FlowOutcome::singular || traj.dense.size() < 16) return rec;

  const auto& rows = traj.dense;
  size_t M = rows.size();
  double t_end = rows[M - 1].t;
  double y_end = 1.0 / (rows[M - 1].max_abs_A * rows[M - 1].max_abs_A);
  double ts = t_end + 0.5 * y_end;  // exact for both the sphere and the cylinder
  double rel = 1;
  for (int pass = 0; pass < 3; ++pass) {
    double lo = ts - 10.0 * (ts - t_end);
    size_t begin = M;
    while (begin > 0 && rows[begin - 1].t >= lo) --begin;
    if (M - begin < 8) begin = M / 2;
    // least squares y = a + b t over the window
    double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (size_t j = begin; j < M; ++j) {
      double tt = rows[j].t, yy = 1.0 / (rows[j].max_abs_A * rows[j].max_abs_A);
      sw += 1;
      st += tt;
      sy += yy;
      stt += tt * tt;
      sty += tt * yy;
    }
    double det = sw * stt - st * st;
    if (det == 0) break;
    double b = (sw * sty - st * sy) / det;
    double a = (sy - b * st) / sw;
    if (!(b < 0)) break;
    ts = -a / b;
    double ss = 0;
    for (size_t j = begin; j < M; ++j) {
      double tt = rows[j].t, yy = 1.0 / (rows[j].max_abs_A * rows[j].max_abs_A);
      double e = yy - (a + b * tt);
      ss += e * e;
    }
    rel = std::sqrt(ss / sw) / (sy / sw);
  }
  if (!(ts > t_end)) ts = t_end + 0.5 * y_end;
  rec.t_sing = ts;
  rec.fit_rel_residual = rel;
  rec.confident = rel < 0.1;
  rec.kind = rec.d_sing < 0.05 * traj.initial_dmax ? "point" : "circle";
  rec.circle_verdict =
      rec.kind == "circle" && bbox_diameter(f) < 0.05 * rec.d_sing;
  double sup = 0;
  for (const auto& row : rows) {
    if (row.t >= ts) continue;
    sup = std::max(sup, (ts - row.t) * row.max_abs_A * row.max_abs_A);
  }
  rec.type_one_sup = sup;
  return rec;
}

std::vector<std::pair<double, double>> type_one_series(const Trajectory& traj,
                                                       const SingularityRecord& rec) {
  std::vector<std::pair<double, double>> out;
  for (const auto& snap : traj.snapshots) {
    if (snap.t >= rec.t_sing) continue;
    GeometryBundle g = geometry_bundle(snap.curve);
    out.push_back({snap.t, (rec.t_sing - snap.t) * g.max_abs_A2});
  }
  return out;
}

namespace {

// linear interpolation of a node field at the closest point of the polyline
double interp_at_closest(const ProfileCurve& c, const std::vector<double>& field,
                         double px, double pr) {
  size_t M = c.size();
  size_t n_seg = c.closed ? M : M - 1;
  double best = kInf, val = field[0];
  for (size_t j = 0; j < n_seg; ++j) {
    size_t k = j + 1 == M ? 0 : j + 1;
    double ax = c.x[j], ar = c.r[j];
    double dx = c.x[k] - ax, dr = c.r[k] - ar;
    double L2 = dx * dx + dr * dr;
    double u = L2 > 0 ? ((px - ax) * dx + (pr - ar) * dr) / L2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    double fx = ax + u * dx - px, fr = ar + u * dr - pr;
    double d2 = fx * fx + fr * fr;
    if (d2 < best) {
      best = d2;
      val = field[j] + u * (field[k] - field[j]);
    }
  }
  return val;
}

}  // namespace

std::vector<std::pair<double, double>> jacobi_residual(const Trajectory& traj) {
  std::vector<std::pair<double, double>> out;
  size_t K = traj.snapshots.size();
  if (K < 3) return out;
  int n = traj.n;

  // per-snapshot F arrays (F = support + 2tH)
  std::vector<std::vector<double>> Fs(K);
  std::vector<GeometryBundle> gs(K);
  for (size_t k = 0; k < K; ++k) {
    const auto& snap = traj.snapshots[k];
    if (!(snap.t < 0)) break;
    geometry_bundle_into(snap.curve, gs[k]);
    size_t M = snap.curve.size();
    Fs[k].resize(M);
    for (size_t j = 0; j < M; ++j)
      Fs[k][j] = gs[k].support[j] + 2.0 * snap.t * gs[k].H[j];
  }

  for (size_t k = 1; k + 1 < K; ++k) {
    const auto& snap = traj.snapshots[k];
    if (!(snap.t < 0) || !(traj.snapshots[k + 1].t < 0)) break;
    const ProfileCurve& c = snap.curve;
    const GeometryBundle& g = gs[k];
    const std::vector<double>& F = Fs[k];
    size_t M = c.size();
    double dt2 = traj.snapshots[k + 1].t - traj.snapshots[k - 1].t;
    double norm = 0;
    for (size_t j = 0; j < M; ++j) {
      double fp = interp_at_closest(traj.snapshots[k + 1].curve, Fs[k + 1], c.x[j], c.r[j]);
      double fm = interp_at_closest(traj.snapshots[k - 1].curve, Fs[k - 1], c.x[j], c.r[j]);
      double dtF = (fp - fm) / dt2;

      // arc-length stencil neighbors (ghosts across the axis when anchored)
      double xm, rm, Fm, xp, rp, Fp;
      if (j > 0) {
        xm = c.x[j - 1];
        rm = c.r[j - 1];
        Fm = F[j - 1];
      } else if (c.closed) {
        xm = c.x[M - 1];
        rm = c.r[M - 1];
        Fm = F[M - 1];
      } else {
        xm = c.x[0];
        rm = -c.r[0];
        Fm = F[0];
      }
      if (j + 1 < M) {
        xp = c.x[j + 1];
        rp = c.r[j + 1];
        Fp = F[j + 1];
      } else if (c.closed) {
        xp = c.x[0];
        rp = c.r[0];
        Fp = F[0];
      } else {
        xp = c.x[M - 1];
        rp = -c.r[M - 1];
        Fp = F[M - 1];
      }
      double ha = std::sqrt((c.x[j] - xm) * (c.x[j] - xm) + (c.r[j] - rm) * (c.r[j] - rm));
      double hb = std::sqrt((xp - c.x[j]) * (xp - c.x[j]) + (rp - c.r[j]) * (rp - c.r[j]));
      double Fs1 = (-hb / (ha * (ha + hb))) * Fm + ((hb - ha) / (ha * hb)) * F[j] +
                   (ha / (hb * (ha + hb))) * Fp;
      double Fs2 = 2.0 / (ha * (ha + hb)) * Fm - 2.0 / (ha * hb) * F[j] +
                   2.0 / (hb * (ha + hb)) * Fp;
      double lap = Fs2 + (n - 1) * (g.tau_r[j] / c.r[j]) * Fs1;
      double resid = std::abs(dtF - lap - g.A2[j] * F[j]);
      norm = std::max(norm, resid);
    }
    out.push_back({snap.t, norm});
  }
  return out;
}

NoncollapseRatios noncollapsing_ratios(const ProfileCurve& c, const std::vector<double>& q) {
  if (!c.closed && !c.axis_anchored)
    throw CurveError("noncollapsing ratios need a closed or axis-anchored profile");
  size_t N = c.size();
  if (q.size() != N) throw CurveError("weight array size mismatch");
  for (size_t j = 0; j < N; ++j)
    if (!(q[j] > 0)) throw CurveError("noncollapsing weight must be positive", (int)j);
  GeometryBundle g = geometry_bundle(c);
  NoncollapseRatios out;
  out.max_interior = -kInf;
  out.min_exterior = kInf;
  // The ball curvature Z(a,b;phi) is monotone in cos(phi), so only the
  // same-angle and antipodal chords can realize the per-point extremes,
  // along with the curve limit (kappa) and the on-axis hoop value.
  for (size_t a = 0; a < N; ++a) {
    double nux = g.nu_x[a], nur = g.nu_r[a];
    double hi = std::max(g.kappa[a], nur / c.r[a]);
    double lo = std::min(g.kappa[a], nur / c.r[a]);
    for (size_t b = 0; b < N; ++b) {
      if (b == a) continue;
      double dx = c.x[a] - c.x[b];
      double dm = c.r[a] - c.r[b];
      double dp = c.r[a] + c.r[b];
      double Zp = 2.0 * (nux * dx + nur * dm) / (dx * dx + dm * dm);
      double Zm = 2.0 * (nux * dx + nur * dp) / (dx * dx + dp * dp);
      hi = std::max({hi, Zp, Zm});
      lo = std::min({lo, Zp, Zm});
    }
    out.max_interior = std::max(out.max_interior, hi / q[a]);
    out.min_exterior = std::min(out.min_exterior, lo / q[a]);
  }
  return out;
}

NoncollapseRatios noncollapsing_ratios(const ProfileCurve& c, NcWeight w, double t) {
  GeometryBundle g = geometry_bundle(c);
  std::vector<double> q(c.size());
  if (w == NcWeight::H) {
    for (size_t j = 0; j < q.size(); ++j) q[j] = g.H[j];
  } else {
    if (!(t < 0)) throw CurveError("weight G needs t < 0");
    for (size_t j = 0; j < q.size(); ++j) q[j] = -(g.support[j] + 2.0 * t * g.H[j]);
  }
  return noncollapsing_ratios(c, q);
}

std::vector<std::pair<double, double>> huisken_series(const Trajectory& traj,
                                                      const SingularityRecord& rec) {
  std::vector<std::pair<double, double>> out;
  for (const auto& snap : traj.snapshots) {
    double tau = rec.t_sing - snap.t;
    if (!(tau > 1e-12)) continue;
    out.push_back({snap.t, gaussian_density(snap.curve, rec.center_x, rec.d_sing, tau)});
  }
  return out;
}

std::string singularity_to_json(const SingularityRecord& rec) {
  nlohmann::json j;
  j["schema"] = "singularity v1";
  j["t_sing"] = rec.t_sing;
  j["d_sing"] = rec.d_sing;
  j["center_x"] = rec.center_x;
  j["type_one_sup"] = rec.type_one_sup;
  j["fit_rel_residual"] = rec.fit_rel_residual;
  j["final_diam_ratio"] = rec.final_diam_ratio;
  j["confident"] = rec.confident;
  j["kind"] = rec.kind;
  j["circle_verdict"] = rec.circle_verdict;
  return j.dump(2) + "\n";
}

SingularityRecord singularity_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SingularityRecord rec;
  rec.t_sing = j.at("t_sing").get<double>();
  rec.d_sing = j.at("d_sing").get<double>();
  rec.center_x = j.at("center_x").get<double>();
  rec.type_one_sup = j.at("type_one_sup").get<double>();
  rec.fit_rel_residual = j.at("fit_rel_residual").get<double>();
  rec.final_diam_ratio = j.at("final_diam_ratio").get<double>();
  rec.confident = j.at("confident").get<bool>();
  rec.kind = j.at("kind").get<std::string>();
  rec.circle_verdict = j.at("circle_verdict").get<bool>();
  return rec;
}

void write_trajectory_dir(const Trajectory& traj, const SingularityRecord* rec,
                          const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  std::vector<std::vector<double>> rows;
  rows.reserve(traj.dense.size());
  for (const auto& d : traj.dense)
    rows.push_back({d.t, d.max_abs_A, d.d_min, d.d_max, d.min_S, d.max_F, d.length, d.area});
  write_text_file_atomic(
      dir + "/series.csv",
      csv_table("series", {"t", "max_abs_A", "d_min", "d_max", "min_S", "max_F", "length", "area"},
                rows));

  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    nlohmann::json j;
    j["schema"] = "snapshot v1";
    j["t"] = traj.snapshots[k].t;
    j["curve"] = curve_to_json(traj.snapshots[k].curve);
    write_text_file_atomic(dir + "/snap_" + std::to_string(k) + ".json", j.dump(2) + "\n");
  }

  nlohmann::json ev = nlohmann::json::array();
  for (const auto& e : traj.events) {
    nlohmann::json je;
    je["t"] = e.t;
    je["kind"] = e.kind;
    je["detail"] = e.detail;
    ev.push_back(je);
  }
  write_text_file_atomic(dir + "/events.json", ev.dump(2) + "\n");

  if (rec) write_text_file_atomic(dir + "/singularity.json", singularity_to_json(*rec));

  nlohmann::json run;
  run["schema"] = "trajectory_dir v1";
  run["n"] = traj.n;
  run["t0"] = traj.t0;
  run["t_end"] = traj.t_end;
  run["steps"] = traj.steps;
  run["outcome"] = (int)traj.outcome;
  run["stop_reason"] = traj.stop_reason;
  run["snapshot_count"] = traj.snapshots.size();
  run["dense_rows"] = traj.dense.size();
  run["initial_dmax"] = traj.initial_dmax;
  run["initial_diam"] = traj.initial_diam;
  run["complete"] = true;
  write_text_file_atomic(dir + "/run.json", run.dump(2) + "\n");
}

bool trajectory_dir_complete(const std::string& dir) {
  try {
    nlohmann::json run = nlohmann::json::parse(read_text_file(dir + "/run.json"));
    return run.value("complete", false);
  } catch (...) {
    return false;
  }
}

Trajectory load_trajectory_dir(const std::string& dir) {
  nlohmann::json run = nlohmann::json::parse(read_text_file(dir + "/run.json"));
  if (!run.value("complete", false))
    throw std::runtime_error("incomplete trajectory directory: " + dir);
  Trajectory traj;
  traj.n = run.at("n").get<int>();
  traj.t0 = run.at("t0").get<double>();
  traj.t_end = run.at("t_end").get<double>();
  traj.steps = run.at("steps").get<size_t>();
  int oc = run.at("outcome").get<int>();
  if (oc != 0 && oc != 2 && oc != 3)
    throw std::runtime_error("bad outcome code in " + dir);
  traj.outcome = (FlowOutcome)oc;
  traj.stop_reason = run.at("stop_reason").get<std::string>();
  traj.initial_dmax = run.at("initial_dmax").get<double>();
  traj.initial_diam = run.at("initial_diam").get<double>();

  std::string series = read_text_file(dir + "/series.csv");
  size_t pos = 0;
  int line_no = 0;
  traj.dense.reserve(run.value("dense_rows", (size_t)0));
  while (pos < series.size()) {
    size_t eol = series.find('\n', pos);
    if (eol == std::string::npos) eol = series.size();
    if (eol > pos) {
      const char* s = series.c_str() + pos;
      if (line_no >= 2) {  // skip schema comment and header
        DenseRow d;
        char* end = nullptr;
        double* fields[8] = {&d.t, &d.max_abs_A, &d.d_min, &d.d_max,
                             &d.min_S, &d.max_F, &d.length, &d.area};
        const char* p = s;
        for (int f = 0; f < 8; ++f) {
          *fields[f] = std::strtod(p, &end);
          p = (*end == ',') ? end + 1 : end;
        }
        d.min_r = d.d_min;
        traj.dense.push_back(d);
      }
      ++line_no;
    }
    pos = eol + 1;
  }

  size_t n_snap = run.at("snapshot_count").get<size_t>();
  traj.snapshots.reserve(n_snap);
  for (size_t k = 0; k < n_snap; ++k) {
    nlohmann::json j =
        nlohmann::json::parse(read_text_file(dir + "/snap_" + std::to_string(k) + ".json"));
    Snapshot snap;
    snap.t = j.at("t").get<double>();
    snap.curve = curve_from_json(j.at("curve"));
    traj.snapshots.push_back(std::move(snap));
  }
  if (!traj.snapshots.empty()) traj.final_curve = traj.snapshots.back().curve;

  nlohmann::json ev = nlohmann::json::parse(read_text_file(dir + "/events.json"));
  for (const auto& je : ev)
    traj.events.push_back({je.at("t").get<double>(), je.at("kind").get<std::string>(),
                           je.at("detail").get<std::string>()});
  return traj;
}

std::vector<Snapshot> load_snapshots_dir(const std::string& dir) {
  nlohmann::json run = nlohmann::json::parse(read_text_file(dir + "/run.json"));
  if (!run.value("complete", false))
    throw std::runtime_error("incomplete trajectory directory: " + dir);
  size_t n_snap = run.at("snapshot_count").get<size_t>();
  std::vector<Snapshot> out;
  out.reserve(n_snap);
  for (size_t k = 0; k < n_snap; ++k) {
    nlohmann::json j =
        nlohmann::json::parse(read_text_file(dir + "/snap_" + std::to_string(k) + ".json"));
    out.push_back({j.at("t").get<double>(), curve_from_json(j.at("curve"))});
  }
  return out;
}

}  // namespace slab
