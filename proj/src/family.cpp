#include "family.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <thread>

#include "entropy.hpp"
#include "geometry.hpp"
#include "io_util.hpp"
#include "svg_render.hpp"

namespace slab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PerturbResult build_perturbed(const ProfileCurve& torus, int i) {
  if (i < 1) throw CurveError("perturbation index must be >= 1");
  GeometryBundle g = geometry_bundle(torus);
  PerturbResult out;
  out.i = i;
  out.curve = normal_offset(torus, -1.0 / i);
  out.hausdorff_c0 = hausdorff_distance(torus, out.curve);
  GeometryBundle gi = geometry_bundle(out.curve);
  double nu_diff = 0, kap_diff = 0, amin = kInf;
  for (size_t j = 0; j < torus.size(); ++j) {
    double dnx = gi.nu_x[j] - g.nu_x[j], dnr = gi.nu_r[j] - g.nu_r[j];
    nu_diff = std::max(nu_diff, std::sqrt(dnx * dnx + dnr * dnr));
    kap_diff = std::max(kap_diff, std::abs(gi.kappa[j] - g.kappa[j]));
    amin = std::min(amin, g.A2[j] + 0.5);
  }
  out.nu_sup_diff = nu_diff;
  out.kappa_sup_diff = kap_diff;
  out.min_S_predicted = amin / i;
  double smin = kInf;
  for (double v : shrinker_residual(out.curve)) smin = std::min(smin, v);
  out.min_S_measured = smin;
  if (!(smin > 0))
    throw CurveError("offset breaks shrinker mean convexity: min residual " +
                     format_double(smin) + " at i = " + std::to_string(i));
  return out;
}

RescaledFlow rescale_snapshots(const Trajectory& traj, const SingularityRecord& rec) {
  if (!(rec.d_sing > 0)) throw CurveError("rescaling needs d_sing > 0");
  RescaledFlow rf;
  rf.d_orig = rec.d_sing;
  double d2 = rec.d_sing * rec.d_sing;
  rf.t_sing = rec.t_sing / d2;
  rf.snapshots.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots)
    rf.snapshots.push_back({s.t / d2, scaled(s.curve, 1.0 / rec.d_sing)});
  return rf;
}

Trajectory rescale_flow(const Trajectory& traj, const SingularityRecord& rec,
                        SingularityRecord* rec_out) {
  if (!(rec.d_sing > 0)) throw CurveError("rescaling needs d_sing > 0");
  double d = rec.d_sing, d2 = d * d;
  Trajectory out;
  out.n = traj.n;
  out.outcome = traj.outcome;
  out.stop_reason = traj.stop_reason;
  out.t0 = traj.t0 / d2;
  out.t_end = traj.t_end / d2;
  out.steps = traj.steps;
  out.initial_dmax = traj.initial_dmax / d;
  out.initial_diam = traj.initial_diam / d;
  out.snapshots.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots)
    out.snapshots.push_back({s.t / d2, scaled(s.curve, 1.0 / d)});
  out.events.reserve(traj.events.size());
  for (const auto& e : traj.events) out.events.push_back({e.t / d2, e.kind, e.detail});
  out.dense.reserve(traj.dense.size());
  for (const auto& r : traj.dense) {
    DenseRow q;
    q.t = r.t / d2;
    q.max_abs_A = r.max_abs_A * d;
    q.min_r = r.min_r / d;
    q.d_min = r.d_min / d;
    q.d_max = r.d_max / d;
    q.min_S = r.min_S * d;
    q.max_F = r.max_F / d;
    q.length = r.length / d;
    q.area = r.area / d2;
    out.dense.push_back(q);
  }
  out.final_curve = scaled(traj.final_curve, 1.0 / d);
  if (rec_out) {
    *rec_out = rec;
    rec_out->t_sing = rec.t_sing / d2;
    rec_out->d_sing = 1.0;
    rec_out->center_x = rec.center_x / d;
  }
  return out;
}

std::vector<std::pair<double, double>> blowdown_check(const RescaledFlow& rf,
                                                      const ProfileCurve& torus) {
  std::vector<std::pair<double, double>> out;
  if (rf.snapshots.empty()) return out;
  double cutoff = 0.5 * rf.snapshots.front().t;  // early half of the rescaled run
  for (const auto& s : rf.snapshots) {
    if (!(s.t <= cutoff)) break;
    double root = std::sqrt(-s.t);
    out.push_back({s.t, hausdorff_distance(s.curve, scaled(torus, root)) / root});
  }
  return out;
}

CauchyTable convergence_report(const std::vector<int>& i_list,
                               const std::vector<RescaledFlow>& flows) {
  if (flows.size() < 3) throw CurveError("convergence report needs >= 3 rescaled flows");
  if (i_list.size() != flows.size()) throw CurveError("i list / flow count mismatch");
  CauchyTable tab;
  double t_lo = -kInf, t_sing_min = kInf;
  for (const auto& f : flows) {
    if (f.snapshots.empty()) throw CurveError("rescaled flow with no snapshots");
    t_lo = std::max(t_lo, f.snapshots.front().t);
    t_sing_min = std::min(t_sing_min, f.t_sing);
  }
  // cap the grid to stay inside every flow: back off the latest rescaled start
  // and stop well before the earliest rescaled singular time
  t_lo *= 0.9;
  double t_hi = t_lo + 0.75 * (t_sing_min - t_lo);
  const int G = 12;
  for (int j = 0; j < G; ++j)
    tab.times.push_back(t_lo + (t_hi - t_lo) * (double)j / (G - 1));
  auto nearest = [](const RescaledFlow& f, double t) -> const ProfileCurve& {
    size_t best = 0;
    double bd = kInf;
    for (size_t k = 0; k < f.snapshots.size(); ++k) {
      double d = std::abs(f.snapshots[k].t - t);
      if (d < bd) {
        bd = d;
        best = k;
      }
    }
    return f.snapshots[best].curve;
  };
  for (size_t p = 0; p + 1 < flows.size(); ++p) {
    tab.pairs.push_back({i_list[p], i_list[p + 1]});
    std::vector<double> row;
    for (double t : tab.times)
      row.push_back(hausdorff_distance(nearest(flows[p], t), nearest(flows[p + 1], t)));
    tab.dist.push_back(std::move(row));
  }
  tab.decreasing = tab.dist.size() >= 2;
  for (size_t p = 0; p + 1 < tab.dist.size(); ++p)
    for (int j = 0; j < G; ++j)
      if (!(tab.dist[p + 1][j] < tab.dist[p][j])) tab.decreasing = false;
  return tab;
}

FamilyReport run_family(const ProfileCurve& torus, const FamilyOptions& opt) {
  if (opt.out_dir.empty()) throw CurveError("family runs require an output directory");
  if (opt.i_list.empty()) throw CurveError("empty i list");
  for (size_t k = 0; k + 1 < opt.i_list.size(); ++k)
    if (opt.i_list[k] >= opt.i_list[k + 1])
      throw CurveError("i list must be strictly increasing");
  validate_curve(torus);
  if (!torus.closed) throw CurveError("family construction needs a closed torus profile");

  FamilyReport rep;
  rep.n = torus.n;
  rep.i_list = opt.i_list;
  rep.torus = torus;
  double rmax = 0;
  for (double v : shrinker_residual(torus)) rmax = std::max(rmax, std::abs(v));
  rep.torus_residual_max = rmax;
  rep.torus_entropy_sup = entropy_sup_grid(torus).value;
  double dminT, dmaxT;
  radial_extent(torus, dminT, dmaxT);
  rep.radius_band_C = 1.1 * std::max(std::sqrt(2.0) / dminT, dmaxT / std::sqrt(2.0));
  rep.cylinder_density = cylinder_density(torus.n);

  std::filesystem::create_directories(opt.out_dir);
  size_t M = opt.i_list.size();
  std::vector<FamilyMemberRow> rows(M);
  std::vector<RescaledFlow> rescaled(M);
  std::vector<std::vector<std::pair<double, double>>> blowdowns(M);
  std::vector<std::exception_ptr> errs(M);
  std::vector<std::pair<double, double>> jac16;
  std::vector<std::vector<double>> nc16;
  bool nc_ok = false;

  auto worker = [&](size_t idx) {
    try {
      int i = opt.i_list[idx];
      std::string dname = "run_" + std::to_string(i);
      std::string dir = opt.out_dir + "/" + dname;
      PerturbResult pr = build_perturbed(torus, i);
      Trajectory traj;
      if (trajectory_dir_complete(dir)) {
        traj = load_trajectory_dir(dir);
      } else {
        FlowOptions fo = opt.flow;
        fo.t0 = opt.t0;
        traj = evolve(pr.curve, fo);
        SingularityRecord rec0 = detect_singularity(traj);
        write_trajectory_dir(traj, &rec0, dir);
      }
      SingularityRecord rec = detect_singularity(traj);

      FamilyMemberRow row;
      row.i = i;
      row.flow_dir = dname;
      row.clean = traj.outcome == FlowOutcome::singular && rec.confident;
      row.hausdorff = pr.hausdorff_c0;
      row.nu_sup_diff = pr.nu_sup_diff;
      row.kappa_sup_diff = pr.kappa_sup_diff;
      row.min_S_predicted = pr.min_S_predicted;
      row.min_S_initial = traj.dense.empty() ? pr.min_S_measured : traj.dense.front().min_S;
      double sW = kInf, fW = -kInf;
      for (const auto& d : traj.dense) {
        sW = std::min(sW, d.min_S);
        fW = std::max(fW, d.max_F);
      }
      row.min_S_worst = sW;
      row.max_F_worst = fW;
      row.witness_margin = rmax > 0 ? row.min_S_initial / rmax : kInf;
      row.t_i = rec.t_sing;
      row.d_i = rec.d_sing;
      row.center_x = rec.center_x;
      row.ratio = rec.d_sing * rec.d_sing / (-rec.t_sing);
      row.t_tilde = rec.t_sing / (rec.d_sing * rec.d_sing);
      row.type_one_sup = rec.type_one_sup;
      row.entropy_sup = entropy_sup_grid(pr.curve).value;
      row.entropy_gap = row.entropy_sup - rep.torus_entropy_sup;
      row.circle_verdict = rec.circle_verdict;
      row.confident = rec.confident;
      row.steps = traj.steps;

      bool enc = true;
      for (const auto& s : traj.snapshots) {
        if (!(s.t < 0)) {
          enc = false;
          break;
        }
        EnclosureResult er = enclosure_test(s.curve, scaled(torus, std::sqrt(-s.t)));
        if (!er.enclosed || er.intersects) {
          enc = false;
          break;
        }
      }
      row.enclosure_ok = enc;

      double mlo = kInf, mhi = kInf;
      for (const auto& d : traj.dense) {
        double ref = std::sqrt(-2.0 * d.t);
        mlo = std::min(mlo, d.d_min * rep.radius_band_C / ref);
        mhi = std::min(mhi, rep.radius_band_C * ref / d.d_max);
      }
      row.radius_band_margin_lo = mlo;
      row.radius_band_margin_hi = mhi;
      row.radius_band_ok = mlo > 1 && mhi > 1;

      auto hs = huisken_series(traj, rec);
      double up = 0;
      for (size_t k = 0; k + 1 < hs.size(); ++k)
        up = std::max(up, (hs[k + 1].second - hs[k].second) / hs[k].second);
      row.huisken_max_uptick = up;
      row.huisken_monotone = !hs.empty() && up < 0.01;
      row.huisken_terminal = hs.empty() ? 0 : hs.back().second;

      if (i == 16) {
        jac16 = jacobi_residual(traj);
        bool ok = true;
        nc16.clear();
        for (const auto& s : traj.snapshots) {
          if (!(s.t < 0)) break;
          GeometryBundle g = geometry_bundle(s.curve);
          std::vector<double> q(s.curve.size());
          bool pos = true;
          for (size_t j = 0; j < q.size(); ++j) {
            q[j] = -(g.support[j] + 2.0 * s.t * g.H[j]);
            if (!(q[j] > 0)) pos = false;
          }
          if (!pos) {
            ok = false;
            break;
          }
          NoncollapseRatios r = noncollapsing_ratios(s.curve, q);
          nc16.push_back({s.t, r.max_interior, r.min_exterior});
        }
        for (size_t k = 1; k < nc16.size(); ++k) {
          if (nc16[k][1] > nc16[k - 1][1] * 1.02) ok = false;
          if (nc16[k][2] < nc16[k - 1][2] - 0.02 * std::abs(nc16[k - 1][2])) ok = false;
        }
        nc_ok = ok && !nc16.empty();
      }

      rescaled[idx] = rescale_snapshots(traj, rec);
      auto bd = blowdown_check(rescaled[idx], torus);
      row.blowdown_earliest = bd.empty() ? kInf : bd.front().second;
      bool btrend = !bd.empty();
      for (size_t k = 0; k + 1 < bd.size(); ++k)
        if (bd[k].second - bd[k + 1].second > 1e-4) btrend = false;
      row.blowdown_trend_ok = btrend;
      blowdowns[idx] = std::move(bd);
      rows[idx] = std::move(row);
    } catch (...) {
      errs[idx] = std::current_exception();
    }
  };

  int n_threads = std::min<int>(std::max(opt.threads, 1), (int)M);
  if (n_threads <= 1) {
    for (size_t idx = 0; idx < M; ++idx) worker(idx);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w)
      pool.emplace_back([&]() {
        for (size_t idx = next.fetch_add(1); idx < M; idx = next.fetch_add(1)) worker(idx);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  rep.rows = std::move(rows);
  rep.blowdown = std::move(blowdowns);
  rep.jacobi_16 = std::move(jac16);
  rep.noncollapse_16 = std::move(nc16);
  rep.noncollapse_trend_ok = nc_ok;

  rep.t_monotone = rep.d_monotone = true;
  rep.all_circle = rep.all_preserved = rep.all_enclosed = true;
  rep.all_radius_band = rep.all_huisken = true;
  double sup_min = kInf, sup_max = 0;
  for (size_t k = 0; k < rep.rows.size(); ++k) {
    const auto& row = rep.rows[k];
    if (!(row.t_i < 0) || !(row.d_i > 0)) rep.t_monotone = rep.d_monotone = false;
    if (k > 0) {
      if (!(row.t_i > rep.rows[k - 1].t_i)) rep.t_monotone = false;
      if (!(row.d_i < rep.rows[k - 1].d_i)) rep.d_monotone = false;
    }
    if (!row.circle_verdict) rep.all_circle = false;
    if (!(row.min_S_worst > 0) || !(row.max_F_worst < 0)) rep.all_preserved = false;
    if (!row.enclosure_ok) rep.all_enclosed = false;
    if (!row.radius_band_ok) rep.all_radius_band = false;
    if (!row.huisken_monotone) rep.all_huisken = false;
    if (row.clean) {
      sup_min = std::min(sup_min, row.type_one_sup);
      sup_max = std::max(sup_max, row.type_one_sup);
    }
  }
  rep.typeI_band_ratio = sup_min > 0 ? sup_max / sup_min : kInf;

  std::vector<int> clean_is;
  std::vector<RescaledFlow> clean_flows;
  for (size_t k = 0; k < rep.rows.size(); ++k)
    if (rep.rows[k].clean) {
      clean_is.push_back(rep.rows[k].i);
      clean_flows.push_back(std::move(rescaled[k]));
    }
  if (clean_flows.size() >= 3) rep.cauchy = convergence_report(clean_is, clean_flows);

  rep.blowdown_ok = !rep.rows.empty() && rep.rows.back().blowdown_earliest < 0.05;
  for (const auto& row : rep.rows)
    if (!row.blowdown_trend_ok) rep.blowdown_ok = false;

  return rep;
}

nlohmann::json family_report_to_json(const FamilyReport& rep) {
  nlohmann::json j;
  j["schema"] = "family_report v1";
  j["n"] = rep.n;
  j["i_list"] = rep.i_list;
  j["torus"] = {{"nodes", rep.torus.size()},
                {"residual_max", rep.torus_residual_max},
                {"entropy_sup", rep.torus_entropy_sup}};
  j["radius_band_C"] = rep.radius_band_C;
  j["cylinder_density"] = rep.cylinder_density;

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json row;
    row["i"] = r.i;
    row["clean"] = r.clean;
    row["flow_dir"] = r.flow_dir;
    row["hausdorff"] = r.hausdorff;
    row["nu_sup_diff"] = r.nu_sup_diff;
    row["kappa_sup_diff"] = r.kappa_sup_diff;
    row["min_S_initial"] = r.min_S_initial;
    row["min_S_predicted"] = r.min_S_predicted;
    row["min_S_worst"] = r.min_S_worst;
    row["max_F_worst"] = r.max_F_worst;
    row["witness_margin"] = r.witness_margin;
    row["t_i"] = r.t_i;
    row["d_i"] = r.d_i;
    row["center_x"] = r.center_x;
    row["ratio"] = r.ratio;
    row["t_tilde"] = r.t_tilde;
    row["typeI_constant"] = r.type_one_sup;
    row["entropy_sup"] = r.entropy_sup;
    row["entropy_gap"] = r.entropy_gap;
    row["circle_verdict"] = r.circle_verdict;
    row["confident"] = r.confident;
    row["enclosure_ok"] = r.enclosure_ok;
    row["radius_band_ok"] = r.radius_band_ok;
    row["radius_band_margin_lo"] = r.radius_band_margin_lo;
    row["radius_band_margin_hi"] = r.radius_band_margin_hi;
    row["huisken_monotone"] = r.huisken_monotone;
    row["huisken_terminal"] = r.huisken_terminal;
    row["huisken_max_uptick"] = r.huisken_max_uptick;
    row["blowdown_earliest"] = r.blowdown_earliest;
    row["blowdown_trend_ok"] = r.blowdown_trend_ok;
    row["steps"] = r.steps;
    rows.push_back(row);
  }
  j["rows"] = rows;

  nlohmann::json cauchy;
  cauchy["times"] = rep.cauchy.times;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : rep.cauchy.pairs) pairs.push_back({p.first, p.second});
  cauchy["pairs"] = pairs;
  cauchy["dist"] = rep.cauchy.dist;
  cauchy["decreasing"] = rep.cauchy.decreasing;
  j["cauchy"] = cauchy;

  nlohmann::json bd = nlohmann::json::array();
  for (size_t k = 0; k < rep.blowdown.size(); ++k) {
    nlohmann::json series = nlohmann::json::array();
    for (const auto& p : rep.blowdown[k]) series.push_back({p.first, p.second});
    bd.push_back({{"i", rep.i_list[k]}, {"series", series}});
  }
  j["blowdown"] = bd;

  nlohmann::json jac = nlohmann::json::array();
  for (const auto& p : rep.jacobi_16) jac.push_back({p.first, p.second});
  j["jacobi_16"] = jac;
  j["noncollapse_16"] = rep.noncollapse_16;
  j["noncollapse_trend_ok"] = rep.noncollapse_trend_ok;

  nlohmann::json v;
  v["t_monotone"] = rep.t_monotone;
  v["d_monotone"] = rep.d_monotone;
  v["typeI_band_ratio"] = rep.typeI_band_ratio;
  v["cauchy_decreasing"] = rep.cauchy.decreasing;
  v["blowdown_ok"] = rep.blowdown_ok;
  v["all_circle"] = rep.all_circle;
  v["all_preserved"] = rep.all_preserved;
  v["all_enclosed"] = rep.all_enclosed;
  v["all_radius_band"] = rep.all_radius_band;
  v["all_huisken"] = rep.all_huisken;
  j["verdicts"] = v;
  return j;
}

void write_family_outputs(const FamilyReport& rep, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_curve(rep.torus, dir + "/torus.json");
  write_text_file_atomic(dir + "/family_report.json", family_report_to_json(rep).dump(2) + "\n");

  std::vector<std::string> cols{"t"};
  for (const auto& p : rep.cauchy.pairs)
    cols.push_back("d_" + std::to_string(p.first) + "_" + std::to_string(p.second));
  std::vector<std::vector<double>> crows;
  for (size_t jt = 0; jt < rep.cauchy.times.size(); ++jt) {
    std::vector<double> r{rep.cauchy.times[jt]};
    for (const auto& drow : rep.cauchy.dist) r.push_back(drow[jt]);
    crows.push_back(std::move(r));
  }
  write_text_file_atomic(dir + "/cauchy.csv", csv_table("cauchy", cols, crows));

  std::vector<std::vector<double>> brows;
  for (size_t k = 0; k < rep.blowdown.size(); ++k)
    for (const auto& p : rep.blowdown[k])
      brows.push_back({(double)rep.i_list[k], p.first, p.second});
  write_text_file_atomic(dir + "/blowdown.csv", csv_table("blowdown", {"i", "t", "dist"}, brows));
}

std::string render_family_report(const std::string& family_dir, bool with_svg) {
  nlohmann::json rep = nlohmann::json::parse(read_text_file(family_dir + "/family_report.json"));

  nlohmann::json out;
  out["schema"] = "report_summary v1";
  out["n"] = rep.at("n");
  out["i_list"] = rep.at("i_list");
  out["verdicts"] = rep.at("verdicts");
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.at("rows"))
    rows.push_back({{"i", r.at("i")},
                    {"clean", r.at("clean")},
                    {"t_i", r.at("t_i")},
                    {"d_i", r.at("d_i")},
                    {"ratio", r.at("ratio")},
                    {"typeI_constant", r.at("typeI_constant")},
                    {"circle_verdict", r.at("circle_verdict")}});
  out["rows"] = rows;

  if (with_svg) {
    ProfileCurve torus = load_curve(family_dir + "/torus.json");
    struct Member {
      int i;
      std::vector<Snapshot> snaps;
      SingularityRecord rec;
    };
    std::vector<Member> members;
    for (const auto& r : rep.at("rows")) {
      Member m;
      m.i = r.at("i").get<int>();
      std::string dir = family_dir + "/" + r.at("flow_dir").get<std::string>();
      m.snaps = load_snapshots_dir(dir);
      m.rec = singularity_from_json(read_text_file(dir + "/singularity.json"));
      if (!m.snaps.empty()) members.push_back(std::move(m));
    }
    if (members.empty()) throw std::runtime_error("no flow snapshots found under " + family_dir);

    {  // each flow just before its singular time, against the shrinking torus
      std::vector<ProfileCurve> curves{torus};
      std::vector<SvgStyle> styles;
      styles.push_back({"#555555", 1.2, "T", true});
      for (const auto& m : members) {
        curves.push_back(m.snaps.back().curve);
        SvgStyle st;
        st.label = "T_" + std::to_string(m.i) + " late";
        styles.push_back(st);
      }
      write_text_file_atomic(family_dir + "/profiles_unrescaled.svg",
                             render_profile_svg(curves, styles, "perturbed flows, unrescaled"));
    }

    {  // parabolic rescalings at a common rescaled time
      double t_common = -kInf;
      std::vector<std::vector<Snapshot>> resc(members.size());
      for (size_t k = 0; k < members.size(); ++k) {
        double d = members[k].rec.d_sing, d2 = d * d;
        if (!(d > 0)) continue;
        for (const auto& s : members[k].snaps)
          resc[k].push_back({s.t / d2, scaled(s.curve, 1.0 / d)});
        if (!resc[k].empty()) t_common = std::max(t_common, resc[k].front().t);
      }
      if (!(t_common < 0)) throw std::runtime_error("no usable rescaled snapshots");
      std::vector<ProfileCurve> curves{scaled(torus, std::sqrt(-t_common))};
      std::vector<SvgStyle> styles;
      styles.push_back({"#555555", 1.2, "sqrt(-t) T", true});
      for (size_t k = 0; k < members.size(); ++k) {
        if (resc[k].empty()) continue;
        size_t best = 0;
        for (size_t s = 1; s < resc[k].size(); ++s)
          if (std::abs(resc[k][s].t - t_common) < std::abs(resc[k][best].t - t_common)) best = s;
        curves.push_back(resc[k][best].curve);
        SvgStyle st;
        st.label = "T_" + std::to_string(members[k].i);
        styles.push_back(st);
      }
      write_text_file_atomic(
          family_dir + "/profiles_rescaled.svg",
          render_profile_svg(curves, styles, "rescaled flows near t = " + format_double(t_common)));
    }

    {  // type-I ratio sup |A| sqrt(t_i - t) against rescaled time
      std::vector<std::vector<std::pair<double, double>>> series;
      std::vector<std::string> labels;
      for (const auto& m : members) {
        std::vector<std::pair<double, double>> s;
        double dd = m.rec.d_sing * m.rec.d_sing;
        for (const auto& snap : m.snaps) {
          double gap = m.rec.t_sing - snap.t;
          if (!(gap > 0)) continue;
          GeometryBundle g = geometry_bundle(snap.curve);
          s.emplace_back((snap.t - m.rec.t_sing) / dd, std::sqrt(g.max_abs_A2 * gap));
        }
        if (!s.empty()) {
          series.push_back(std::move(s));
          labels.push_back("i=" + std::to_string(m.i));
        }
      }
      write_text_file_atomic(family_dir + "/type_one_ratio.svg",
                             render_series_svg(series, labels, "type-I curvature ratio",
                                               "(t - t_i) / d_i^2", "max|A| sqrt(t_i - t)"));
    }
    out["svg"] = {"profiles_unrescaled.svg", "profiles_rescaled.svg", "type_one_ratio.svg"};
  }
  return out.dump(2) + "\n";
}

}  // namespace slab
