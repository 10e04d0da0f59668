// Command-line front end. Talks to the core exclusively through the C API in
// shrinkerlab.h; local parsing/serialization uses CLI11 and nlohmann::json.
//
// Exit codes: 64 unknown command, 65 invalid configuration or input,
// 3 numerical/internal fault. `evolve` exits with the flow outcome
// (0 singular, 2 truncated, 3 fault).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shrinkerlab.h"

namespace {

constexpr int kExitUnknownCommand = 64;
constexpr int kExitBadConfig = 65;
constexpr int kExitFault = 3;

bool g_quiet = false;

int fail(slab_status st) {
  std::cerr << "error: " << slab_status_message(st);
  if (slab_last_error()[0]) std::cerr << ": " << slab_last_error();
  if (slab_last_error_node() >= 0) std::cerr << " (node " << slab_last_error_node() << ")";
  std::cerr << "\n";
  switch (st) {
    case SLAB_ERR_INVALID_ARGUMENT:
    case SLAB_ERR_INVALID_CURVE:
    case SLAB_ERR_IO:
      return kExitBadConfig;
    default:
      return kExitFault;
  }
}

int fail_config(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kExitBadConfig;
}

struct CurveHandle {
  slab_curve* ptr = nullptr;
  ~CurveHandle() { slab_curve_free(ptr); }
};

struct ResultHandle {
  slab_shooter_result* ptr = nullptr;
  ~ResultHandle() { slab_shooter_result_free(ptr); }
};

struct TextHandle {
  char* ptr = nullptr;
  ~TextHandle() { slab_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  f.flush();
  if (!f) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_shoot(int n, const std::string& scan, const std::string& out_path) {
  double lo = 0, hi = 0, step = 0;
  if (std::sscanf(scan.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
    return fail_config("--scan expects lo:hi:step, got '" + scan + "'");
  TextHandle rows;
  slab_status st = slab_shoot_scan_json(n, lo, hi, step, &rows.ptr);
  if (st != SLAB_OK) return fail(st);
  if (out_path.empty())
    std::cout << rows.str();
  else if (!write_file(out_path, rows.str()))
    return kExitFault;
  if (!g_quiet) {
    auto j = nlohmann::json::parse(rows.str());
    int brackets = 0;
    for (size_t k = 1; k < j.size(); ++k) {
      if (j[k - 1]["kind"] == "returned" && j[k]["kind"] == "returned" &&
          j[k - 1]["miss"].get<double>() * j[k]["miss"].get<double>() < 0) {
        ++brackets;
        std::cerr << "bracket: [" << fmt(j[k - 1]["r0"].get<double>()) << ", "
                  << fmt(j[k]["r0"].get<double>()) << "]\n";
      }
    }
    std::cerr << "scanned " << j.size() << " radii, " << brackets << " sign-change bracket"
              << (brackets == 1 ? "" : "s") << "\n";
  }
  return 0;
}

int run_find_torus(int n, const std::string& bracket, double tol, size_t nodes,
                   const std::string& out_path) {
  double lo = 0, hi = 0;
  if (!bracket.empty() && std::sscanf(bracket.c_str(), "%lf,%lf", &lo, &hi) != 2)
    return fail_config("--bracket expects lo,hi, got '" + bracket + "'");
  ResultHandle res;
  slab_status st = slab_find_torus(n, lo, hi, tol, nodes, &res.ptr);
  if (st != SLAB_OK) return fail(st);
  CurveHandle curve;
  st = slab_shooter_result_curve(res.ptr, &curve.ptr);
  if (st != SLAB_OK) return fail(st);
  st = slab_curve_save(curve.ptr, out_path.c_str());
  if (st != SLAB_OK) return fail(st);
  TextHandle sidecar;
  st = slab_shooter_result_json(res.ptr, &sidecar.ptr);
  if (st != SLAB_OK) return fail(st);
  std::string side_path = out_path;
  if (side_path.size() > 5 && side_path.substr(side_path.size() - 5) == ".json")
    side_path.resize(side_path.size() - 5);
  side_path += ".shooter.json";
  if (!write_file(side_path, sidecar.str())) return kExitFault;
  if (!g_quiet) {
    auto j = nlohmann::json::parse(sidecar.str());
    std::cerr << "n=" << n << " r0=" << fmt(j["r0"].get<double>())
              << " miss=" << fmt(j["miss"].get<double>())
              << " residual_max=" << fmt(j["residual_max"].get<double>()) << " -> " << out_path
              << " (+ " << side_path << ")\n";
  }
  return 0;
}

int run_entropy(const std::string& curve_path, bool sup_grid, const std::string& csv_path) {
  CurveHandle curve;
  slab_status st = slab_curve_load(curve_path.c_str(), &curve.ptr);
  if (st != SLAB_OK) return fail(st);
  TextHandle rep;
  st = slab_entropy_report_json(curve.ptr, sup_grid ? 1 : 0, &rep.ptr);
  if (st != SLAB_OK) return fail(st);
  std::cout << rep.str();
  if (!csv_path.empty()) {
    auto j = nlohmann::json::parse(rep.str());
    std::ifstream probe(csv_path);
    bool fresh = !probe.good();
    probe.close();
    std::ofstream f(csv_path, std::ios::app);
    if (fresh) f << "# entropy_rows v1\nn,L_n,A,F01,entropy_sup,bound_dn\n";
    f << j["n"].get<int>() << ',' << fmt(j["L_n"].get<double>()) << ','
      << fmt(j["A"].get<double>()) << ',' << fmt(j["F01"].get<double>()) << ','
      << fmt(j["entropy_sup"].get<double>()) << ',' << fmt(j["bound_dn"].get<double>()) << "\n";
    f.flush();
    if (!f) {
      std::cerr << "error: cannot append to " << csv_path << "\n";
      return kExitFault;
    }
  }
  return 0;
}

int run_evolve(const std::string& curve_path, double t0, int n_expected,
               std::optional<double> t_cap, size_t nodes, const std::string& out_dir) {
  CurveHandle curve;
  slab_status st = slab_curve_load(curve_path.c_str(), &curve.ptr);
  if (st != SLAB_OK) return fail(st);
  if (n_expected > 0) {
    int n_curve = 0;
    slab_curve_stats(curve.ptr, &n_curve, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr);
    if (n_curve != n_expected)
      return fail_config("curve has n=" + std::to_string(n_curve) + ", --n says " +
                         std::to_string(n_expected));
  }
  size_t n_nodes = 0;
  slab_curve_stats(curve.ptr, nullptr, nullptr, nullptr, &n_nodes, nullptr, nullptr, nullptr);
  if (nodes > 0 && nodes != n_nodes) {
    CurveHandle resampled;
    st = slab_curve_resample(curve.ptr, nodes, &resampled.ptr);
    if (st != SLAB_OK) return fail(st);
    std::swap(curve.ptr, resampled.ptr);
  }
  int outcome = kExitFault;
  TextHandle summary;
  st = slab_evolve_to_dir(curve.ptr, t0, t_cap.has_value() ? 1 : 0, t_cap.value_or(0),
                          out_dir.c_str(), &outcome, &summary.ptr);
  if (st != SLAB_OK) return fail(st);
  std::cout << summary.str();
  if (!g_quiet) {
    auto j = nlohmann::json::parse(summary.str());
    std::cerr << "outcome=" << outcome << " (" << j["stop_reason"].get<std::string>()
              << ") t_end=" << fmt(j["t_end"].get<double>()) << " steps=" << j["steps"].get<size_t>()
              << " -> " << out_dir << "\n";
  }
  return outcome;
}

int run_construct(int n, const std::vector<int>& i_list, size_t nodes, double t0,
                  const std::string& curve_path, const std::string& out_dir, int threads) {
  CurveHandle curve;
  if (!curve_path.empty()) {
    slab_status st = slab_curve_load(curve_path.c_str(), &curve.ptr);
    if (st != SLAB_OK) return fail(st);
  }
  TextHandle summary;
  slab_status st = slab_construct_family(curve.ptr, n, i_list.data(), i_list.size(), nodes, t0,
                                         out_dir.c_str(), threads, &summary.ptr);
  if (st != SLAB_OK) return fail(st);
  std::cout << summary.str();
  if (!g_quiet) std::cerr << "family archived under " << out_dir << "\n";
  return 0;
}

int run_report(const std::string& family_dir, bool svg) {
  TextHandle summary;
  slab_status st = slab_report_render(family_dir.c_str(), svg ? 1 : 0, &summary.ptr);
  if (st != SLAB_OK) return fail(st);
  std::cout << summary.str();
  if (!g_quiet && svg)
    std::cerr << "figures written under " << family_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::set<std::string> known{"shoot", "find-torus", "entropy", "evolve", "construct",
                                    "report"};
  if (argc >= 2 && argv[1][0] != '-' && !known.count(argv[1])) {
    std::cerr << "error: unknown command '" << argv[1] << "'\n";
    return kExitUnknownCommand;
  }

  CLI::App app{"rotationally symmetric self-shrinkers: shooting, entropy, flow, families"};
  app.require_subcommand(0, 1);
  app.add_flag("--quiet", g_quiet, "suppress progress chatter on stderr");

  int n = 2;
  // find-torus installs a default_val on its --out, which CLI11 writes into the
  // bound variable up front; shoot needs its own string so an omitted --out
  // still means stdout.
  std::string scan_spec, scan_out, out_path, bracket, curve_path, out_dir, family_dir, csv_path;
  double tol = 1e-12, t0 = -1.0, t_cap_val = 0;
  bool sup_grid = false, svg = false;
  size_t nodes = 0;
  std::vector<int> i_list{4, 8, 16, 32};
  int threads = 0, evolve_n = 0;

  CLI::App* shoot = app.add_subcommand("shoot", "scan the shooting miss angle over r0");
  shoot->add_option("--n", n, "ambient rotation dimension (n >= 2)")->capture_default_str();
  shoot->add_option("--scan", scan_spec, "radius scan lo:hi:step")->required();
  shoot->add_option("--out", scan_out, "write scan rows here instead of stdout");

  CLI::App* find = app.add_subcommand("find-torus", "bisect the closed shrinking doughnut");
  find->add_option("--n", n, "ambient rotation dimension (n >= 2)")->capture_default_str();
  find->add_option("--bracket", bracket, "miss-angle bracket lo,hi (omit to auto-scan)");
  find->add_option("--tol", tol, "miss-angle tolerance")->capture_default_str();
  find->add_option("--nodes", nodes, "resampled profile size (default 2048)");
  find->add_option("--out", out_path, "output curve path")->default_val("torus.json");

  CLI::App* entropy = app.add_subcommand("entropy", "Gaussian entropy report for a profile");
  entropy->add_option("--curve", curve_path, "profile curve JSON")->required();
  entropy->add_flag("--sup-grid", sup_grid, "maximize the Gaussian density over a center/scale grid");
  entropy->add_option("--csv", csv_path, "append a summary row to this file");

  CLI::App* evolve = app.add_subcommand("evolve", "run mean curvature flow to the first singularity");
  evolve->add_option("--curve", curve_path, "initial profile curve JSON")->required();
  evolve->add_option("--t0", t0, "initial time")->capture_default_str();
  evolve->add_option("--n", evolve_n, "expected dimension (checked against the curve)");
  CLI::Option* cap_opt = evolve->add_option("--t-cap", t_cap_val, "truncate the run at this time");
  evolve->add_option("--nodes", nodes, "resample the curve before flowing");
  evolve->add_option("--out", out_dir, "run directory")->required();

  CLI::App* construct = app.add_subcommand("construct", "build and flow the perturbed family");
  construct->add_option("--n", n, "ambient rotation dimension (n >= 2)")->capture_default_str();
  construct->add_option("--i", i_list, "perturbation indices")->delimiter(',')->capture_default_str();
  construct->add_option("--nodes", nodes, "profile size (default 1024)");
  construct->add_option("--t0", t0, "initial time")->capture_default_str();
  construct->add_option("--curve", curve_path, "torus profile (omit to shoot for it)");
  construct->add_option("--threads", threads, "worker threads (default SHRINKERLAB_THREADS or 1)");
  construct->add_option("--out", out_dir, "family directory")->required();

  CLI::App* report = app.add_subcommand("report", "summarize an archived family directory");
  report->add_option("--family", family_dir, "family directory")->required();
  report->add_flag("--svg", svg, "render profile overlays and the type-I ratio figure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 0;
  }

  if (shoot->parsed()) return run_shoot(n, scan_spec, scan_out);
  if (find->parsed()) return run_find_torus(n, bracket, tol, nodes, out_path);
  if (entropy->parsed()) return run_entropy(curve_path, sup_grid, csv_path);
  if (evolve->parsed())
    return run_evolve(curve_path, t0, evolve_n,
                      cap_opt->count() ? std::optional<double>(t_cap_val) : std::nullopt, nodes,
                      out_dir);
  if (construct->parsed()) return run_construct(n, i_list, nodes, t0, curve_path, out_dir, threads);
  if (report->parsed()) return run_report(family_dir, svg);
  return kExitUnknownCommand;
}
