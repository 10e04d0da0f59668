#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "family.hpp"
#include "flow.hpp"
#include "io_util.hpp"
#include "profile_curve.hpp"
#include "shooting.hpp"
#include "test_helpers.hpp"

using namespace slab;

namespace {

constexpr double kPi = 3.14159265358979323846;

const ProfileCurve& torus256() {
  static ProfileCurve c = find_torus_auto(2, 1e-10, 256).profile;
  return c;
}

}  // namespace

TEST_SUITE("family") {

TEST_CASE("inward offsets scale like 1/i") {
  PerturbResult pr = build_perturbed(torus256(), 8);
  CHECK(pr.i == 8);
  CHECK(pr.hausdorff_c0 * 8.0 == doctest::Approx(1.0).epsilon(0.2));
  CHECK(pr.min_S_predicted > 0);
  CHECK(pr.min_S_measured == doctest::Approx(pr.min_S_predicted).epsilon(0.3));
  CHECK(!has_self_intersection(pr.curve));
  CHECK(pr.curve.closed);

  // offsetting past the focal distance cannot give a valid member
  CHECK_THROWS_AS(build_perturbed(torus256(), 1), CurveError);
}

TEST_CASE("small family end to end with resume and report") {
  std::string dir = fresh_dir("family_tiny");
  FamilyOptions fopt;
  fopt.i_list = {4, 8, 16};
  fopt.t0 = -1.0;
  fopt.threads = 1;
  fopt.out_dir = dir;
  FamilyReport rep = run_family(torus256(), fopt);

  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.n == 2);
  CHECK(rep.torus_residual_max > 0);
  CHECK(rep.torus_residual_max < 1e-3);
  CHECK(rep.cylinder_density == doctest::Approx(std::sqrt(2.0 * kPi / std::exp(1.0))));

  for (const FamilyMemberRow& row : rep.rows) {
    CAPTURE(row.i);
    CHECK(row.clean);
    CHECK(row.confident);
    CHECK(row.circle_verdict);
    CHECK(row.t_i < 0);
    CHECK(row.d_i > 0);
    CHECK(row.min_S_worst > 0);
    CHECK(row.max_F_worst < 0);
    CHECK(row.witness_margin > 10.0);
    CHECK(std::isfinite(row.type_one_sup));
    CHECK(row.type_one_sup > 0);
    CHECK(row.enclosure_ok);
    CHECK(row.radius_band_ok);
    CHECK(row.radius_band_margin_lo > 1.0);
    CHECK(row.radius_band_margin_hi > 1.0);
    CHECK(row.huisken_monotone);
    CHECK(row.steps > 0);
  }

  CHECK(rep.rows[0].i == 4);
  CHECK(rep.rows[1].i == 8);
  CHECK(rep.rows[2].i == 16);
  CHECK(rep.t_monotone);
  CHECK(rep.d_monotone);
  CHECK(rep.rows[0].t_i < rep.rows[1].t_i);
  CHECK(rep.rows[1].t_i < rep.rows[2].t_i);
  CHECK(rep.rows[0].d_i > rep.rows[1].d_i);
  CHECK(rep.rows[1].d_i > rep.rows[2].d_i);
  CHECK(rep.all_circle);
  CHECK(rep.all_preserved);
  CHECK(rep.all_enclosed);
  CHECK(rep.all_radius_band);
  CHECK(rep.all_huisken);
  CHECK(rep.typeI_band_ratio >= 1.0);
  CHECK(rep.typeI_band_ratio < 2.0);

  CHECK(rep.cauchy.times.size() == 12);
  REQUIRE(rep.cauchy.pairs.size() == 2);
  CHECK(rep.cauchy.pairs[0] == std::make_pair(4, 8));
  CHECK(rep.cauchy.pairs[1] == std::make_pair(8, 16));
  CHECK(rep.cauchy.decreasing);

  REQUIRE(rep.blowdown.size() == 3);
  for (const auto& series : rep.blowdown) CHECK(!series.empty());
  CHECK(!rep.jacobi_16.empty());
  REQUIRE(!rep.noncollapse_16.empty());
  for (const auto& r : rep.noncollapse_16) REQUIRE(r.size() == 3);

  write_family_outputs(rep, dir);
  namespace fs = std::filesystem;
  CHECK(fs::exists(dir + "/family_report.json"));
  CHECK(fs::exists(dir + "/torus.json"));
  CHECK(fs::exists(dir + "/cauchy.csv"));
  CHECK(fs::exists(dir + "/blowdown.csv"));
  CHECK(fs::exists(dir + "/run_4/run.json"));
  CHECK(fs::exists(dir + "/run_16/singularity.json"));
  CHECK(read_text_file(dir + "/cauchy.csv").rfind("# cauchy v1", 0) == 0);

  // a second pass resumes from the archived runs and reproduces the report
  FamilyReport rep2 = run_family(torus256(), fopt);
  REQUIRE(rep2.rows.size() == rep.rows.size());
  for (size_t k = 0; k < rep.rows.size(); ++k) {
    CHECK(rep2.rows[k].t_i == rep.rows[k].t_i);
    CHECK(rep2.rows[k].d_i == rep.rows[k].d_i);
    CHECK(rep2.rows[k].steps == rep.rows[k].steps);
  }
  CHECK(family_report_to_json(rep2).dump(2) == family_report_to_json(rep).dump(2));

  // report rendering is a pure function of the archive
  std::string summary1 = render_family_report(dir, true);
  nlohmann::json sj = nlohmann::json::parse(summary1);
  CHECK(sj.at("rows").size() == 3);
  CHECK(fs::exists(dir + "/profiles_unrescaled.svg"));
  CHECK(fs::exists(dir + "/profiles_rescaled.svg"));
  CHECK(fs::exists(dir + "/type_one_ratio.svg"));
  std::string svg1 = read_text_file(dir + "/profiles_rescaled.svg");
  std::string summary2 = render_family_report(dir, true);
  CHECK(summary2 == summary1);
  CHECK(read_text_file(dir + "/profiles_rescaled.svg") == svg1);
}

}  // TEST_SUITE
