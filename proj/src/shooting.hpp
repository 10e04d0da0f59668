#pragma once
#include <utility>
#include <vector>

#include "profile_curve.hpp"

namespace slab {

// Profile ODE of rotationally symmetric self-shrinkers:
//   dx/ds = cos(theta), dr/ds = sin(theta),
//   dtheta/ds = kappa = <X,nu>/2 - (n-1) nu_r / r
//             = (x sin(theta) - r cos(theta))/2 + (n-1) cos(theta)/r.
// Equivalently: geodesics of the Angenent metric lambda |dX|.
struct ShootOptions {
  double ds = 5e-4;       // RK4 arc-length step
  double s_max = 60.0;    // give-up arc length
  double r_floor = 1e-9;  // axis-contact threshold
  double coord_cap = 8.0; // escape threshold on |x| and r
};

enum class ShotKind { returned = 0, axis = 1, escape = 2, no_return = 3 };

struct ShotTrajectory {
  ShotKind kind = ShotKind::no_return;
  double miss = 0;  // theta_end - pi at the return crossing (valid when returned)
  std::vector<double> x, r, theta;
};

struct ScanRow {
  double r0 = 0, miss = 0;
  ShotKind kind = ShotKind::no_return;
};

struct ShootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShooterResult {
  int n = 2;
  double r0 = 0;
  double miss = 0;
  double residual_max = 0;
  bool converged = false;
  ProfileCurve profile;
  std::vector<std::pair<double, double>> bracket_history;  // (r0, miss) per iteration
};

void shrinker_ode_rhs(int n, double x, double r, double theta, double& dx, double& dr,
                      double& dtheta);

// Integrate from (0, r0, 0) until the trajectory returns to x = 0 moving left
// (cos(theta) < 0), or fails (axis / escape / no return).
ShotTrajectory shoot_half(int n, double r0, const ShootOptions& opt = {});

std::vector<ScanRow> scan_miss(int n, double lo, double hi, double step,
                               const ShootOptions& opt = {});
std::vector<std::pair<double, double>> find_brackets(const std::vector<ScanRow>& rows);

// Bisect the miss angle to |miss| < tol inside the bracket, assemble the closed
// profile (half trajectory + x-mirror), resample to n_nodes, symmetrize.
ShooterResult find_torus(int n, double lo, double hi, double tol, size_t n_nodes,
                         const ShootOptions& opt = {});

// Bracket-free variant: scan r0 below the cylinder radius sqrt(2(n-1)) for a
// sign change of the miss angle, then bisect the first bracket found.
ShooterResult find_torus_auto(int n, double tol, size_t n_nodes,
                              const ShootOptions& opt = {});

// Analytic fixtures.
ProfileCurve reference_sphere(int n, double radius, size_t nodes, double center_x = 0);
ProfileCurve reference_circle(int n, double cx, double cr, double radius, size_t nodes);
ProfileCurve reference_cylinder_segment(int n, double r, double x0, double x1, size_t nodes);

nlohmann::json shooter_result_to_json(const ShooterResult& res);

}  // namespace slab
