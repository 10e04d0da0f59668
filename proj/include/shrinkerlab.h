#ifndef SHRINKERLAB_H
#define SHRINKERLAB_H

/* C interface to the shrinker laboratory: profile curves of rotationally
 * symmetric hypersurfaces, self-shrinking torus construction by geodesic
 * shooting, Gaussian entropy machinery, mean-curvature-flow evolution to the
 * first singularity, and the inward-perturbation family pipeline.
 *
 * Conventions: objects are opaque handles freed with the matching *_free
 * call; every fallible function returns slab_status and leaves a thread-local
 * detail message readable via slab_last_error(). Returned strings are
 * malloc'd UTF-8 owned by the caller (free with slab_string_free).
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slab_status {
  SLAB_OK = 0,
  SLAB_ERR_INVALID_ARGUMENT = 1, /* bad parameter or malformed input text */
  SLAB_ERR_INVALID_CURVE = 2,    /* curve fails validation or a geometric precondition */
  SLAB_ERR_IO = 3,               /* file read/write failure */
  SLAB_ERR_NUMERIC = 4,          /* iteration failed to converge / no bracket */
  SLAB_ERR_FAULT = 5             /* internal fault */
} slab_status;

typedef struct slab_curve slab_curve;
typedef struct slab_shooter_result slab_shooter_result;

/* Static description of a status code. */
const char* slab_status_message(slab_status status);
/* Thread-local detail of the most recent failure ("" when none). */
const char* slab_last_error(void);
/* Offending node index of the most recent failure, or -1. */
int slab_last_error_node(void);

void slab_string_free(char* text);

/* ---- profile curves ---- */

slab_status slab_curve_load(const char* path, slab_curve** out);
slab_status slab_curve_save(const slab_curve* curve, const char* path);
slab_status slab_curve_from_json(const char* text, slab_curve** out);
slab_status slab_curve_to_json(const slab_curve* curve, char** out_text);
void slab_curve_free(slab_curve* curve);

slab_status slab_curve_stats(const slab_curve* curve, int* n, int* closed, int* axis_anchored,
                             size_t* nodes, double* length, double* d_min, double* d_max);
slab_status slab_curve_resample(const slab_curve* curve, size_t nodes, slab_curve** out);
/* Normal offset X + a*nu (a < 0 moves inward). */
slab_status slab_curve_offset(const slab_curve* curve, double a, slab_curve** out);
slab_status slab_curve_scale(const slab_curve* curve, double factor, slab_curve** out);
slab_status slab_curve_hausdorff(const slab_curve* a, const slab_curve* b, double* out);
/* max |H - <X,nu>/2| and min (H - <X,nu>/2) over nodes. */
slab_status slab_curve_residual_max(const slab_curve* curve, double* out);
slab_status slab_curve_residual_min(const slab_curve* curve, double* out);
/* Even-odd containment of inner in the closed region bounded by outer. */
slab_status slab_curve_enclosure(const slab_curve* inner, const slab_curve* outer,
                                 int* enclosed, int* intersects);

/* ---- entropy machinery ---- */

/* EntropyReport as JSON; with_sup_grid != 0 adds the F-functional grid sup. */
slab_status slab_entropy_report_json(const slab_curve* curve, int with_sup_grid,
                                     char** out_json);
/* Gaussian density F_{(a,d),t0}: center on the axis at x = a, distance d from
 * the axis, scale t0 > 0. */
slab_status slab_gaussian_density(const slab_curve* curve, double center_a, double center_d,
                                  double t0, double* out);
double slab_cylinder_density(int n);
/* 2^n Gamma(n/2), the weighted-length entropy bound. */
double slab_dn_bound(int n);

/* ---- geodesic shooting ---- */

/* Scan of the shooting miss angle over r0 in [lo, hi] with the given step;
 * returns JSON rows [{"r0":..,"miss":..,"kind":".."}, ...]. */
slab_status slab_shoot_scan_json(int n, double lo, double hi, double step, char** out_json);
/* Bisect inside [lo, hi]; pass lo = hi = 0 to auto-detect the bracket. */
slab_status slab_find_torus(int n, double lo, double hi, double tol, size_t nodes,
                            slab_shooter_result** out);
slab_status slab_shooter_result_json(const slab_shooter_result* result, char** out_json);
slab_status slab_shooter_result_curve(const slab_shooter_result* result, slab_curve** out);
void slab_shooter_result_free(slab_shooter_result* result);

/* ---- mean curvature flow ---- */

/* Evolve to the first singularity (or t_cap when use_t_cap != 0), writing
 * series.csv, snap_<k>.json, events.json, singularity.json, run.json under
 * out_dir. outcome: 0 = singular, 2 = truncated, 3 = fault. */
slab_status slab_evolve_to_dir(const slab_curve* curve, double t0, int use_t_cap,
                               double t_cap, const char* out_dir, int* outcome,
                               char** out_summary_json);

/* ---- perturbation family ---- */

/* Full family pipeline: T_i = torus - (1/i)nu, flow, rescale, aggregate.
 * torus may be NULL (found by shooting at `nodes` nodes for the given n).
 * Writes family_report.json, cauchy.csv, blowdown.csv, torus.json and per-i
 * run directories under out_dir. threads <= 0 picks a default. */
slab_status slab_construct_family(const slab_curve* torus, int n, const int* i_list,
                                  size_t i_count, size_t nodes, double t0,
                                  const char* out_dir, int threads,
                                  char** out_summary_json);

/* Render report figures from an archived family directory; with_svg != 0
 * writes profiles_unrescaled.svg, profiles_rescaled.svg, type_one_ratio.svg. */
slab_status slab_report_render(const char* family_dir, int with_svg,
                               char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* SHRINKERLAB_H */
