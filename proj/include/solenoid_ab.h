/*
 * solenoid_ab: C API for the limit-periodic small-divisor solver and the
 * solenoidal Beltrami tower.
 *
 * All functions return sab_status; SAB_OK means success.  Objects are opaque
 * handles released with the matching *_free call.  Strings returned through
 * char** are heap-allocated and released with sab_string_free.  On failure,
 * sab_last_error_message() describes the most recent error in the calling
 * thread.
 */
#ifndef SOLENOID_AB_H
#define SOLENOID_AB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sab_status {
    SAB_OK = 0,
    SAB_ERR_INVALID_ARGUMENT = 1,
    SAB_ERR_OVERFLOW = 2,
    SAB_ERR_NONZERO_AVERAGE = 3,
    SAB_ERR_RESONANT_MODE = 4,
    SAB_ERR_CERTIFICATE_FAILURE = 5,
    SAB_ERR_CHAIN = 6,
    SAB_ERR_SUPPORT_MARGIN = 7,
    SAB_ERR_ITERATION_BUDGET = 8,
    SAB_ERR_CONTRACTIVITY = 9,
    SAB_ERR_DEGENERATE = 10,
    SAB_ERR_DENOMINATOR_NEAR_ZERO = 11,
    SAB_ERR_OUT_OF_DOMAIN = 12,
    SAB_ERR_PARSE = 13,
    SAB_ERR_IO = 14,
    SAB_ERR_INTERNAL = 15
} sab_status;

const char* sab_status_name(sab_status status);
const char* sab_last_error_message(void);
void sab_string_free(char* text);

/* ---------------------------------------------------------------- series */

typedef struct sab_series sab_series;

/* JSON document: {"dimension": n, "terms": [{"mode": [["num","den"],...],
 * "re": ..., "im": ...}, ...]} with rationals as decimal strings. */
sab_status sab_series_from_json(const char* json_text, sab_series** out);
sab_status sab_series_to_json(const sab_series* series, char** out_text);
void sab_series_free(sab_series* series);

sab_status sab_series_level(const sab_series* series, int64_t* out_level);
sab_status sab_series_level_project(const sab_series* series, int64_t level, sab_series** out);
sab_status sab_series_homothety(const sab_series* series, int64_t num, int64_t den,
                                sab_series** out);
sab_status sab_series_strip_norm(const sab_series* series, double rho, int samples_per_period,
                                 double* out_sampled_lower, double* out_majorant_upper);
sab_status sab_series_s_norm(const sab_series* series, const int64_t* chain, size_t chain_len,
                             double rho, double* out_norm);

/* ----------------------------------------------------------- diophantine */

/* Scans the lattice ball 0 < |k|_2 <= K; returns the minimum of
 * |omega.k| |k|^exponent (and the minimizer when arg_min != NULL). */
sab_status sab_diophantine_margin(const double* omega, size_t dimension, int exponent, int64_t K,
                                  double* out_min, int64_t* arg_min);

/* Fails with SAB_ERR_CERTIFICATE_FAILURE when some |omega.k| |k|^exponent <= gamma. */
sab_status sab_certify_diophantine(const double* omega, size_t dimension, double gamma,
                                   int exponent, int64_t K);

/* Mode-wise solve of Df(omega) = g; requires a certified gamma/K pair. */
sab_status sab_solve_cohomological(const sab_series* g, const double* omega, size_t dimension,
                                   double gamma, int exponent, int64_t K, sab_series** out_f);

/* ------------------------------------------------------------- beltrami */

typedef struct sab_field sab_field;
typedef struct sab_map sab_map;

/* Builtin coefficient kinds: "radial_stretch" (params: c, radius),
 * "disk" (params: re, im, radius), "counterexample_windowed"
 * (params: terms, window_x, window_y, taper), "ring_and_tail"
 * (params: amplitude, scale).  params_json may be NULL for defaults. */
sab_status sab_field_builtin(const char* kind, const char* params_json, double center_re,
                             double center_im, double half_width_x, double half_width_y, int n,
                             sab_field** out);
sab_status sab_field_from_file(const char* path, sab_field** out);
sab_status sab_field_write(const sab_field* field, const char* path);
sab_status sab_field_sup(const sab_field* field, double* out_sup);
void sab_field_free(sab_field* field);

sab_status sab_solve_normal(const sab_field* mu, double tol, int max_iter, sab_map** out);
sab_status sab_map_eval(const sab_map* map, double re, double im, double* out_re, double* out_im);
sab_status sab_map_iterations(const sab_map* map, int* out_iterations);
sab_status sab_map_residual(const sab_map* map, const sab_field* mu, double* out_max_residual,
                            int64_t* out_dilatation_violations);
void sab_map_free(sab_map* map);

/* -------------------------------------------------------- counterexample */

sab_status sab_eval_mu_counterexample(double re, double im, int terms, double* out_re,
                                      double* out_im);
sab_status sab_eval_w_mu(double re, double im, int terms, double* out_re, double* out_im);
double sab_mu_counterexample_bound(void);
sab_status sab_verify_beltrami_identity(int terms, double half_width_x, double half_width_y,
                                        int grid_n, double h, double* out_max_residual);

/* -------------------------------------------------------------- commands */

/* Runs one CLI command ("solve-diophantine", "s-norm", "solve-beltrami",
 * "tower", "counterexample", "split-solve") on a JSON config document.
 * out_report_json receives the report; out_exit_code the verdict mapping
 * (0 positive, 1 usage/config error, 2 negative verdict). */
sab_status sab_run_command(const char* command, const char* config_json, char** out_report_json,
                           int* out_exit_code);

/* As above, additionally writing report/CSV outputs under out_dir with the
 * given base name (atomic writes). */
sab_status sab_run_command_to_dir(const char* command, const char* config_json,
                                  const char* out_dir, const char* base_name, int want_json,
                                  int want_csv, char** out_report_json, int* out_exit_code);

#ifdef __cplusplus
}
#endif

#endif /* SOLENOID_AB_H */
