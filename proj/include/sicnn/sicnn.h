/* C interface to the SICNN toolkit.
 *
 * Every function returns a sicnn_status. On failure the message is kept per
 * thread and can be read with sicnn_last_error() until the next call.
 * Strings returned through char** are owned by the caller and released with
 * sicnn_string_free(). Handles are released with their *_free function.
 */
#ifndef SICNN_H
#define SICNN_H

#include <stddef.h>
#include <stdint.h>

#if defined(SICNN_BUILDING)
#define SICNN_API __attribute__((visibility("default")))
#else
#define SICNN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sicnn_status {
  SICNN_OK = 0,
  SICNN_FAIL = 1,            /* a certification or verification check failed */
  SICNN_ERR_CONFIG = 2,      /* invalid configuration */
  SICNN_ERR_SOLVER = 3,      /* the integrator could not proceed */
  SICNN_ERR_RANGE = 4,       /* query outside a schedule or trajectory range */
  SICNN_ERR_ARGUMENT = 5,    /* invalid argument, including null pointers */
  SICNN_ERR_INTERNAL = 6
} sicnn_status;

typedef struct sicnn_model sicnn_model;
typedef struct sicnn_trajectory sicnn_trajectory;

typedef struct sicnn_constants {
  double mu;
  double c_bar;
  double d_bar;
  double L_bar;
  double l_bar;
  double gamma0;
  double H; /* NaN when H_defined is 0 */
  int H_defined;
  double theta_bar;
  double theta_under;
  double zeta_under;
  double M;
  double L;
  double tau;
} sicnn_constants;

/* Activation callback: seg_t and seg_gamma hold n samples of x_kl on the
 * windows [t - tau, t] and [gamma(t) - tau, gamma(t)], oldest first. */
typedef double (*sicnn_activation_fn)(void* user, const double* seg_t, const double* seg_gamma, size_t n,
                                      double tau);

SICNN_API const char* sicnn_version(void);
SICNN_API const char* sicnn_last_error(void);
SICNN_API void sicnn_string_free(char* s);

/* Configuration documents (JSON text). */
SICNN_API sicnn_status sicnn_preset_json(const char* name, char** out_json);
/* Applies "a.b.c=value" and returns the new document. */
SICNN_API sicnn_status sicnn_config_override(const char* config_json, const char* assignment, char** out_json);

/* Model lifecycle; the document is validated in full. */
SICNN_API sicnn_status sicnn_model_create(const char* config_json, sicnn_model** out);
SICNN_API sicnn_status sicnn_model_from_preset(const char* name, sicnn_model** out);
SICNN_API void sicnn_model_free(sicnn_model* model);

SICNN_API sicnn_status sicnn_model_grid(const sicnn_model* model, int* rows, int* cols);
SICNN_API sicnn_status sicnn_model_cell_name(const sicnn_model* model, size_t cell, char** out);
SICNN_API sicnn_status sicnn_model_constants(const sicnn_model* model, sicnn_constants* out);
/* Writes rows * cols coupling sums, row-major. */
SICNN_API sicnn_status sicnn_model_coupling_sums(const sicnn_model* model, double* out, size_t n);
/* Replaces the activation; samples >= 2 points per window are passed to fn. */
SICNN_API sicnn_status sicnn_model_set_activation(sicnn_model* model, sicnn_activation_fn fn, void* user,
                                                  size_t samples, double M, double L);

/* Argument schedule. */
SICNN_API sicnn_status sicnn_gamma(const sicnn_model* model, double t, double* out);
SICNN_API sicnn_status sicnn_interval_index(const sicnn_model* model, double t, int64_t* out);
SICNN_API sicnn_status sicnn_theta(const sicnn_model* model, int64_t p, double* theta, double* zeta);

/* Condition report as JSON; *all_pass is 1 when every condition holds.
 * Returns SICNN_OK even when conditions fail. */
SICNN_API sicnn_status sicnn_check(const sicnn_model* model, char** report_json, int* all_pass);

/* Initial value problem with the configured sigma and phi (psi), up to t_end. */
SICNN_API sicnn_status sicnn_simulate(const sicnn_model* model, double t_end, sicnn_trajectory** out);
/* Initial value problem with constant initial data phi (and psi, may be null). */
SICNN_API sicnn_status sicnn_solve(const sicnn_model* model, double sigma, const double* phi, const double* psi,
                                   size_t n, double t_end, sicnn_trajectory** out);
/* Bounded solution on [t0, t1]; SICNN_FAIL when the conditions are not certified. */
SICNN_API sicnn_status sicnn_bounded_solution(const sicnn_model* model, double t0, double t1, double accuracy,
                                              sicnn_trajectory** out, char** report_json);

SICNN_API sicnn_status sicnn_trajectory_span(const sicnn_trajectory* traj, double* start, double* end);
SICNN_API sicnn_status sicnn_trajectory_cells(const sicnn_trajectory* traj, size_t* cells);
SICNN_API sicnn_status sicnn_trajectory_eval(const sicnn_trajectory* traj, double t, double* out, size_t n);
SICNN_API sicnn_status sicnn_trajectory_csv(const sicnn_trajectory* traj, double t0, double t1, double stride,
                                            char** out);
SICNN_API sicnn_status sicnn_trajectory_svg(const sicnn_trajectory* traj, double t0, double t1, double stride,
                                            const char* title, char** out);
/* Defect of the variation-of-constants identity over [t0, t1]. */
SICNN_API sicnn_status sicnn_trajectory_residual(const sicnn_trajectory* traj, double t0, double t1, double* out);
/* Picard statistics per interval as JSON. */
SICNN_API sicnn_status sicnn_trajectory_intervals(const sicnn_trajectory* traj, char** out_json);
SICNN_API void sicnn_trajectory_free(sicnn_trajectory* traj);

/* Envelope check from the configured initial data; *pass is 1 with no violations.
 * SICNN_FAIL when C7 is not certified. */
SICNN_API sicnn_status sicnn_stability(const sicnn_model* model, double delta, double horizon, char** report_json,
                                       int* pass);
SICNN_API sicnn_status sicnn_scan(const sicnn_trajectory* traj, double eps, double alpha_min, double alpha_max,
                                  double alpha_step, double window_start, double window_end, char** report_json);

/* Runs a driver command (check, simulate, ap, stability, scan) with the
 * parameters of the model's configuration. csv and svg may be null; they
 * receive an empty string when the command writes nothing. The status is
 * SICNN_OK on pass and SICNN_FAIL on a failed check. */
SICNN_API sicnn_status sicnn_run(const sicnn_model* model, const char* command, int plot, char** report_json,
                                 char** csv, char** svg);

#ifdef __cplusplus
}
#endif

#endif
