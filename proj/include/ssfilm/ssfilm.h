/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the ssfilm library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return an ssf_status; on failure ssf_last_error() describes the
 * problem (the message is thread-local and valid until the next call on the
 * same thread). Output handles are set only on success.
 */

#ifndef SSFILM_H
#define SSFILM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SSF_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SSF_API __attribute__((visibility("default")))
#else
#define SSF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssf_status {
  SSF_OK = 0,
  SSF_ERR_INVALID_ARGUMENT = 1,
  SSF_ERR_CONFIG = 2,
  SSF_ERR_IO = 3,
  SSF_ERR_SOLVER = 4,
  SSF_ERR_STABILITY = 5,
  SSF_ERR_INTERNAL = 6
} ssf_status;

typedef enum ssf_solver_kind { SSF_SOLVER_PSD = 0, SSF_SOLVER_PNCG1 = 1, SSF_SOLVER_PNCG2 = 2 } ssf_solver_kind;
typedef enum ssf_line_search { SSF_LINE_SEARCH_EXACT = 0, SSF_LINE_SEARCH_SECANT = 1 } ssf_line_search;
typedef enum ssf_interp { SSF_INTERP_NEAREST = 0, SSF_INTERP_BILINEAR = 1 } ssf_interp;
typedef enum ssf_init_kind { SSF_INIT_ZERO = 0, SSF_INIT_SINUSOIDAL = 1, SSF_INIT_RANDOM = 2 } ssf_init_kind;

typedef struct ssf_scheme {
  double epsilon;
  double A;
  double dt;
  int allow_small_A;
} ssf_scheme;

typedef struct ssf_solver_opts {
  ssf_solver_kind kind;
  double rel_tol;
  double abs_tol;
  int max_iter;
  ssf_line_search line_search;
} ssf_solver_opts;

typedef struct ssf_record {
  int k;
  double t;
  double energy;
  double modified_energy;
  double mass;
  double roughness;
  double h2_norm;
  int iterations;
  double wall_ms;
} ssf_record;

typedef struct ssf_cauchy_row {
  int m_coarse;
  int m_fine;
  double h_coarse;
  double h_fine;
  double error;
  double rate; /* NaN on the first row */
  double avg_iterations;
  double cpu_per_step_s;
} ssf_cauchy_row;

typedef struct ssf_field ssf_field;
typedef struct ssf_stepper ssf_stepper;
typedef struct ssf_run_config ssf_run_config;
typedef struct ssf_record_log ssf_record_log;

SSF_API const char* ssf_version(void);
SSF_API const char* ssf_last_error(void);
SSF_API const char* ssf_status_name(ssf_status status);

SSF_API void ssf_scheme_defaults(ssf_scheme* scheme);
SSF_API void ssf_solver_defaults(ssf_solver_opts* opts);
SSF_API const char* ssf_solver_name(ssf_solver_kind kind);
SSF_API ssf_status ssf_solver_parse(const char* name, ssf_solver_kind* out);
SSF_API ssf_status ssf_interp_parse(const char* name, ssf_interp* out);

/* Fields: m x m cell-centered values on the periodic square (0, L)^2,
 * row-major with the x index selecting the row. */
SSF_API ssf_status ssf_field_create(int m, double length, ssf_field** out);
SSF_API ssf_status ssf_field_from_values(int m, double length, const double* values,
                                         ssf_field** out);
SSF_API ssf_status ssf_field_init(int m, double length, ssf_init_kind kind, uint64_t seed,
                                  ssf_field** out);
SSF_API void ssf_field_destroy(ssf_field* field);
SSF_API int ssf_field_m(const ssf_field* field);
SSF_API double ssf_field_length(const ssf_field* field);
SSF_API ssf_status ssf_field_copy_values(const ssf_field* field, double* out, size_t count);
SSF_API ssf_status ssf_field_mean(const ssf_field* field, double* out);
SSF_API ssf_status ssf_field_norm2(const ssf_field* field, double* out);
SSF_API ssf_status ssf_field_roughness(const ssf_field* field, double* out);
SSF_API ssf_status ssf_field_energy(const ssf_field* field, double epsilon, double* out);
/* ||a - b||_2 with the grid-weighted norm; grids must match. */
SSF_API ssf_status ssf_field_distance(const ssf_field* a, const ssf_field* b, double* out);
SSF_API ssf_status ssf_field_prolong(const ssf_field* coarse, ssf_interp mode, ssf_field** out);

SSF_API ssf_status ssf_snapshot_write(const ssf_field* field, double t, const char* path);
SSF_API ssf_status ssf_snapshot_read(const char* path, ssf_field** out, double* t);

/* Time stepping. create() centers phi0 and takes the first-order bootstrap
 * step; `first` receives the record of t = dt. With warn_only set, energy or
 * mass violations are counted instead of failing with SSF_ERR_STABILITY. */
SSF_API ssf_status ssf_stepper_create(const ssf_field* phi0, const ssf_scheme* scheme,
                                      const ssf_solver_opts* opts, int warn_only,
                                      ssf_stepper** out, ssf_record* first);
SSF_API ssf_status ssf_stepper_create_with_history(const ssf_field* phi0, const ssf_field* phi1,
                                                   const ssf_scheme* scheme,
                                                   const ssf_solver_opts* opts, int warn_only,
                                                   ssf_stepper** out, ssf_record* first);
SSF_API ssf_status ssf_stepper_advance(ssf_stepper* stepper, ssf_record* out);
SSF_API ssf_status ssf_stepper_field(const ssf_stepper* stepper, ssf_field** out);
/* Relative residual history of the most recent solve. Writes up to `capacity`
 * entries and stores the full length in *count. */
SSF_API ssf_status ssf_stepper_last_residuals(const ssf_stepper* stepper, double* out,
                                              size_t capacity, size_t* count);
SSF_API int ssf_stepper_violations(const ssf_stepper* stepper);
SSF_API void ssf_stepper_destroy(ssf_stepper* stepper);

/* Number of records a run to final_time produces: floor(T/dt). */
SSF_API ssf_status ssf_step_count(double final_time, double dt, long long* out);

/* Least-squares fit of log y = a + b log t (natural log) over t_min <= t <= t_max. */
SSF_API ssf_status ssf_loglog_fit(const double* t, const double* y, size_t n, double t_min,
                                  double t_max, double* a, double* b);

/* Cauchy convergence table for the sinusoidal initial data on (0, 3.2)^2
 * with dt = dt_per_h * h. `rows` must hold n_levels - 1 entries. */
SSF_API ssf_status ssf_cauchy_table(const int* levels, size_t n_levels, double epsilon,
                                    double A, double dt_per_h, double final_time,
                                    const ssf_solver_opts* opts, ssf_interp mode,
                                    ssf_cauchy_row* rows);

/* Flat `key = value` run configuration. */
SSF_API ssf_status ssf_run_config_load(const char* path, ssf_run_config** out);
SSF_API ssf_status ssf_run_config_parse(const char* text, ssf_run_config** out);
SSF_API void ssf_run_config_destroy(ssf_run_config* config);
SSF_API int ssf_run_config_m(const ssf_run_config* config);
SSF_API double ssf_run_config_length(const ssf_run_config* config);
SSF_API double ssf_run_config_final_time(const ssf_run_config* config);
SSF_API uint64_t ssf_run_config_seed(const ssf_run_config* config);
SSF_API void ssf_run_config_scheme(const ssf_run_config* config, ssf_scheme* out);
SSF_API void ssf_run_config_solver(const ssf_run_config* config, ssf_solver_opts* out);
SSF_API const char* ssf_run_config_out_dir(const ssf_run_config* config);
SSF_API size_t ssf_run_config_snapshot_count(const ssf_run_config* config);
SSF_API double ssf_run_config_snapshot_time(const ssf_run_config* config, size_t index);
SSF_API size_t ssf_run_config_echo_count(const ssf_run_config* config);
SSF_API const char* ssf_run_config_echo_line(const ssf_run_config* config, size_t index);
SSF_API ssf_status ssf_run_config_initial_field(const ssf_run_config* config, ssf_field** out);

/* Step-record CSV: "# " provenance lines, then t,F_h,F_tilde,mass,roughness,iters,wall_ms. */
SSF_API ssf_status ssf_record_log_open(const char* path, const char* const* provenance,
                                       size_t n_lines, ssf_record_log** out);
SSF_API ssf_status ssf_record_log_append(ssf_record_log* log, const ssf_record* record);
SSF_API ssf_status ssf_record_log_close(ssf_record_log* log);

#ifdef __cplusplus
}
#endif

#endif /* SSFILM_H */
