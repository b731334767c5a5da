/* C interface to the critmed engine. All handles are opaque; every call
 * returns a cm_status and, on failure, leaves a message retrievable with
 * cm_last_error() on the calling thread. */
#ifndef CRITMED_CRITMED_H
#define CRITMED_CRITMED_H

#include <stddef.h>

#if defined(_WIN32)
#define CM_API __declspec(dllexport)
#else
#define CM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cm_status {
  CM_OK = 0,
  CM_INVALID_ARGUMENT = 1,
  CM_OUT_OF_RANGE = 2,
  CM_SOLVER_FAILURE = 3,
  CM_QUADRATURE_FAILURE = 4,
  CM_INTEGRATION_FAILURE = 5,
  CM_CONFIG_ERROR = 6,
  CM_IO_ERROR = 7,
  CM_INTERNAL_ERROR = 8
} cm_status;

typedef enum cm_branch { CM_HEATING = 0, CM_COOLING = 1 } cm_branch;

typedef struct cm_material cm_material;
typedef struct cm_vo2 cm_vo2;
typedef struct cm_sweep cm_sweep;
typedef struct cm_table cm_table;

typedef struct cm_quadrature {
  double rel_tol;
  double abs_tol;
  int max_subdivisions;
  double tail_threshold;
} cm_quadrature;

typedef struct cm_decoherence {
  double local;
  double nonlocal;
  double ratio;
  double local_error;
  double nonlocal_error;
  long evaluations;
} cm_decoherence;

typedef struct cm_collective {
  double incoherent;
  double coherent;
  double ratio;
  double incoherent_error;
  double coherent_error;
  long evaluations;
} cm_collective;

CM_API const char* cm_version(void);
CM_API const char* cm_last_error(void);
CM_API const char* cm_status_name(cm_status status);
/* Frees strings returned through char** out-parameters. */
CM_API void cm_string_free(char* s);

CM_API void cm_quadrature_defaults(cm_quadrature* q);

/* Materials */
CM_API cm_status cm_material_load(const char* path, cm_material** out);
CM_API cm_status cm_material_from_json(const char* json, cm_material** out);
CM_API cm_status cm_material_permittivity(const cm_material* m, double omega, double* re,
                                          double* im);
CM_API void cm_material_free(cm_material* m);

/* Effective permittivity of a two-phase composite. `residual` may be NULL. */
CM_API cm_status cm_bruggeman(double host_re, double host_im, double incl_re, double incl_im,
                              double f, double L, double* re, double* im, double* residual);

/* VO2 datasets */
CM_API cm_status cm_vo2_load(const char* path, cm_vo2** out);
/* Built-in synthetic stand-in evaluated at wavelength lambda0 (m). */
CM_API cm_status cm_vo2_synthetic(double lambda0, cm_vo2** out);
CM_API cm_status cm_vo2_save(const cm_vo2* ds, const char* path);
CM_API cm_status cm_vo2_effective(const cm_vo2* ds, double temperature, cm_branch branch,
                                  double omega, double* re, double* im);
CM_API void cm_vo2_free(cm_vo2* ds);

/* Rates. x, z in units of lambda0 (m). `q` may be NULL for defaults. On
 * CM_QUADRATURE_FAILURE `out` still receives the best estimates. */
CM_API cm_status cm_decoherence_rates(double x, double z, double lambda0, double eps_re,
                                      double eps_im, const cm_quadrature* q,
                                      cm_decoherence* out);
CM_API cm_status cm_collective_rates(double x, double z, double lambda0, double eps_re,
                                     double eps_im, const cm_quadrature* q, cm_collective* out);
CM_API cm_status cm_bose_occupation(double omega0, double temperature, double* n);
CM_API cm_status cm_symmetric_decay_rate(const cm_collective* rates, double omega0,
                                         double temperature, double* rate);

/* Sweeps */
CM_API size_t cm_preset_count(void);
CM_API const char* cm_preset_name(size_t i);
/* data_dir may be NULL for the compiled-in default. */
CM_API cm_status cm_sweep_preset(const char* name, const char* data_dir, cm_sweep** out);
CM_API cm_status cm_sweep_load(const char* path, cm_sweep** out);
/* Relative paths inside `json` resolve against base_dir (may be NULL). */
CM_API cm_status cm_sweep_from_json(const char* json, const char* base_dir, cm_sweep** out);
CM_API cm_status cm_sweep_set_lambda0(cm_sweep* s, double lambda0);
CM_API cm_status cm_sweep_set_workers(cm_sweep* s, int workers);
CM_API cm_status cm_sweep_set_rel_tol(cm_sweep* s, double rel_tol);
CM_API cm_status cm_sweep_set_output(cm_sweep* s, const char* path);
/* Output path from the config, or "" when unset. Valid until the next call
 * on `s`. */
CM_API const char* cm_sweep_output(const cm_sweep* s);
CM_API size_t cm_sweep_point_count(const cm_sweep* s);
CM_API cm_status cm_sweep_to_json(const cm_sweep* s, char** out);
typedef void (*cm_progress_fn)(size_t done, size_t total, void* user);
CM_API cm_status cm_sweep_run(const cm_sweep* s, cm_progress_fn progress, void* user,
                              cm_table** out);
/* Writes the table (CSV unless the path ends in .json) and its .meta.json
 * sidecar. */
CM_API cm_status cm_sweep_save(const cm_sweep* s, const cm_table* t, const char* path);
CM_API void cm_sweep_free(cm_sweep* s);

/* Tables */
CM_API cm_status cm_table_load(const char* path, cm_table** out);
CM_API cm_status cm_table_save(const cm_table* t, const char* path);
CM_API size_t cm_table_rows(const cm_table* t);
CM_API size_t cm_table_columns(const cm_table* t);
CM_API const char* cm_table_column_name(const cm_table* t, size_t col);
CM_API cm_status cm_table_column_index(const cm_table* t, const char* name, size_t* col);
/* is_null receives 1 for missing values; text cells are CM_INVALID_ARGUMENT. */
CM_API cm_status cm_table_number(const cm_table* t, size_t row, size_t col, double* value,
                                 int* is_null);
CM_API cm_status cm_table_text(const cm_table* t, size_t row, size_t col, const char** text);
CM_API size_t cm_table_flagged_rows(const cm_table* t);
CM_API double cm_table_wall_seconds(const cm_table* t);
CM_API int cm_table_equal(const cm_table* a, const cm_table* b);
CM_API void cm_table_free(cm_table* t);

#ifdef __cplusplus
}
#endif

#endif
