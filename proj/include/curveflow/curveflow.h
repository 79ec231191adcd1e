#ifndef CURVEFLOW_H
#define CURVEFLOW_H

#include <stddef.h>

#if defined(CURVEFLOW_BUILD)
#define CF_API __attribute__((visibility("default")))
#else
#define CF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cf_state cf_state;
typedef struct cf_scenario cf_scenario;

typedef enum {
  CF_OK = 0,
  CF_ERR_INVALID_ARGUMENT = 1,
  CF_ERR_SPEC = 2,
  CF_ERR_CONVEXITY = 3,
  CF_ERR_RESONANCE = 4,
  CF_ERR_STEP_FLOOR = 5,
  CF_ERR_NONFINITE = 6,
  CF_ERR_PARSE = 7,
  CF_ERR_IO = 8,
  CF_ERR_STATE = 9,
  CF_ERR_INTERNAL = 10
} cf_status;

typedef enum { CF_AREA_PRESERVING = 0, CF_LENGTH_PRESERVING = 1 } cf_flow_kind;

typedef enum { CF_CONVERGED = 0, CF_BLOWUP = 1, CF_TIMELIMIT = 2 } cf_verdict;

typedef enum { CF_HIGHLY_SYMMETRIC = 0, CF_AL_TYPE = 1, CF_UNCLASSIFIED = 2 } cf_curve_class;

typedef struct {
  double alpha;
  int m;
  cf_flow_kind kind;
} cf_flow_params;

typedef struct {
  double L;
  double A;
  double kappa_min;
  double kappa_max;
  double convexity_margin;
  double h_min;
  double h_max;
  double isop_gap;
  double rado_gap;
} cf_geometry;

typedef struct {
  double t, dt, L, A, lambda, kappa_min, kappa_max, E, F_int, psi_max;
  double h_min, h_max, h_ratio, isop_gap, rado_gap, convexity_margin;
} cf_diagnostics;

typedef struct {
  int m;
  int n;
  int coprime;
  int property_p;
  cf_curve_class membership;
} cf_class_report;

/* Message for the last failed call on this thread ("" if none). */
CF_API const char* cf_last_error(void);
CF_API const char* cf_status_string(cf_status status);

/* Presets. Strings live as long as the library is loaded. */
CF_API int cf_preset_count(void);
CF_API cf_status cf_preset_info(int index, const char** name, const char** clause,
                                const char** description, const char** expected);

/* Support-function states on a uniform grid of N samples over [0, 2 m pi). */
CF_API cf_status cf_state_circle(int m, double r, int N, cf_state** out);
CF_API cf_status cf_state_cosine(int m, double a, double b, int n, int N, cf_state** out);
CF_API cf_status cf_state_from_samples(int m, const double* h, int N, cf_state** out);
CF_API cf_status cf_state_load(const char* path, cf_state** out);
CF_API cf_status cf_state_clone(const cf_state* s, cf_state** out);
CF_API void cf_state_free(cf_state* s);

CF_API int cf_state_size(const cf_state* s);
CF_API int cf_state_turning(const cf_state* s);
CF_API double cf_state_time(const cf_state* s);
CF_API cf_status cf_state_support(const cf_state* s, double* h, int N);
CF_API cf_status cf_state_geometry(const cf_state* s, cf_geometry* out);
CF_API cf_status cf_state_diagnostics(const cf_state* s, const cf_flow_params* params,
                                      cf_diagnostics* out);
CF_API cf_status cf_state_classify(const cf_state* s, cf_class_report* out);

/* One RK4 step of exactly dt. */
CF_API cf_status cf_state_step(cf_state* s, const cf_flow_params* params, double dt);
/* One step of min(stable step, dt_max); the step taken is stored in dt_taken. */
CF_API cf_status cf_state_advance(cf_state* s, const cf_flow_params* params, double cfl,
                                  double dt_max, double* dt_taken);

CF_API cf_status cf_state_render_svg(const cf_state* s, const char* path);

/* Scenarios: a curve, flow, grid and step control plus an output directory. */
CF_API cf_status cf_scenario_from_preset(const char* name, double alpha, cf_scenario** out);
CF_API cf_status cf_scenario_from_config(const char* path, cf_scenario** out);
CF_API void cf_scenario_free(cf_scenario* sc);

CF_API cf_status cf_scenario_set_grid(cf_scenario* sc, int N);
CF_API cf_status cf_scenario_set_t_end(cf_scenario* sc, double t_end);
CF_API cf_status cf_scenario_set_out_dir(cf_scenario* sc, const char* dir);
CF_API cf_status cf_scenario_set_flow_kind(cf_scenario* sc, cf_flow_kind kind);

CF_API const char* cf_scenario_name(const cf_scenario* sc);
CF_API const char* cf_scenario_out_dir(const cf_scenario* sc);
CF_API cf_status cf_scenario_flow(const cf_scenario* sc, cf_flow_params* out);

/* Runs to completion and writes the artifacts. exit_status receives
   0 (verdict as expected), 2 (verdict mismatch) or 3 (invariant violated). */
CF_API cf_status cf_scenario_run(cf_scenario* sc, int* exit_status);
/* Valid after a successful run. */
CF_API cf_status cf_scenario_verdict(const cf_scenario* sc, cf_verdict* out);
CF_API const char* cf_scenario_summary(const cf_scenario* sc);

#ifdef __cplusplus
}
#endif

#endif
