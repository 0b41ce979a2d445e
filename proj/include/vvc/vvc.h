#ifndef VVC_VVC_H
#define VVC_VVC_H

/*
 * C interface to the volt/VAR control library.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function (NULL is accepted). Functions that can fail return
 * a vvc_status; on failure vvc_last_error() describes the problem for the
 * calling thread until the next failing call. Strings returned by accessors
 * are owned by the handle they came from.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(VVC_BUILDING)
#    define VVC_API __declspec(dllexport)
#  else
#    define VVC_API __declspec(dllimport)
#  endif
#else
#  define VVC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vvc_status {
    VVC_OK = 0,
    VVC_E_DIAGNOSTICS = 1, /* input rejected; details in the diagnostics handle */
    VVC_E_IO = 2,
    VVC_E_INVALID_ARGUMENT = 3,
    VVC_E_RANGE = 4,
    VVC_E_SOLVER = 5,
    VVC_E_ALIGNMENT = 6,
    VVC_E_INTERNAL = 7
} vvc_status;

typedef struct vvc_diagnostics vvc_diagnostics;
typedef struct vvc_fis vvc_fis;
typedef struct vvc_inference vvc_inference;
typedef struct vvc_scenario vvc_scenario;
typedef struct vvc_run vvc_run;
typedef struct vvc_report vvc_report;

VVC_API const char* vvc_version(void);
VVC_API const char* vvc_status_name(vvc_status status);
VVC_API const char* vvc_last_error(void);

/* Diagnostics */
VVC_API size_t vvc_diagnostics_count(const vvc_diagnostics* d);
VVC_API size_t vvc_diagnostics_error_count(const vvc_diagnostics* d);
VVC_API int vvc_diagnostics_is_error(const vvc_diagnostics* d, size_t i);
VVC_API const char* vvc_diagnostics_code(const vvc_diagnostics* d, size_t i);
/* "file:line:col: severity: message [code]" */
VVC_API const char* vvc_diagnostics_text(const vvc_diagnostics* d, size_t i);
VVC_API void vvc_diagnostics_free(vvc_diagnostics* d);

/* Fuzzy systems. The standard peak schedule is bound on load.
 * `diags` may be NULL; when given it receives warnings and errors. */
VVC_API vvc_status vvc_fis_load(const char* fis_path, const char* rules_path, vvc_fis** out,
                                vvc_diagnostics** diags);
/* Rebinds the time-of-day sets, e.g. "10:00-14:00, 18:00-22:00". */
VVC_API vvc_status vvc_fis_bind_schedule(vvc_fis* fis, const char* schedule);
VVC_API size_t vvc_fis_input_count(const vvc_fis* fis);
VVC_API const char* vvc_fis_input_name(const vvc_fis* fis, size_t i);
VVC_API size_t vvc_fis_rule_count(const vvc_fis* fis);
/* Canonical text of rule i. */
VVC_API const char* vvc_fis_rule_text(const vvc_fis* fis, size_t i);
VVC_API void vvc_fis_free(vvc_fis* fis);

VVC_API vvc_status vvc_fis_infer(const vvc_fis* fis, const char* const* names, const double* values, size_t n,
                                 vvc_inference** out);
VVC_API size_t vvc_inference_output_count(const vvc_inference* r);
VVC_API const char* vvc_inference_output_name(const vvc_inference* r, size_t i);
VVC_API double vvc_inference_output_value(const vvc_inference* r, size_t i);
VVC_API int vvc_inference_no_rule_fired(const vvc_inference* r, size_t i);
VVC_API size_t vvc_inference_rule_count(const vvc_inference* r);
VVC_API double vvc_inference_rule_strength(const vvc_inference* r, size_t i);
VVC_API void vvc_inference_free(vvc_inference* r);

/* Scenarios. vvc_validate_config always fills `diags` when non-NULL and
 * returns VVC_E_DIAGNOSTICS when any error was found. */
VVC_API vvc_status vvc_validate_config(const char* path, vvc_diagnostics** diags);
VVC_API vvc_status vvc_scenario_load(const char* path, vvc_scenario** out, vvc_diagnostics** diags);
/* Output paths named in the configuration, or NULL. */
VVC_API const char* vvc_scenario_log_path(const vvc_scenario* s);
VVC_API const char* vvc_scenario_summary_path(const vvc_scenario* s);
VVC_API void vvc_scenario_free(vvc_scenario* s);

VVC_API vvc_status vvc_scenario_run(const vvc_scenario* s, vvc_run** out);
VVC_API size_t vvc_run_record_count(const vvc_run* r);
VVC_API vvc_status vvc_run_write_log(const vvc_run* r, const char* path);
VVC_API const char* vvc_run_summary_text(const vvc_run* r);
VVC_API void vvc_run_free(vvc_run* r);

/* Compares two run logs. `from`/`to` are HH:MM[:SS] and must be both NULL
 * or both set; from > to selects a window through midnight. */
VVC_API vvc_status vvc_evaluate(const char* ref_log, const char* test_log, const char* from, const char* to,
                                vvc_report** out);
VVC_API const char* vvc_report_text(const vvc_report* r);
VVC_API double vvc_report_phi_mean(const vvc_report* r);
/* Returns 0 when no interval was requested. */
VVC_API int vvc_report_phi_mean_interval(const vvc_report* r, double* out);
VVC_API double vvc_report_d_mean_ratio(const vvc_report* r);
VVC_API void vvc_report_free(vvc_report* r);

VVC_API vvc_status vvc_losses_ratio(double cos_ref, double cos_test, double* out);

#ifdef __cplusplus
}
#endif

#endif
