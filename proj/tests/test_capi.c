/* Exercises the C interface from plain C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "vvc/vvc.h"

static int failures = 0;

#define EXPECT(cond)                                                       \
    do {                                                                   \
        if (!(cond)) {                                                     \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                    \
        }                                                                  \
    } while (0)

static const char* path(const char* rel)
{
    static char buf[4][1024];
    static int slot = 0;
    char* out = buf[slot++ % 4];
    snprintf(out, 1024, "%s/%s", VVC_SOURCE_DIR, rel);
    return out;
}

static void test_status_and_errors(void)
{
    double r = 0.0;
    EXPECT(strlen(vvc_version()) > 0);
    EXPECT(strcmp(vvc_status_name(VVC_E_IO), "io") == 0);
    EXPECT(vvc_losses_ratio(0.9306, 1.0, &r) == VVC_OK);
    EXPECT(fabs(r - 0.8660) < 5e-4);
    EXPECT(vvc_losses_ratio(0.0, 1.0, &r) == VVC_E_RANGE);
    EXPECT(strlen(vvc_last_error()) > 0);
    EXPECT(vvc_losses_ratio(1.0, 1.0, NULL) == VVC_E_INVALID_ARGUMENT);
    /* NULL handles are accepted by every free function and count accessor. */
    vvc_fis_free(NULL);
    vvc_run_free(NULL);
    vvc_report_free(NULL);
    vvc_diagnostics_free(NULL);
    EXPECT(vvc_diagnostics_count(NULL) == 0);
}

static void test_fis(void)
{
    vvc_fis* fis = NULL;
    vvc_diagnostics* d = NULL;
    vvc_inference* inf = NULL;
    const char* names[] = {"Voltage", "Reactive_power", "Tap", "Shunt_Off", "TimeOfDay"};
    const double values[] = {21.4, 4.5, 5, 0, 12};
    size_t i;
    int saw_taps = 0;

    EXPECT(vvc_fis_load(path("fis/default.fis"), path("rules/default14.rules"), &fis, &d) == VVC_OK);
    EXPECT(vvc_diagnostics_error_count(d) == 0);
    vvc_diagnostics_free(d);
    EXPECT(vvc_fis_input_count(fis) == 5);
    EXPECT(vvc_fis_rule_count(fis) == 14);
    EXPECT(strncmp(vvc_fis_rule_text(fis, 0), "If (Reactive_power is High)", 27) == 0);

    EXPECT(vvc_fis_infer(fis, names, values, 5, &inf) == VVC_OK);
    EXPECT(vvc_inference_output_count(inf) == 2);
    EXPECT(vvc_inference_rule_count(inf) == 14);
    for (i = 0; i < vvc_inference_output_count(inf); ++i) {
        const char* n = vvc_inference_output_name(inf, i);
        double v = vvc_inference_output_value(inf, i);
        if (strcmp(n, "Taps") == 0) {
            saw_taps = 1;
            EXPECT(v <= -1.5);
        } else if (strcmp(n, "Capacitor") == 0) {
            EXPECT(v >= 0.5);
        }
    }
    EXPECT(saw_taps);
    vvc_inference_free(inf);

    /* A missing input is an invalid argument, not a crash. */
    inf = NULL;
    EXPECT(vvc_fis_infer(fis, names, values, 4, &inf) != VVC_OK);
    EXPECT(inf == NULL);

    EXPECT(vvc_fis_bind_schedule(fis, "07:00-09:00") == VVC_OK);
    EXPECT(vvc_fis_bind_schedule(fis, "09:00-07:00") != VVC_OK);
    vvc_fis_free(fis);

    fis = NULL;
    d = NULL;
    EXPECT(vvc_fis_load(path("fis/default.fis"), path("no/such.rules"), &fis, &d) == VVC_E_IO);
    EXPECT(fis == NULL);
    vvc_diagnostics_free(d);
}

static void test_validate(void)
{
    vvc_diagnostics* d = NULL;
    EXPECT(vvc_validate_config(path("scenarios/day24h.cfg"), &d) == VVC_OK);
    EXPECT(vvc_diagnostics_error_count(d) == 0);
    vvc_diagnostics_free(d);

    d = NULL;
    EXPECT(vvc_validate_config(path("scenarios/none.cfg"), &d) == VVC_E_IO);
    EXPECT(vvc_diagnostics_error_count(d) == 1);
    EXPECT(vvc_diagnostics_is_error(d, 0));
    EXPECT(strcmp(vvc_diagnostics_code(d, 0), "io") == 0);
    vvc_diagnostics_free(d);
}

static void test_run_and_evaluate(void)
{
    vvc_scenario* sc = NULL;
    vvc_run* run = NULL;
    vvc_report* rep = NULL;
    double phi = 0.0;
    char log_path[1024];

    EXPECT(vvc_scenario_load(path("scenarios/day24h.cfg"), &sc, NULL) == VVC_OK);
    EXPECT(vvc_scenario_log_path(sc) == NULL);
    EXPECT(vvc_scenario_run(sc, &run) == VVC_OK);
    EXPECT(vvc_run_record_count(run) == 21601);
    EXPECT(strstr(vvc_run_summary_text(run), "controller = fis") != NULL);
    EXPECT(strstr(vvc_run_summary_text(run), "n = 21601") != NULL);

    snprintf(log_path, sizeof log_path, "%s/capi_day.csv", VVC_BINARY_DIR);
    EXPECT(vvc_run_write_log(run, log_path) == VVC_OK);
    EXPECT(vvc_evaluate(log_path, log_path, "23:55:30", "08:13:19", &rep) == VVC_OK);
    EXPECT(vvc_report_phi_mean(rep) == 1.0);
    EXPECT(vvc_report_phi_mean_interval(rep, &phi) == 1);
    EXPECT(phi == 1.0);
    EXPECT(vvc_report_d_mean_ratio(rep) == 1.0);
    EXPECT(strstr(vvc_report_text(rep), "whole span") != NULL);
    vvc_report_free(rep);

    rep = NULL;
    EXPECT(vvc_evaluate(log_path, log_path, "23:55:30", NULL, &rep) == VVC_E_INVALID_ARGUMENT);
    EXPECT(vvc_evaluate(log_path, path("scenarios/day24h_load.csv"), NULL, NULL, &rep) != VVC_OK);
    EXPECT(vvc_evaluate(log_path, "/nonexistent/x.csv", NULL, NULL, &rep) == VVC_E_IO);
    EXPECT(rep == NULL);

    remove(log_path);
    vvc_run_free(run);
    vvc_scenario_free(sc);
}

int main(void)
{
    test_status_and_errors();
    test_fis();
    test_validate();
    test_run_and_evaluate();
    if (failures) {
        fprintf(stderr, "%d expectation(s) failed\n", failures);
        return EXIT_FAILURE;
    }
    printf("all C interface checks passed\n");
    return EXIT_SUCCESS;
}
