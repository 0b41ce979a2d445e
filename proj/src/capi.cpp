#include "vvc/vvc.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "vvc/config.hpp"
#include "vvc/controller.hpp"
#include "vvc/metrics.hpp"
#include "vvc/rules.hpp"
#include "vvc/sim.hpp"

struct vvc_diagnostics {
    vvc::Diagnostics items;
    std::vector<std::string> text;
};

struct vvc_fis {
    vvc::FisDefinition def;
    std::vector<std::string> rule_text;
};

struct vvc_inference {
    std::vector<std::string> names;
    std::vector<vvc::OutputValue> values;
    std::vector<double> strengths;
};

struct vvc_scenario {
    vvc::Scenario scenario;
    std::string log_path;
    std::string summary_path;
};

struct vvc_run {
    vvc::RunResult result;
    std::string summary;
};

struct vvc_report {
    vvc::ComparisonReport report;
    std::string text;
};

namespace {

thread_local std::string last_error;

vvc_status fail(vvc_status s, std::string message)
{
    last_error = std::move(message);
    return s;
}

void store(vvc_diagnostics** out, vvc::Diagnostics diags)
{
    if (!out)
        return;
    auto* d = new vvc_diagnostics;
    d->items = std::move(diags);
    for (const auto& x : d->items)
        d->text.push_back(vvc::to_string(x));
    *out = d;
}

// Maps the core's exception hierarchy onto status codes. Must be called
// from inside a catch block.
vvc_status translate(vvc_diagnostics** diags = nullptr)
{
    try {
        throw;
    } catch (const vvc::ParseError& e) {
        store(diags, e.diagnostics());
        return fail(VVC_E_DIAGNOSTICS, e.what());
    } catch (const vvc::IoError& e) {
        return fail(VVC_E_IO, e.what());
    } catch (const vvc::SimulationError& e) {
        return fail(VVC_E_SOLVER, e.what());
    } catch (const vvc::SolverError& e) {
        return fail(VVC_E_SOLVER, e.what());
    } catch (const vvc::AlignmentError& e) {
        return fail(VVC_E_ALIGNMENT, e.what());
    } catch (const vvc::RangeError& e) {
        return fail(VVC_E_RANGE, e.what());
    } catch (const vvc::DefinitionError& e) {
        return fail(VVC_E_INVALID_ARGUMENT, e.what());
    } catch (const vvc::InputError& e) {
        return fail(VVC_E_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(VVC_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(VVC_E_INTERNAL, e.what());
    } catch (...) {
        return fail(VVC_E_INTERNAL, "unknown exception");
    }
}

vvc_status null_arg(const char* what)
{
    return fail(VVC_E_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* vvc_version(void)
{
    return VVC_VERSION;
}

const char* vvc_status_name(vvc_status status)
{
    switch (status) {
    case VVC_OK:
        return "ok";
    case VVC_E_DIAGNOSTICS:
        return "diagnostics";
    case VVC_E_IO:
        return "io";
    case VVC_E_INVALID_ARGUMENT:
        return "invalid argument";
    case VVC_E_RANGE:
        return "out of range";
    case VVC_E_SOLVER:
        return "solver";
    case VVC_E_ALIGNMENT:
        return "alignment";
    case VVC_E_INTERNAL:
        return "internal";
    }
    return "unknown";
}

const char* vvc_last_error(void)
{
    return last_error.c_str();
}

size_t vvc_diagnostics_count(const vvc_diagnostics* d)
{
    return d ? d->items.size() : 0;
}

size_t vvc_diagnostics_error_count(const vvc_diagnostics* d)
{
    return d ? vvc::count_errors(d->items) : 0;
}

int vvc_diagnostics_is_error(const vvc_diagnostics* d, size_t i)
{
    return d && i < d->items.size() && d->items[i].severity == vvc::Severity::Error;
}

const char* vvc_diagnostics_code(const vvc_diagnostics* d, size_t i)
{
    return d && i < d->items.size() ? d->items[i].code.c_str() : nullptr;
}

const char* vvc_diagnostics_text(const vvc_diagnostics* d, size_t i)
{
    return d && i < d->text.size() ? d->text[i].c_str() : nullptr;
}

void vvc_diagnostics_free(vvc_diagnostics* d)
{
    delete d;
}

vvc_status vvc_fis_load(const char* fis_path, const char* rules_path, vvc_fis** out, vvc_diagnostics** diags)
{
    if (diags)
        *diags = nullptr;
    if (!fis_path || !rules_path || !out)
        return null_arg("fis_path, rules_path and out");
    *out = nullptr;
    try {
        vvc::Diagnostics found;
        vvc::FisDefinition def = vvc::load_fis(fis_path, rules_path, found);
        const bool bad = vvc::has_errors(found);
        std::string first;
        for (const auto& d : found)
            if (d.severity == vvc::Severity::Error) {
                first = vvc::to_string(d);
                break;
            }
        store(diags, std::move(found));
        if (bad)
            return fail(VVC_E_DIAGNOSTICS, first);
        auto* h = new vvc_fis{vvc::bind_peak_schedule(std::move(def), vvc::PeakSchedule::standard()), {}};
        for (const auto& r : h->def.rules)
            h->rule_text.push_back(vvc::format_rule(r));
        *out = h;
        return VVC_OK;
    } catch (...) {
        return translate(diags);
    }
}

vvc_status vvc_fis_bind_schedule(vvc_fis* fis, const char* schedule)
{
    if (!fis || !schedule)
        return null_arg("fis and schedule");
    try {
        fis->def = vvc::bind_peak_schedule(std::move(fis->def), vvc::parse_peak_schedule(schedule));
        return VVC_OK;
    } catch (...) {
        return translate();
    }
}

size_t vvc_fis_input_count(const vvc_fis* fis)
{
    return fis ? fis->def.inputs.size() : 0;
}

const char* vvc_fis_input_name(const vvc_fis* fis, size_t i)
{
    return fis && i < fis->def.inputs.size() ? fis->def.inputs[i].name.c_str() : nullptr;
}

size_t vvc_fis_rule_count(const vvc_fis* fis)
{
    return fis ? fis->def.rules.size() : 0;
}

const char* vvc_fis_rule_text(const vvc_fis* fis, size_t i)
{
    return fis && i < fis->rule_text.size() ? fis->rule_text[i].c_str() : nullptr;
}

void vvc_fis_free(vvc_fis* fis)
{
    delete fis;
}

vvc_status vvc_fis_infer(const vvc_fis* fis, const char* const* names, const double* values, size_t n,
                         vvc_inference** out)
{
    if (!fis || !out || (n > 0 && (!names || !values)))
        return null_arg("fis, out, names and values");
    *out = nullptr;
    try {
        vvc::CrispInputs inputs;
        for (size_t i = 0; i < n; ++i) {
            if (!names[i])
                return null_arg("input name");
            // Accept aliases on the way in; the engine keys by canonical name.
            std::string key = names[i];
            for (const auto& v : fis->def.inputs)
                if (v.answers_to(key)) {
                    key = v.name;
                    break;
                }
            inputs[key] = values[i];
        }
        const vvc::InferenceResult r = vvc::infer(fis->def, inputs);
        auto* res = new vvc_inference;
        for (const auto& o : fis->def.outputs) {
            res->names.push_back(o.name);
            res->values.push_back(r.output(o.name));
        }
        res->strengths = r.rule_strengths;
        *out = res;
        return VVC_OK;
    } catch (...) {
        return translate();
    }
}

size_t vvc_inference_output_count(const vvc_inference* r)
{
    return r ? r->names.size() : 0;
}

const char* vvc_inference_output_name(const vvc_inference* r, size_t i)
{
    return r && i < r->names.size() ? r->names[i].c_str() : nullptr;
}

double vvc_inference_output_value(const vvc_inference* r, size_t i)
{
    return r && i < r->values.size() ? r->values[i].crisp : 0.0;
}

int vvc_inference_no_rule_fired(const vvc_inference* r, size_t i)
{
    return r && i < r->values.size() && r->values[i].no_rule_fired;
}

size_t vvc_inference_rule_count(const vvc_inference* r)
{
    return r ? r->strengths.size() : 0;
}

double vvc_inference_rule_strength(const vvc_inference* r, size_t i)
{
    return r && i < r->strengths.size() ? r->strengths[i] : 0.0;
}

void vvc_inference_free(vvc_inference* r)
{
    delete r;
}

vvc_status vvc_validate_config(const char* path, vvc_diagnostics** diags)
{
    if (diags)
        *diags = nullptr;
    if (!path)
        return null_arg("path");
    try {
        vvc::Diagnostics found = vvc::validate_config(path);
        const bool bad = vvc::has_errors(found);
        std::size_t io = 0;
        for (const auto& d : found)
            io += d.severity == vvc::Severity::Error && d.code == "io";
        store(diags, std::move(found));
        if (io > 0)
            return fail(VVC_E_IO, "cannot read '" + std::string(path) + "' or a file it references");
        return bad ? fail(VVC_E_DIAGNOSTICS, "configuration has errors") : VVC_OK;
    } catch (...) {
        return translate(diags);
    }
}

vvc_status vvc_scenario_load(const char* path, vvc_scenario** out, vvc_diagnostics** diags)
{
    if (diags)
        *diags = nullptr;
    if (!path || !out)
        return null_arg("path and out");
    *out = nullptr;
    try {
        vvc::Diagnostics found;
        auto s = vvc::load_scenario(path, found);
        bool io = false;
        for (const auto& d : found)
            io = io || (d.severity == vvc::Severity::Error && d.code == "io");
        store(diags, std::move(found));
        if (!s)
            return io ? fail(VVC_E_IO, "cannot read '" + std::string(path) + "' or a file it references")
                      : fail(VVC_E_DIAGNOSTICS, "configuration has errors");
        auto* h = new vvc_scenario;
        h->scenario = std::move(*s);
        if (h->scenario.config.log_path)
            h->log_path = h->scenario.config.log_path->string();
        if (h->scenario.config.summary_path)
            h->summary_path = h->scenario.config.summary_path->string();
        *out = h;
        return VVC_OK;
    } catch (...) {
        return translate(diags);
    }
}

const char* vvc_scenario_log_path(const vvc_scenario* s)
{
    return s && !s->log_path.empty() ? s->log_path.c_str() : nullptr;
}

const char* vvc_scenario_summary_path(const vvc_scenario* s)
{
    return s && !s->summary_path.empty() ? s->summary_path.c_str() : nullptr;
}

void vvc_scenario_free(vvc_scenario* s)
{
    delete s;
}

vvc_status vvc_scenario_run(const vvc_scenario* s, vvc_run** out)
{
    if (!s || !out)
        return null_arg("scenario and out");
    *out = nullptr;
    try {
        auto* r = new vvc_run;
        try {
            r->result = vvc::run_scenario(s->scenario);
        } catch (...) {
            delete r;
            throw;
        }
        r->summary = "scenario = " + s->scenario.config.name + '\n' + "controller = " +
                     vvc::to_string(s->scenario.config.controller) + '\n' + vvc::format_summary(r->result.summary);
        *out = r;
        return VVC_OK;
    } catch (...) {
        return translate();
    }
}

size_t vvc_run_record_count(const vvc_run* r)
{
    return r ? r->result.log.size() : 0;
}

vvc_status vvc_run_write_log(const vvc_run* r, const char* path)
{
    if (!r || !path)
        return null_arg("run and path");
    try {
        vvc::write_run_log(std::filesystem::path(path), r->result.log);
        return VVC_OK;
    } catch (...) {
        return translate();
    }
}

const char* vvc_run_summary_text(const vvc_run* r)
{
    return r ? r->summary.c_str() : nullptr;
}

void vvc_run_free(vvc_run* r)
{
    delete r;
}

vvc_status vvc_evaluate(const char* ref_log, const char* test_log, const char* from, const char* to,
                        vvc_report** out)
{
    if (!ref_log || !test_log || !out)
        return null_arg("ref_log, test_log and out");
    *out = nullptr;
    if ((from == nullptr) != (to == nullptr))
        return fail(VVC_E_INVALID_ARGUMENT, "an interval needs both 'from' and 'to'");
    try {
        std::optional<vvc::DayInterval> interval;
        if (from) {
            const auto a = vvc::parse_time_of_day(from);
            const auto b = vvc::parse_time_of_day(to);
            if (!a || !b)
                return fail(VVC_E_INVALID_ARGUMENT, "times must be HH:MM or HH:MM:SS");
            interval = vvc::DayInterval{*a, *b};
        }
        auto* r = new vvc_report;
        try {
            r->report = vvc::evaluate(ref_log, test_log, interval);
        } catch (...) {
            delete r;
            throw;
        }
        r->text = vvc::format_report(r->report);
        *out = r;
        return VVC_OK;
    } catch (...) {
        return translate();
    }
}

const char* vvc_report_text(const vvc_report* r)
{
    return r ? r->text.c_str() : nullptr;
}

double vvc_report_phi_mean(const vvc_report* r)
{
    return r ? r->report.phi_mean : 0.0;
}

int vvc_report_phi_mean_interval(const vvc_report* r, double* out)
{
    if (!r || !r->report.phi_mean_interval)
        return 0;
    if (out)
        *out = *r->report.phi_mean_interval;
    return 1;
}

double vvc_report_d_mean_ratio(const vvc_report* r)
{
    return r ? r->report.d_mean_ratio : 0.0;
}

void vvc_report_free(vvc_report* r)
{
    delete r;
}

vvc_status vvc_losses_ratio(double cos_ref, double cos_test, double* out)
{
    if (!out)
        return null_arg("out");
    try {
        *out = vvc::losses_ratio(cos_ref, cos_test);
        return VVC_OK;
    } catch (...) {
        return translate();
    }
}

}  // extern "C"
