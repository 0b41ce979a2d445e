// Command-line front end over the C interface.
//
//   vvc simulate <config> [--out log.csv] [--summary out.txt]
//   vvc evaluate <ref.csv> <test.csv> [--from HH:MM:SS --to HH:MM:SS]
//   vvc infer <fis> <rules> --in name=value ... [--schedule "10:00-14:00, 18:00-22:00"]
//   vvc validate <config>
//
// Exit status: 0 success, 1 diagnostics or other errors, 2 I/O failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vvc/vvc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIo = 2;

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

using Diags = std::unique_ptr<vvc_diagnostics, Deleter<vvc_diagnostics, vvc_diagnostics_free>>;
using Fis = std::unique_ptr<vvc_fis, Deleter<vvc_fis, vvc_fis_free>>;
using Inference = std::unique_ptr<vvc_inference, Deleter<vvc_inference, vvc_inference_free>>;
using Scenario = std::unique_ptr<vvc_scenario, Deleter<vvc_scenario, vvc_scenario_free>>;
using Run = std::unique_ptr<vvc_run, Deleter<vvc_run, vvc_run_free>>;
using Report = std::unique_ptr<vvc_report, Deleter<vvc_report, vvc_report_free>>;

int exit_code(vvc_status s)
{
    if (s == VVC_OK)
        return kExitOk;
    return s == VVC_E_IO ? kExitIo : kExitError;
}

void print_diagnostics(const vvc_diagnostics* d)
{
    for (size_t i = 0; i < vvc_diagnostics_count(d); ++i)
        std::cerr << vvc_diagnostics_text(d, i) << '\n';
}

int report_failure(vvc_status s, const vvc_diagnostics* d = nullptr)
{
    if (vvc_diagnostics_error_count(d) == 0)
        std::cerr << "vvc: " << vvc_status_name(s) << ": " << vvc_last_error() << '\n';
    return exit_code(s);
}

int write_text(const std::string& path, const char* text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        std::cerr << "vvc: io: cannot write '" << path << "'\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_simulate(const std::string& config, const std::string& out_opt, const std::string& summary_opt)
{
    vvc_scenario* raw = nullptr;
    vvc_diagnostics* draw = nullptr;
    const vvc_status st = vvc_scenario_load(config.c_str(), &raw, &draw);
    Scenario scenario(raw);
    Diags diags(draw);
    print_diagnostics(diags.get());
    if (st != VVC_OK)
        return report_failure(st, diags.get());

    vvc_run* rraw = nullptr;
    const vvc_status rs = vvc_scenario_run(scenario.get(), &rraw);
    Run run(rraw);
    if (rs != VVC_OK)
        return report_failure(rs);

    std::string log_path = out_opt;
    if (log_path.empty() && vvc_scenario_log_path(scenario.get()))
        log_path = vvc_scenario_log_path(scenario.get());
    if (!log_path.empty()) {
        const vvc_status ws = vvc_run_write_log(run.get(), log_path.c_str());
        if (ws != VVC_OK)
            return report_failure(ws);
    }

    std::string summary_path = summary_opt;
    if (summary_path.empty() && vvc_scenario_summary_path(scenario.get()))
        summary_path = vvc_scenario_summary_path(scenario.get());
    if (!summary_path.empty())
        return write_text(summary_path, vvc_run_summary_text(run.get()));
    std::cout << vvc_run_summary_text(run.get());
    return kExitOk;
}

int cmd_evaluate(const std::string& ref, const std::string& test, const std::string& from, const std::string& to)
{
    if (from.empty() != to.empty()) {
        std::cerr << "vvc: --from and --to must be given together\n";
        return kExitError;
    }
    vvc_report* raw = nullptr;
    const vvc_status st = vvc_evaluate(ref.c_str(), test.c_str(), from.empty() ? nullptr : from.c_str(),
                                       to.empty() ? nullptr : to.c_str(), &raw);
    Report report(raw);
    if (st != VVC_OK) {
        std::cerr << "vvc: " << vvc_status_name(st) << ": " << vvc_last_error() << '\n';
        return exit_code(st);
    }
    std::cout << vvc_report_text(report.get());
    return kExitOk;
}

int cmd_infer(const std::string& fis_path, const std::string& rules_path, const std::vector<std::string>& assignments,
              const std::string& schedule)
{
    std::vector<std::string> names;
    std::vector<double> values;
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "vvc: expected name=value, got '" << a << "'\n";
            return kExitError;
        }
        const std::string v = a.substr(eq + 1);
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (v.empty() || *end != '\0') {
            std::cerr << "vvc: '" << v << "' is not a number\n";
            return kExitError;
        }
        names.push_back(a.substr(0, eq));
        values.push_back(x);
    }

    vvc_fis* raw = nullptr;
    vvc_diagnostics* draw = nullptr;
    const vvc_status st = vvc_fis_load(fis_path.c_str(), rules_path.c_str(), &raw, &draw);
    Fis fis(raw);
    Diags diags(draw);
    print_diagnostics(diags.get());
    if (st != VVC_OK)
        return report_failure(st, diags.get());
    if (!schedule.empty()) {
        const vvc_status bs = vvc_fis_bind_schedule(fis.get(), schedule.c_str());
        if (bs != VVC_OK)
            return report_failure(bs);
    }

    std::vector<const char*> cnames;
    for (const auto& n : names)
        cnames.push_back(n.c_str());
    vvc_inference* iraw = nullptr;
    const vvc_status is = vvc_fis_infer(fis.get(), cnames.data(), values.data(), names.size(), &iraw);
    Inference result(iraw);
    if (is != VVC_OK)
        return report_failure(is);

    char buf[64];
    for (size_t i = 0; i < vvc_inference_output_count(result.get()); ++i) {
        double v = vvc_inference_output_value(result.get(), i);
        if (std::fabs(v) < 5e-7)
            v = 0.0;  // no "-0.000000"
        std::snprintf(buf, sizeof buf, "%.6f", v);
        std::cout << vvc_inference_output_name(result.get(), i) << " = " << buf;
        if (vvc_inference_no_rule_fired(result.get(), i))
            std::cout << "  (no rule fired)";
        std::cout << '\n';
    }
    std::cout << "\n rule  strength  text\n";
    for (size_t i = 0; i < vvc_inference_rule_count(result.get()); ++i) {
        std::snprintf(buf, sizeof buf, "%5zu  %8.4f  ", i + 1, vvc_inference_rule_strength(result.get(), i));
        std::cout << buf << vvc_fis_rule_text(fis.get(), i) << '\n';
    }
    return kExitOk;
}

int cmd_validate(const std::string& config)
{
    vvc_diagnostics* draw = nullptr;
    const vvc_status st = vvc_validate_config(config.c_str(), &draw);
    Diags diags(draw);
    print_diagnostics(diags.get());
    if (st != VVC_OK)
        return report_failure(st, diags.get());
    std::size_t warnings = vvc_diagnostics_count(diags.get());
    std::cout << config << ": ok";
    if (warnings > 0)
        std::cout << " (" << warnings << (warnings == 1 ? " warning)" : " warnings)");
    std::cout << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Volt/VAR control simulation and analysis"};
    app.set_version_flag("--version", std::string(vvc_version()));
    app.require_subcommand(1);

    std::string sim_config, sim_out, sim_summary;
    auto* sim = app.add_subcommand("simulate", "Run a scenario in closed loop");
    sim->add_option("config", sim_config, "Scenario configuration")->required();
    sim->add_option("--out", sim_out, "Run-log CSV (overrides the configuration)");
    sim->add_option("--summary", sim_summary, "Summary file (default: configuration, else stdout)");

    std::string ev_ref, ev_test, ev_from, ev_to;
    auto* ev = app.add_subcommand("evaluate", "Compare a reference and a test run log");
    ev->add_option("ref", ev_ref, "Reference run log")->required();
    ev->add_option("test", ev_test, "Test run log")->required();
    ev->add_option("--from", ev_from, "Interval start, HH:MM[:SS]");
    ev->add_option("--to", ev_to, "Interval end, HH:MM[:SS]");

    std::string inf_fis, inf_rules, inf_schedule;
    std::vector<std::string> inf_in;
    auto* inf = app.add_subcommand("infer", "Evaluate the fuzzy system once");
    inf->add_option("fis", inf_fis, "System definition")->required();
    inf->add_option("rules", inf_rules, "Rule file")->required();
    inf->add_option("--in", inf_in, "Input value as name=value")->take_all();
    inf->add_option("--schedule", inf_schedule, "Peak windows, e.g. \"10:00-14:00, 18:00-22:00\"");

    std::string val_config;
    auto* val = app.add_subcommand("validate", "Check a scenario configuration and its files");
    val->add_option("config", val_config, "Scenario configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    if (*sim)
        return cmd_simulate(sim_config, sim_out, sim_summary);
    if (*ev)
        return cmd_evaluate(ev_ref, ev_test, ev_from, ev_to);
    if (*inf)
        return cmd_infer(inf_fis, inf_rules, inf_in, inf_schedule);
    return cmd_validate(val_config);
}
