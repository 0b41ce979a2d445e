#pragma once

// Scenario configuration, profile ingestion and the closed-loop driver.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vvc/controller.hpp"
#include "vvc/fuzzy.hpp"
#include "vvc/metrics.hpp"
#include "vvc/plant.hpp"
#include "vvc/scada.hpp"

namespace vvc {

enum class ControllerKind { Fis, Baseline, None };

const char* to_string(ControllerKind k);

struct ProfilePoint {
    double time_s = 0.0;
    double p_mw = 0.0;
    double q_mvar = 0.0;
};

/// Breakpoints of P and Q at the load's reference voltage, times strictly increasing.
struct LoadProfile {
    std::vector<ProfilePoint> points;
};

struct VoltagePoint {
    double time_s = 0.0;
    double v_kv = 0.0;
};

struct VoltageProfile {
    std::vector<VoltagePoint> points;
};

/// Piecewise-linear between breakpoints, flat beyond either end.
/// Throws InputError on an empty profile.
LoadPower interpolate_profile(const LoadProfile& profile, double t_s);
double interpolate_profile(const VoltageProfile& profile, double t_s);

/// CSV with header `time_s,p_mw,q_mvar`. Throws IoError / ParseError (with line numbers).
LoadProfile read_load_profile(const std::filesystem::path& path);
/// CSV with header `time_s,v1_kv`.
VoltageProfile read_voltage_profile(const std::filesystem::path& path);

struct ScenarioConfig {
    std::filesystem::path source;
    std::string name;

    TransformerParams transformer;
    CapacitorBank capacitor;
    int initial_tap = 0;
    bool initial_cap_connected = true;

    double load_v0_kv = 21.0;
    ZipFractions zip_active{0.3, 0.3, 0.4};
    ZipFractions zip_reactive{0.3, 0.3, 0.4};
    std::filesystem::path load_profile_path;

    double v1_kv = 66.0;  // used when no primary profile is given
    std::optional<std::filesystem::path> primary_profile_path;

    QuantizationSpec quantization;
    NoiseSpec noise;

    ControllerKind controller = ControllerKind::Fis;
    std::filesystem::path fis_path;
    std::filesystem::path rules_path;
    ControllerLimits limits;
    PeakSchedule schedule = PeakSchedule::standard();
    BaselineWeights baseline;

    double duration_s = 86400.0;
    double step_s = 4.0;
    double v_ref_kv = 21.0;

    std::optional<std::filesystem::path> log_path;
    std::optional<std::filesystem::path> summary_path;
};

/// A configuration with every referenced file loaded.
struct Scenario {
    ScenarioConfig config;
    FisDefinition fis;  // peak schedule already bound; empty when unused
    LoadProfile load;
    std::optional<VoltageProfile> primary;
};

/// Reads the configuration and its files, appending every diagnostic.
/// Returns nullopt when an error was found. Never throws for content
/// problems; missing files are reported as diagnostics.
std::optional<Scenario> load_scenario(const std::filesystem::path& path, Diagnostics& diags);

/// Throwing variant: ParseError carrying the error diagnostics.
Scenario load_scenario(const std::filesystem::path& path);

/// Schema checks, rule parsing, system validation and lint. Exit status 0
/// corresponds to !has_errors(result).
Diagnostics validate_config(const std::filesystem::path& path);

struct RunRecord {
    double time_s = 0.0;
    double v1_kv = 0.0;
    double v2_true_kv = 0.0;
    double v2_meas_kv = 0.0;
    double p_mw = 0.0;       // measured
    double q_hv_mvar = 0.0;  // measured
    double pf = 1.0;         // measured
    bool leading = false;
    int tap = 0;
    bool cap_connected = false;
    int action_tap = 0;
    CapCommand action_cap = CapCommand::Hold;
    std::string suppressed_by;
};

using RunLog = std::vector<RunRecord>;

/// Raised when the plant cannot be solved during a run.
class SimulationError : public Error {
public:
    SimulationError(const std::string& what, double t) : Error(what), time_s(t) {}
    double time_s;
};

struct RunResult {
    RunLog log;
    SummaryStats summary;
};

/// Sequential closed loop: load -> plant -> telemetry -> decision -> limits
/// -> actuation effective at the next step. One record per step, t = 0
/// included.
RunResult run_scenario(const Scenario& scenario);

extern const char* const kRunLogHeader;

void write_run_log(std::ostream& out, const RunLog& log);
void write_run_log(const std::filesystem::path& path, const RunLog& log);
RunLog read_run_log(const std::filesystem::path& path);
RunLog parse_run_log(std::string_view text, const std::string& source = {});

Series to_series(const RunLog& log);

/// Loads two run logs and compares them (ref first).
ComparisonReport evaluate(const std::filesystem::path& ref_log, const std::filesystem::path& test_log,
                          std::optional<DayInterval> interval = std::nullopt, double ref_kv = 21.0);

}  // namespace vvc
