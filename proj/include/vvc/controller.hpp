#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vvc/fuzzy.hpp"
#include "vvc/plant.hpp"
#include "vvc/scada.hpp"

namespace vvc {

/// Names of the variables the supervisory loop feeds to and reads from the
/// fuzzy system. Lookups honour variable aliases.
struct FisBindings {
    std::string voltage = "Voltage";
    std::string reactive_power = "Reactive_power";
    std::string tap = "Tap";
    std::string capacitor_status = "Shunt_Off";
    std::string time_of_day = "TimeOfDay";
    std::string taps_out = "Taps";
    std::string capacitor_out = "Capacitor";
};

struct ControlAction {
    int tap_delta = 0;  // in [-2, 2]
    CapCommand cap = CapCommand::Hold;

    // Why the action was chosen: rule strengths for fuzzy decisions, the candidate cost for
    // the baseline.
    std::vector<double> rule_strengths;
    std::optional<double> baseline_cost;
    double taps_crisp = 0.0;
    double capacitor_crisp = 0.0;

    // Filled by enforce_limits when a component is held back.
    int requested_tap_delta = 0;
    CapCommand requested_cap = CapCommand::Hold;
    std::vector<std::string> suppressed_by;

    bool is_noop() const { return tap_delta == 0 && cap == CapCommand::Hold; }
    std::string suppression() const;  // reasons joined by '|'
};

struct ControllerLimits {
    int max_tap_ops_per_day = 30;
    int max_cap_ops_per_day = 6;
    double tap_dwell_s = 60.0;
    double cap_dwell_s = 300.0;
    double tap_deadzone = 0.5;
    double cap_threshold = 0.5;
    int persistence = 3;
};

void validate(const ControllerLimits& lim);

struct ControllerState {
    std::optional<double> last_tap_op_s;
    std::optional<double> last_cap_op_s;
    int tap_ops_today = 0;
    int cap_ops_today = 0;
    long day = 0;  // index of the day the counters belong to

    int pending_tap = 0;
    int pending_tap_count = 0;
    CapCommand pending_cap = CapCommand::Hold;
    int pending_cap_count = 0;
};

struct PeakWindow {
    double start_h = 0.0;
    double end_h = 0.0;  // exclusive
};

struct PeakSchedule {
    std::vector<PeakWindow> windows;

    bool on_peak(double hour) const;
    static PeakSchedule standard();  // 10-14 h and 18-22 h
};

void validate(const PeakSchedule& s);

/// Parses "10:00-14:00, 18:00-22:00" (minutes and seconds optional).
PeakSchedule parse_peak_schedule(std::string_view text);

/// Returns a copy of `fis` whose time-of-day input has exactly two terms,
/// OnPeak and OffPeak, built as crisp windows from the schedule. Systems
/// without that input are returned unchanged.
FisDefinition bind_peak_schedule(FisDefinition fis, const PeakSchedule& schedule,
                                 const FisBindings& names = {});

/// Maps a crisp Taps value to a tap move: 0 inside the deadzone, otherwise
/// rounded half away from zero and clamped to +-2.
int discretize_taps(double crisp, double deadzone);
CapCommand discretize_capacitor(double crisp, double threshold);

/// One fuzzy decision from a measurement. Commands that would not change the
/// capacitor state are reported as Hold.
ControlAction fis_decide(const FisDefinition& fis, const Measurement& m, double hour_of_day,
                         const ControllerLimits& lim = {}, const FisBindings& names = {});

/// Applies persistence, dwell and daily-budget rules. Each component is
/// emitted only if requested on this sample; held-back components record
/// their reason in suppressed_by.
ControlAction enforce_limits(ControlAction a, ControllerState& s, const ControllerLimits& lim, double t_s);

struct BaselineWeights {
    double w_v = 1.0;    // per kV of deviation
    double w_q = 10.0;   // per unit of power factor below pf_min
    double w_s = 0.05;   // per tap position moved and per breaker operation
    double v_target_kv = 21.0;
    double pf_min = 0.98;
    bool lock_capacitor_on = false;  // restrict candidates to a connected bank
};

struct PlantInputs {
    TransformerParams transformer;
    CapacitorBank capacitor;
    ZipLoad load;
    double v1_kv = 66.0;
};

struct BaselineCandidate {
    int tap = 0;
    bool cap_connected = false;
    double cost = 0.0;
    OperatingPoint op;
};

double baseline_cost(const OperatingPoint& op, const DeviceState& now, const BaselineWeights& w);

/// Exhaustive search over every (tap, capacitor) pair; returns the cheapest
/// solvable candidate, ties broken by fewer device operations then lower tap.
/// Throws Error when no candidate is solvable.
BaselineCandidate baseline_best(const PlantInputs& plant, const DeviceState& now, const BaselineWeights& w);

/// First step toward baseline_best (tap move clamped to +-2).
ControlAction baseline_decide(const PlantInputs& plant, const DeviceState& now, const BaselineWeights& w);

}  // namespace vvc
