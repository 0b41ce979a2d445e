#include "vvc/controller.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <tuple>

namespace vvc {

std::string ControlAction::suppression() const
{
    std::string out;
    for (const auto& s : suppressed_by) {
        if (!out.empty())
            out += '|';
        out += s;
    }
    return out;
}

void validate(const ControllerLimits& lim)
{
    if (lim.max_tap_ops_per_day <= 0 || lim.max_cap_ops_per_day <= 0)
        throw DefinitionError("daily switching budgets must be positive");
    if (!(lim.tap_dwell_s > 0.0 && lim.cap_dwell_s > 0.0))
        throw DefinitionError("dwell times must be positive");
    if (!(lim.tap_deadzone > 0.0 && lim.cap_threshold > 0.0))
        throw DefinitionError("decision thresholds must be positive");
    if (lim.persistence < 1)
        throw DefinitionError("persistence must be at least one sample");
}

bool PeakSchedule::on_peak(double hour) const
{
    for (const auto& w : windows)
        if (hour >= w.start_h && hour < w.end_h)
            return true;
    return false;
}

PeakSchedule PeakSchedule::standard()
{
    return {{{10.0, 14.0}, {18.0, 22.0}}};
}

void validate(const PeakSchedule& s)
{
    auto sorted = s.windows;
    std::sort(sorted.begin(), sorted.end(), [](const PeakWindow& a, const PeakWindow& b) { return a.start_h < b.start_h; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& w = sorted[i];
        if (!(w.start_h >= 0.0 && w.end_h <= 24.0 && w.start_h < w.end_h))
            throw DefinitionError("on-peak windows must satisfy 0 <= start < end <= 24");
        if (i > 0 && w.start_h < sorted[i - 1].end_h)
            throw DefinitionError("on-peak windows overlap");
    }
}

namespace {

std::optional<double> parse_clock(std::string_view s)
{
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    double parts[3] = {0, 0, 0};
    int n = 0;
    while (!s.empty()) {
        if (n == 3)
            return std::nullopt;
        const auto colon = s.find(':');
        const std::string_view field = s.substr(0, colon);
        int v = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || v < 0)
            return std::nullopt;
        parts[n++] = v;
        if (colon == std::string_view::npos)
            break;
        s.remove_prefix(colon + 1);
        if (s.empty())
            return std::nullopt;
    }
    if (n == 0 || parts[1] >= 60 || parts[2] >= 60)
        return std::nullopt;
    return parts[0] + parts[1] / 60.0 + parts[2] / 3600.0;
}

}  // namespace

PeakSchedule parse_peak_schedule(std::string_view text)
{
    PeakSchedule out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        if (item.find_first_not_of(' ') != std::string_view::npos) {
            const auto dash = item.find('-');
            if (dash == std::string_view::npos)
                throw DefinitionError("on-peak window '" + std::string(item) + "' must look like HH:MM-HH:MM");
            auto a = parse_clock(item.substr(0, dash));
            auto b = parse_clock(item.substr(dash + 1));
            if (!a || !b)
                throw DefinitionError("bad time in on-peak window '" + std::string(item) + "'");
            out.windows.push_back({*a, *b});
        }
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    validate(out);
    return out;
}

FisDefinition bind_peak_schedule(FisDefinition fis, const PeakSchedule& schedule, const FisBindings& names)
{
    LinguisticVariable* tod = nullptr;
    for (auto& v : fis.inputs)
        if (v.answers_to(names.time_of_day))
            tod = &v;
    if (!tod)
        return fis;

    auto windows = schedule.windows;
    std::sort(windows.begin(), windows.end(),
              [](const PeakWindow& a, const PeakWindow& b) { return a.start_h < b.start_h; });

    FuzzySet on{"OnPeak", {}};
    FuzzySet off{"OffPeak", {}};
    double cursor = 0.0;
    for (const auto& w : windows) {
        on.pieces.push_back({w.start_h, w.start_h, w.end_h, w.end_h});
        if (w.start_h > cursor)
            off.pieces.push_back({cursor, cursor, w.start_h, w.start_h});
        cursor = w.end_h;
    }
    if (cursor < 24.0)
        off.pieces.push_back({cursor, cursor, 24.0, 24.0});

    tod->universe = {0.0, 24.0};
    tod->sets = {std::move(on), std::move(off)};
    return fis;
}

int discretize_taps(double crisp, double deadzone)
{
    if (std::abs(crisp) < deadzone)
        return 0;
    return static_cast<int>(std::clamp(std::round(crisp), -2.0, 2.0));
}

CapCommand discretize_capacitor(double crisp, double threshold)
{
    if (crisp >= threshold)
        return CapCommand::Connect;
    if (crisp <= -threshold)
        return CapCommand::Disconnect;
    return CapCommand::Hold;
}

ControlAction fis_decide(const FisDefinition& fis, const Measurement& m, double hour_of_day,
                         const ControllerLimits& lim, const FisBindings& names)
{
    CrispInputs in;
    in[names.voltage] = m.v2_kv;
    in[names.reactive_power] = m.q_hv_mvar;
    in[names.tap] = static_cast<double>(m.tap);
    in[names.capacitor_status] = m.cap_connected ? 1.0 : 0.0;
    in[names.time_of_day] = hour_of_day;

    const InferenceResult r = infer(fis, in);

    ControlAction a;
    a.rule_strengths = r.rule_strengths;
    if (const auto* taps = fis.find_output(names.taps_out)) {
        a.taps_crisp = r.output(taps->name).crisp;
        a.tap_delta = discretize_taps(a.taps_crisp, lim.tap_deadzone);
    }
    if (const auto* cap = fis.find_output(names.capacitor_out)) {
        a.capacitor_crisp = r.output(cap->name).crisp;
        a.cap = discretize_capacitor(a.capacitor_crisp, lim.cap_threshold);
    }
    if ((a.cap == CapCommand::Connect && m.cap_connected) || (a.cap == CapCommand::Disconnect && !m.cap_connected))
        a.cap = CapCommand::Hold;
    a.requested_tap_delta = a.tap_delta;
    a.requested_cap = a.cap;
    return a;
}

ControlAction enforce_limits(ControlAction a, ControllerState& s, const ControllerLimits& lim, double t_s)
{
    const long day = static_cast<long>(std::floor(t_s / 86400.0));
    if (day != s.day) {
        s.day = day;
        s.tap_ops_today = 0;
        s.cap_ops_today = 0;
    }
    a.requested_tap_delta = a.tap_delta;
    a.requested_cap = a.cap;

    if (a.tap_delta == 0) {
        s.pending_tap = 0;
        s.pending_tap_count = 0;
    } else {
        if (a.tap_delta == s.pending_tap) {
            ++s.pending_tap_count;
        } else {
            s.pending_tap = a.tap_delta;
            s.pending_tap_count = 1;
        }
        const char* reason = nullptr;
        if (s.tap_ops_today >= lim.max_tap_ops_per_day)
            reason = "tap_daily_budget";
        else if (s.last_tap_op_s && t_s - *s.last_tap_op_s < lim.tap_dwell_s)
            reason = "tap_dwell";
        else if (s.pending_tap_count < lim.persistence)
            reason = "tap_persistence";

        if (reason) {
            a.suppressed_by.emplace_back(reason);
            a.tap_delta = 0;
        } else {
            ++s.tap_ops_today;
            s.last_tap_op_s = t_s;
            s.pending_tap = 0;
            s.pending_tap_count = 0;
        }
    }

    if (a.cap == CapCommand::Hold) {
        s.pending_cap = CapCommand::Hold;
        s.pending_cap_count = 0;
    } else {
        if (a.cap == s.pending_cap) {
            ++s.pending_cap_count;
        } else {
            s.pending_cap = a.cap;
            s.pending_cap_count = 1;
        }
        const char* reason = nullptr;
        if (s.cap_ops_today >= lim.max_cap_ops_per_day)
            reason = "cap_daily_budget";
        else if (s.last_cap_op_s && t_s - *s.last_cap_op_s < lim.cap_dwell_s)
            reason = "cap_dwell";
        else if (s.pending_cap_count < lim.persistence)
            reason = "cap_persistence";

        if (reason) {
            a.suppressed_by.emplace_back(reason);
            a.cap = CapCommand::Hold;
        } else {
            ++s.cap_ops_today;
            s.last_cap_op_s = t_s;
            s.pending_cap = CapCommand::Hold;
            s.pending_cap_count = 0;
        }
    }
    return a;
}

double baseline_cost(const OperatingPoint& op, const DeviceState& now, const BaselineWeights& w)
{
    const double switching = std::abs(op.tap - now.tap) + (op.cap_connected != now.cap_connected ? 1.0 : 0.0);
    return w.w_v * std::abs(op.v2_kv - w.v_target_kv) + w.w_q * std::max(0.0, w.pf_min - op.pf) + w.w_s * switching;
}

BaselineCandidate baseline_best(const PlantInputs& plant, const DeviceState& now, const BaselineWeights& w)
{
    std::optional<BaselineCandidate> best;
    auto ops = [&](const BaselineCandidate& c) {
        return (c.tap != now.tap ? 1 : 0) + (c.cap_connected != now.cap_connected ? 1 : 0);
    };
    for (int tap = plant.transformer.tap_min; tap <= plant.transformer.tap_max; ++tap) {
        for (bool cap : {false, true}) {
            if (w.lock_capacitor_on && !cap)
                continue;
            BaselineCandidate c;
            try {
                c.op = solve_operating_point(plant.transformer, plant.capacitor, cap, plant.load, plant.v1_kv, tap);
            } catch (const Error&) {
                continue;
            }
            c.tap = tap;
            c.cap_connected = cap;
            c.cost = baseline_cost(c.op, now, w);
            if (!best || std::make_tuple(c.cost, ops(c), c.tap) < std::make_tuple(best->cost, ops(*best), best->tap))
                best = c;
        }
    }
    if (!best)
        throw Error("baseline: no solvable (tap, capacitor) candidate");
    return *best;
}

ControlAction baseline_decide(const PlantInputs& plant, const DeviceState& now, const BaselineWeights& w)
{
    const BaselineCandidate best = baseline_best(plant, now, w);
    ControlAction a;
    a.baseline_cost = best.cost;
    a.tap_delta = std::clamp(best.tap - now.tap, -2, 2);
    if (best.cap_connected != now.cap_connected)
        a.cap = best.cap_connected ? CapCommand::Connect : CapCommand::Disconnect;
    a.requested_tap_delta = a.tap_delta;
    a.requested_cap = a.cap;
    return a;
}

}  // namespace vvc
