#include "vvc/plant.hpp"

#include <algorithm>
#include <cmath>

namespace vvc {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kTolerance_kV = 1e-6;
constexpr double kMinPlausible_kV = 10.0;
constexpr double kMaxPlausible_kV = 30.0;

void check_fractions(const ZipFractions& f, const char* which)
{
    if (std::abs(f.z + f.i + f.p - 1.0) > 1e-9)
        throw DefinitionError(std::string("ZIP fractions for ") + which + " power must sum to 1");
}

}  // namespace

void validate(const TransformerParams& t)
{
    if (!(t.tap_min < 0 && 0 < t.tap_max))
        throw DefinitionError("tap range must straddle the nominal position (tap_min < 0 < tap_max)");
    if (!(t.tap_step > 0.0 && t.tap_step < 0.05))
        throw DefinitionError("tap_step must lie in (0, 0.05)");
    if (!(t.r_pu >= 0.0))
        throw DefinitionError("r_pu must be non-negative");
    if (!(t.x_pu > 0.0))
        throw DefinitionError("x_pu must be positive");
    if (!(t.s_rated_mva > 0.0 && t.v1_nom_kv > 0.0 && t.v2_nom_kv > 0.0))
        throw DefinitionError("transformer ratings must be positive");
}

void validate(const CapacitorBank& c)
{
    if (!(c.q_rated_mvar > 0.0))
        throw DefinitionError("capacitor rating must be positive");
    if (!(c.v_rated_kv > 0.0))
        throw DefinitionError("capacitor rated voltage must be positive");
}

void validate(const ZipLoad& l)
{
    check_fractions(l.active, "active");
    check_fractions(l.reactive, "reactive");
    if (!(l.p0_mw >= 0.0))
        throw DefinitionError("load active power must be non-negative");
    if (!(l.v0_kv > 0.0))
        throw DefinitionError("load reference voltage must be positive");
}

double no_load_voltage(const TransformerParams& t, double v1_kv, int tap)
{
    if (tap < t.tap_min || tap > t.tap_max)
        throw RangeError("tap " + std::to_string(tap) + " outside [" + std::to_string(t.tap_min) + ", " +
                         std::to_string(t.tap_max) + "]");
    return v1_kv / t.v1_nom_kv * t.v2_nom_kv * (1.0 + t.tap_step * tap);
}

LoadPower load_at_voltage(const ZipLoad& l, double v2_kv)
{
    const double ratio = v2_kv / l.v0_kv;
    return {l.p0_mw * l.active.factor(ratio), l.q0_mvar * l.reactive.factor(ratio)};
}

double power_factor(double p_mw, double q_mvar)
{
    if (!(p_mw > 0.0))
        return 1.0;
    return p_mw / std::hypot(p_mw, q_mvar);
}

OperatingPoint solve_operating_point(const TransformerParams& t, const CapacitorBank& cap, bool cap_connected,
                                     const ZipLoad& load, double v1_kv, int tap)
{
    if (!(v1_kv > 0.5 * t.v1_nom_kv && v1_kv < 1.5 * t.v1_nom_kv))
        throw RangeError("primary voltage " + std::to_string(v1_kv) + " kV outside (0.5, 1.5) x nominal");

    const double v20 = no_load_voltage(t, v1_kv, tap);
    const double r = t.r_ohm();
    const double x = t.x_ohm();

    auto through = [&](double v, LoadPower& lp, double& qc) {
        lp = load_at_voltage(load, v);
        qc = cap_connected ? cap.injection(v) : 0.0;
        return lp.q_mvar - qc;
    };

    double v = v20;
    int it = 0;
    bool converged = false;
    while (it < kMaxIterations) {
        ++it;
        LoadPower lp;
        double qc = 0.0;
        const double q_thru = through(v, lp, qc);
        const double next = v20 - (r * lp.p_mw + x * q_thru) / v;
        if (!std::isfinite(next) || next < kMinPlausible_kV || next > kMaxPlausible_kV)
            throw SolverError("secondary voltage left the plausible range (" + std::to_string(next) +
                                  " kV); load is infeasible at this tap",
                              next);
        const double step = std::abs(next - v);
        v = next;
        if (step < kTolerance_kV) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SolverError("operating point did not converge in " + std::to_string(kMaxIterations) + " iterations", v);

    OperatingPoint op;
    op.v1_kv = v1_kv;
    op.v2_kv = v;
    op.tap = tap;
    op.cap_connected = cap_connected;
    op.iterations = it;

    LoadPower lp;
    double qc = 0.0;
    const double q_thru = through(v, lp, qc);
    op.p_load_mw = lp.p_mw;
    op.q_load_mvar = lp.q_mvar;
    op.q_cap_mvar = qc;

    const double s2_over_v2 = (lp.p_mw * lp.p_mw + q_thru * q_thru) / (v * v);
    if (t.hv_metering_includes_losses) {
        op.p_hv_mw = lp.p_mw + r * s2_over_v2;
        op.q_hv_mvar = q_thru + x * s2_over_v2;
    } else {
        op.p_hv_mw = lp.p_mw;
        op.q_hv_mvar = q_thru;
    }
    op.pf = power_factor(op.p_hv_mw, op.q_hv_mvar);
    op.leading = op.q_hv_mvar < 0.0;
    return op;
}

double fixed_point_residual(const TransformerParams& t, const CapacitorBank& cap, const ZipLoad& load,
                            const OperatingPoint& op)
{
    const double v20 = no_load_voltage(t, op.v1_kv, op.tap);
    const LoadPower lp = load_at_voltage(load, op.v2_kv);
    const double q_thru = lp.q_mvar - (op.cap_connected ? cap.injection(op.v2_kv) : 0.0);
    return std::abs(op.v2_kv - v20 + (t.r_ohm() * lp.p_mw + t.x_ohm() * q_thru) / op.v2_kv);
}

const char* to_string(CapCommand c)
{
    switch (c) {
    case CapCommand::Connect:
        return "connect";
    case CapCommand::Disconnect:
        return "disconnect";
    case CapCommand::Hold:
        break;
    }
    return "hold";
}

ActuationResult apply_action(const DeviceState& s, int tap_delta, CapCommand cap, const TransformerParams& t)
{
    ActuationResult out;
    const int wanted = s.tap + tap_delta;
    out.state.tap = std::clamp(wanted, t.tap_min, t.tap_max);
    out.tap_clamped = out.state.tap != wanted;
    switch (cap) {
    case CapCommand::Connect:
        out.state.cap_connected = true;
        break;
    case CapCommand::Disconnect:
        out.state.cap_connected = false;
        break;
    case CapCommand::Hold:
        out.state.cap_connected = s.cap_connected;
        break;
    }
    return out;
}

}  // namespace vvc
