#pragma once

// Steady-state model of a HV/MV substation: one OLTC transformer feeding a
// lumped ZIP load and an all-or-nothing shunt capacitor at the secondary bus.
// Units: kV, MW, MVAr; impedances are expressed as "ohm-equivalents" so that
// (R*P + X*Q) / V comes out in kV.

#include <stdexcept>
#include <string>

#include "vvc/diagnostics.hpp"

namespace vvc {

struct TransformerParams {
    double s_rated_mva = 50.0;
    double v1_nom_kv = 66.0;
    double v2_nom_kv = 21.0;  // no-load secondary voltage at tap 0 and nominal primary
    int tap_min = -6;
    int tap_max = 15;
    double tap_step = 0.0146;  // per-unit voltage change per tap position
    double r_pu = 0.005;
    double x_pu = 0.12;
    bool hv_metering_includes_losses = true;

    double base_impedance() const { return v2_nom_kv * v2_nom_kv / s_rated_mva; }
    double r_ohm() const { return r_pu * base_impedance(); }
    double x_ohm() const { return x_pu * base_impedance(); }
};

struct CapacitorBank {
    double q_rated_mvar = 4.2;
    double v_rated_kv = 21.0;

    /// Injection at bus voltage v (kV) when connected.
    double injection(double v_kv) const
    {
        const double r = v_kv / v_rated_kv;
        return q_rated_mvar * r * r;
    }
};

/// Constant-impedance / constant-current / constant-power mix.
struct ZipFractions {
    double z = 0.0;
    double i = 0.0;
    double p = 1.0;

    double factor(double v_ratio) const { return z * v_ratio * v_ratio + i * v_ratio + p; }
};

struct ZipLoad {
    double p0_mw = 0.0;
    double q0_mvar = 0.0;
    double v0_kv = 21.0;
    ZipFractions active;
    ZipFractions reactive;
};

struct LoadPower {
    double p_mw = 0.0;
    double q_mvar = 0.0;
};

struct OperatingPoint {
    double v1_kv = 0.0;
    double v2_kv = 0.0;
    int tap = 0;
    bool cap_connected = false;
    double p_load_mw = 0.0;
    double q_load_mvar = 0.0;
    double q_cap_mvar = 0.0;
    double p_hv_mw = 0.0;
    double q_hv_mvar = 0.0;
    double pf = 1.0;
    bool leading = false;
    int iterations = 0;
};

/// Thrown when the fixed point does not converge or leaves the plausible
/// voltage window; carries the last iterate.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double last_v2) : Error(what), last_v2_kv(last_v2) {}
    double last_v2_kv;
};

void validate(const TransformerParams& t);
void validate(const CapacitorBank& c);
void validate(const ZipLoad& l);

/// Throws RangeError when tap lies outside [tap_min, tap_max].
double no_load_voltage(const TransformerParams& t, double v1_kv, int tap);

LoadPower load_at_voltage(const ZipLoad& l, double v2_kv);

/// Power factor at a metering point; 1 by convention when p <= 0.
double power_factor(double p_mw, double q_mvar);

OperatingPoint solve_operating_point(const TransformerParams& t, const CapacitorBank& cap, bool cap_connected,
                                     const ZipLoad& load, double v1_kv, int tap);

/// |v2 - v2_0 + (R*P + X*Q_thru) / v2| for the solved point, recomputed from
/// the model equations rather than from solver internals.
double fixed_point_residual(const TransformerParams& t, const CapacitorBank& cap, const ZipLoad& load,
                            const OperatingPoint& op);

enum class CapCommand { Hold, Connect, Disconnect };

const char* to_string(CapCommand c);

struct DeviceState {
    int tap = 0;
    bool cap_connected = false;

    friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

struct ActuationResult {
    DeviceState state;
    bool tap_clamped = false;
};

/// Tap moves saturate at the transformer limits instead of failing.
ActuationResult apply_action(const DeviceState& s, int tap_delta, CapCommand cap, const TransformerParams& t);

}  // namespace vvc
