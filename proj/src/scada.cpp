#include "vvc/scada.hpp"

#include <cmath>
#include <numbers>

namespace vvc {

void validate(const QuantizationSpec& q)
{
    if (!(q.v_step_v > 0.0 && q.p_step_kw > 0.0 && q.q_step_kvar > 0.0 && q.tap_step > 0 && q.refresh_s > 0.0))
        throw DefinitionError("SCADA resolutions and refresh period must be positive");
}

void validate(const NoiseSpec& n)
{
    if (!(n.sigma_v_v >= 0.0 && n.sigma_q_kvar >= 0.0))
        throw DefinitionError("noise standard deviations must be non-negative");
}

double NoiseSource::uniform01()
{
    // 53 random bits -> [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NoiseSource::normal(double sigma)
{
    if (have_spare_) {
        have_spare_ = false;
        return sigma * spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0)
        u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return sigma * r * std::cos(theta);
}

double quantize_value(double x, double step)
{
    const double n = x / step;
    const double whole = std::trunc(n);
    const double frac = std::abs(n - whole);
    double k;
    if (std::abs(frac - 0.5) <= 1e-9 * std::max(1.0, std::abs(n)))
        k = whole + std::copysign(1.0, n);
    else
        k = std::round(n);
    if (k == 0.0)
        return 0.0;  // no negative zero
    return k * step;
}

namespace {

// Values are rounded in the channel's native unit (V, kW, kVAr) and the
// integer step count is scaled back, which keeps e.g. 21.4 kV exact.
double quantize_scaled(double x_big_unit, double step_small_unit)
{
    const double x_small = x_big_unit * 1000.0;
    const double q = quantize_value(x_small, step_small_unit);
    return q / 1000.0;
}

}  // namespace

Measurement quantize(const QuantizationSpec& spec, const OperatingPoint& op, double time_s, const NoiseSpec& noise,
                     NoiseSource* rng)
{
    double v2 = op.v2_kv;
    double q = op.q_hv_mvar;
    if (noise.enabled && rng) {
        v2 += rng->normal(noise.sigma_v_v) / 1000.0;
        q += rng->normal(noise.sigma_q_kvar) / 1000.0;
    }

    Measurement m;
    m.time_s = time_s;
    m.v2_kv = quantize_scaled(v2, spec.v_step_v);
    m.p_mw = quantize_scaled(op.p_hv_mw, spec.p_step_kw);
    m.q_hv_mvar = quantize_scaled(q, spec.q_step_kvar);
    m.pf = power_factor(m.p_mw, m.q_hv_mvar);
    m.tap = op.tap;
    m.cap_connected = op.cap_connected;
    return m;
}

bool sample_clock(double refresh_s, double t_s)
{
    if (!(refresh_s > 0.0))
        throw RangeError("refresh period must be positive");
    const double n = t_s / refresh_s;
    return std::abs(n - std::round(n)) <= 1e-9 * std::max(1.0, std::abs(n));
}

}  // namespace vvc
