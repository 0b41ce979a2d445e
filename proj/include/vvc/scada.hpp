#pragma once

#include <cstdint>
#include <random>

#include "vvc/plant.hpp"

namespace vvc {

/// Telemetry resolution and refresh period of the control-centre view.
struct QuantizationSpec {
    double v_step_v = 100.0;
    double p_step_kw = 10.0;
    double q_step_kvar = 10.0;
    int tap_step = 1;
    double refresh_s = 4.0;
};

struct NoiseSpec {
    bool enabled = false;
    double sigma_v_v = 100.0;
    double sigma_q_kvar = 0.0;
    std::uint64_t seed = 1;
};

void validate(const QuantizationSpec& q);
void validate(const NoiseSpec& n);

struct Measurement {
    double time_s = 0.0;
    double v2_kv = 0.0;
    double p_mw = 0.0;
    double q_hv_mvar = 0.0;
    double pf = 1.0;  // recomputed from the quantized p and q
    int tap = 0;
    bool cap_connected = false;
};

/// Deterministic zero-mean Gaussian source. Normals are produced with the
/// Box-Muller transform over a 64-bit Mersenne Twister so that a seed maps
/// to the same stream with every standard library.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}
    double normal(double sigma);

private:
    double uniform01();

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Round to the nearest multiple of `step`, halves away from zero.
/// Ties are detected with a relative tolerance so that decimal inputs such as
/// 21.35 kV behave as written.
double quantize_value(double x, double step);

/// Adds optional noise to v2 and q_hv, then rounds every channel to its
/// resolution. Tap and capacitor status pass through unchanged.
Measurement quantize(const QuantizationSpec& spec, const OperatingPoint& op, double time_s,
                     const NoiseSpec& noise = {}, NoiseSource* rng = nullptr);

/// True iff t is an integer multiple of the refresh period.
bool sample_clock(double refresh_s, double t_s);

}  // namespace vvc
