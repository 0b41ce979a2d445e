#include <cmath>
#include <random>

#include "doctest.h"
#include "vvc/scada.hpp"

using namespace vvc;

namespace {

OperatingPoint point(double v2, double p, double q)
{
    OperatingPoint op;
    op.v2_kv = v2;
    op.p_hv_mw = p;
    op.q_hv_mvar = q;
    op.tap = 4;
    op.cap_connected = true;
    return op;
}

}  // namespace

TEST_CASE("quantization examples")
{
    const QuantizationSpec spec;
    CHECK(quantize(spec, point(21.347, 20, 1), 0).v2_kv == doctest::Approx(21.3).epsilon(1e-12));
    CHECK(quantize(spec, point(21.350, 20, 1), 0).v2_kv == doctest::Approx(21.4).epsilon(1e-12));
    const auto m = quantize(spec, point(21, 20, -0.004), 0);
    CHECK(m.q_hv_mvar == 0.0);
    CHECK_FALSE(std::signbit(m.q_hv_mvar));
    CHECK(m.tap == 4);
    CHECK(m.cap_connected);
}

TEST_CASE("ties round away from zero")
{
    CHECK(quantize_value(250, 100) == 300);
    CHECK(quantize_value(-250, 100) == -300);
    CHECK(quantize_value(-5, 10) == -10);
    CHECK(quantize_value(249.999, 100) == 200);
    CHECK(quantize_value(0.04, 100) == 0.0);
}

TEST_CASE("quantized values are whole numbers of steps")
{
    const QuantizationSpec spec;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> v(19, 23), p(0, 40), q(-5, 10);
    for (int k = 0; k < 1000; ++k) {
        const auto op = point(v(rng), p(rng), q(rng));
        const auto m = quantize(spec, op, 0);
        const double nv = m.v2_kv * 10, np = m.p_mw * 100, nq = m.q_hv_mvar * 100;
        CHECK(std::abs(nv - std::round(nv)) < 1e-9);
        CHECK(std::abs(np - std::round(np)) < 1e-9);
        CHECK(std::abs(nq - std::round(nq)) < 1e-9);
        CHECK(std::abs(m.v2_kv - op.v2_kv) <= 0.05 + 1e-12);
        CHECK(std::abs(m.p_mw - op.p_hv_mw) <= 0.005 + 1e-12);
        CHECK(std::abs(m.q_hv_mvar - op.q_hv_mvar) <= 0.005 + 1e-12);
        CHECK(m.pf == doctest::Approx(power_factor(m.p_mw, m.q_hv_mvar)));

        // Idempotence per channel.
        const auto again = quantize(spec, point(m.v2_kv, m.p_mw, m.q_hv_mvar), 0);
        CHECK(again.v2_kv == m.v2_kv);
        CHECK(again.p_mw == m.p_mw);
        CHECK(again.q_hv_mvar == m.q_hv_mvar);
    }
}

TEST_CASE("noise is seeded and reproducible")
{
    const QuantizationSpec spec;
    NoiseSpec noise;
    noise.enabled = true;
    noise.sigma_v_v = 300;
    noise.sigma_q_kvar = 100;
    NoiseSource a(42), b(42), c(43);
    bool differs = false;
    for (int k = 0; k < 200; ++k) {
        const auto op = point(21.0, 20, 2);
        const auto ma = quantize(spec, op, k * 4.0, noise, &a);
        const auto mb = quantize(spec, op, k * 4.0, noise, &b);
        const auto mc = quantize(spec, op, k * 4.0, noise, &c);
        CHECK(ma.v2_kv == mb.v2_kv);
        CHECK(ma.q_hv_mvar == mb.q_hv_mvar);
        differs = differs || ma.v2_kv != mc.v2_kv;
    }
    CHECK(differs);
}

TEST_CASE("noise has the requested spread")
{
    NoiseSource rng(7);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(300);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(mean) < 3.0);
    CHECK(sd == doctest::Approx(300).epsilon(0.01));
    CHECK(rng.normal(0) == 0.0);
}

TEST_CASE("disabled noise leaves values untouched")
{
    const QuantizationSpec spec;
    NoiseSpec off;
    off.sigma_v_v = 1000;
    NoiseSource rng(1);
    CHECK(quantize(spec, point(21.02, 20, 1), 0, off, &rng).v2_kv == doctest::Approx(21.0));
}

TEST_CASE("sample clock")
{
    CHECK(sample_clock(4, 8));
    CHECK_FALSE(sample_clock(4, 6));
    CHECK(sample_clock(4, 0));
    CHECK(sample_clock(0.1, 0.3));
    CHECK_THROWS_AS(sample_clock(0, 4), RangeError);
}

TEST_CASE("spec validation")
{
    QuantizationSpec q;
    CHECK_NOTHROW(validate(q));
    q.v_step_v = 0;
    CHECK_THROWS_AS(validate(q), DefinitionError);
    NoiseSpec n;
    n.sigma_q_kvar = -1;
    CHECK_THROWS_AS(validate(n), DefinitionError);
}
