#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "vvc/metrics.hpp"

using namespace vvc;

namespace {

Series voltages(std::initializer_list<double> v)
{
    Series s;
    double t = 0;
    for (double x : v) {
        SeriesSample smp;
        smp.time_s = t;
        smp.v2_kv = x;
        s.push_back(smp);
        t += 4;
    }
    return s;
}

Series with_pf(std::initializer_list<double> pf)
{
    Series s;
    double t = 0;
    for (double x : pf) {
        SeriesSample smp;
        smp.time_s = t;
        smp.v2_kv = 21;
        smp.pf = x;
        s.push_back(smp);
        t += 4;
    }
    return s;
}

}  // namespace

TEST_CASE("mean voltage")
{
    CHECK(mean_voltage(voltages({21.0, 21.0, 21.0})) == 21.0);
    CHECK(mean_voltage(voltages({20.8, 21.2})) == doctest::Approx(21.0));
    CHECK(mean_voltage(voltages({21.0, 21.3, 20.8})) == doctest::Approx(21.033333333));
    CHECK_THROWS_AS(mean_voltage(Series{}), InputError);
}

TEST_CASE("maximum and mean deviation")
{
    const auto s = voltages({21.0, 21.3, 20.8});
    CHECK(max_deviation(s, 21.0) == doctest::Approx(0.3));
    CHECK(mean_deviation(s, 21.0) == doctest::Approx(0.1666667));
    const auto flat = voltages({21, 21, 21, 21});
    CHECK(max_deviation(flat) == 0.0);
    CHECK(mean_deviation(flat) == 0.0);
    CHECK_THROWS_AS(max_deviation(Series{}), InputError);
    CHECK_THROWS_AS(mean_deviation(Series{}), InputError);
    CHECK(0.0792 / 0.2192 == doctest::Approx(0.3613).epsilon(1e-4));
}

TEST_CASE("deviation properties under random series")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> v(20, 22), shift(-1, 1);
    for (int k = 0; k < 100; ++k) {
        Series s;
        for (int i = 0; i < 50; ++i)
            s.push_back({i * 4.0, v(rng), 1.0, false, 0, false});
        const double dm = mean_deviation(s), dM = max_deviation(s);
        CHECK(dm <= dM);
        CHECK(dm >= 0.0);
        // Shifting the series and the reference together changes nothing.
        const double d = shift(rng);
        Series moved = s;
        for (auto& x : moved)
            x.v2_kv += d;
        CHECK(mean_deviation(moved, 21.0 + d) == doctest::Approx(dm).epsilon(1e-9));
        CHECK(max_deviation(moved, 21.0 + d) == doctest::Approx(dM).epsilon(1e-9));
    }
}

TEST_CASE("losses ratio")
{
    CHECK(losses_ratio(0.93, 0.93) == 1.0);
    CHECK(losses_ratio(0.9306, 1.0) == doctest::Approx(0.8660).epsilon(5e-4));
    CHECK(losses_ratio(0.98, 0.99) == doctest::Approx(0.97990).epsilon(1e-5));
    CHECK_THROWS_AS(losses_ratio(0, 1), RangeError);
    CHECK_THROWS_AS(losses_ratio(1, -0.5), RangeError);
    CHECK_THROWS_AS(losses_ratio(1.01, 1), RangeError);
    CHECK(reduction_percent(losses_ratio(0.9306, 1.0)) == doctest::Approx(13.40).epsilon(0.05 / 13.4));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double a = u(rng), b = u(rng);
        CHECK(losses_ratio(a, b) * losses_ratio(b, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("average losses ratio")
{
    const auto s = with_pf({0.95, 0.97, 0.99});
    CHECK(avg_losses_ratio(s, s) == 1.0);
    const auto ref = with_pf({1.0, 0.9306});
    const auto test = with_pf({1.0, 1.0});
    CHECK(avg_losses_ratio(ref, test) == doctest::Approx(0.9330).epsilon(3e-4));
    auto shifted = test;
    shifted[1].time_s += 1;
    CHECK_THROWS_AS(avg_losses_ratio(ref, shifted), AlignmentError);
    CHECK_THROWS_AS(avg_losses_ratio(ref, with_pf({1.0})), AlignmentError);
}

TEST_CASE("summarize counts")
{
    SUBCASE("constant log")
    {
        const auto s = summarize(voltages({21, 21, 21}));
        CHECK(s.d_max_kv == 0.0);
        CHECK(s.d_mean_kv == 0.0);
        CHECK(s.tap_ops == 0);
        CHECK(s.cap_ops == 0);
        CHECK(s.n == 3);
        CHECK(s.frac_pf_ge_099 == 1.0);
    }
    SUBCASE("one tap event and a capacitor connect and disconnect")
    {
        auto s = voltages({21, 21, 21, 21, 21, 21});
        s[2].tap = s[3].tap = s[4].tap = s[5].tap = -2;
        s[1].cap_connected = s[2].cap_connected = true;
        const auto st = summarize(s);
        CHECK(st.tap_ops == 1);
        CHECK(st.tap_positions == 2);
        CHECK(st.cap_ops == 2);
    }
    SUBCASE("power factor fractions and leading time")
    {
        auto s = with_pf({0.97, 0.98, 0.985, 0.99, 1.0});
        s[1].leading = true;
        s[4].leading = true;  // last sample has no duration
        const auto st = summarize(s);
        CHECK(st.frac_pf_ge_098 == doctest::Approx(0.8));
        CHECK(st.frac_pf_ge_099 == doctest::Approx(0.4));
        CHECK(st.pf_min == 0.97);
        CHECK(st.leading_duration_s == 4.0);
    }
    CHECK_THROWS_AS(summarize(Series{}), InputError);
}

TEST_CASE("summarize: order matters only for order-dependent fields")
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> v(20.3, 21.7), pf(0.95, 1.0);
    Series s;
    for (int i = 0; i < 400; ++i)
        s.push_back({i * 4.0, v(rng), pf(rng), (rng() % 7) == 0, i / 100, i >= 200});
    const auto a = summarize(s);

    Series shuffled = s;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t i = 0; i < shuffled.size(); ++i)
        shuffled[i].time_s = i * 4.0;
    const auto b = summarize(shuffled);
    CHECK(b.u_mean_kv == doctest::Approx(a.u_mean_kv).epsilon(1e-12));
    CHECK(b.d_max_kv == a.d_max_kv);
    CHECK(b.d_mean_kv == doctest::Approx(a.d_mean_kv).epsilon(1e-12));
    CHECK(b.pf_min == a.pf_min);
    CHECK(b.frac_pf_ge_098 == a.frac_pf_ge_098);
    CHECK(a.tap_ops == 3);
    CHECK(a.cap_ops == 1);
    CHECK(b.tap_ops > a.tap_ops);  // switching counts depend on order
    CHECK(b.cap_ops > a.cap_ops);
}

TEST_CASE("time of day parsing and intervals")
{
    CHECK(parse_time_of_day("23:55:30") == 86130.0);
    CHECK(parse_time_of_day("08:13") == 29580.0);
    CHECK(parse_time_of_day("24:00") == 86400.0);
    CHECK_FALSE(parse_time_of_day("8").has_value());
    CHECK_FALSE(parse_time_of_day("08:60").has_value());
    CHECK_FALSE(parse_time_of_day("x:00").has_value());
    CHECK_FALSE(parse_time_of_day("24:00:01").has_value());
    CHECK(format_time_of_day(29599) == "08:13:19");

    const DayInterval night{86130, 29599};
    CHECK(night.contains(0));
    CHECK(night.contains(86200));
    CHECK(night.contains(86400 + 100));
    CHECK_FALSE(night.contains(43200));
    const DayInterval day{36000, 50400};
    CHECK(day.contains(40000));
    CHECK_FALSE(day.contains(60000));
}

TEST_CASE("compare")
{
    SUBCASE("a series against itself")
    {
        auto s = with_pf({0.95, 0.97, 0.99, 1.0});
        s[1].v2_kv = 21.2;
        const auto r = compare(s, s);
        CHECK(r.phi_mean == 1.0);
        CHECK(r.d_mean_ratio == 1.0);
        CHECK(r.phi_profile.size() == 4);
        CHECK_FALSE(r.phi_mean_interval.has_value());
    }
    SUBCASE("whole span and wrapped interval are reported separately")
    {
        Series ref, test;
        for (int i = 0; i < 24; ++i) {
            const double t = i * 3600.0;
            const bool night = i <= 8;
            ref.push_back({t, 21.2, night ? 0.9306 : 1.0, false, 0, true});
            test.push_back({t, 21.05, 1.0, false, 0, !night});
        }
        const auto r = compare(ref, test, DayInterval{86130, 29599});
        CHECK(r.interval_samples == 9);
        REQUIRE(r.phi_mean_interval.has_value());
        CHECK(*r.phi_mean_interval == doctest::Approx(0.8660).epsilon(5e-4));
        CHECK(r.phi_mean == doctest::Approx((9 * 0.86602 + 15) / 24).epsilon(1e-4));
        CHECK(r.d_mean_ratio == doctest::Approx(0.25));
        const auto text = format_report(r);
        CHECK(text.find("whole span") != std::string::npos);
        CHECK(text.find("23:55:30-08:13:19") != std::string::npos);
    }
    SUBCASE("interval without samples")
    {
        const auto s = with_pf({1, 1, 1});
        CHECK_THROWS_AS(compare(s, s, DayInterval{3600, 7200}), AlignmentError);
    }
    SUBCASE("misaligned")
    {
        const auto a = with_pf({1, 1, 1});
        auto b = a;
        b[2].time_s = 100;
        CHECK_THROWS_AS(compare(a, b), AlignmentError);
        CHECK_THROWS_AS(compare(Series{}, Series{}), AlignmentError);
    }
}

TEST_CASE("report prints ratio and reduction for fixed mean deviations")
{
    // Each series sits at a constant offset, so its mean deviation is that offset.
    Series ref, test;
    for (int i = 0; i < 100; ++i) {
        ref.push_back({i * 4.0, i % 2 ? 21.2192 : 20.7808, 1.0, false, 0, false});
        test.push_back({i * 4.0, i % 2 ? 21.0792 : 20.9208, 1.0, false, 0, false});
    }
    const auto r = compare(ref, test);
    CHECK(r.ref.d_mean_kv == doctest::Approx(0.2192).epsilon(1e-9));
    CHECK(r.test.d_mean_kv == doctest::Approx(0.0792).epsilon(1e-9));
    const auto text = format_report(r);
    CHECK(text.find("d_mean_ratio = 0.3613\n") != std::string::npos);
    CHECK(text.find("d_mean_reduction_pct = 63.87\n") != std::string::npos);
}

TEST_CASE("summary format")
{
    const auto text = format_summary(summarize(voltages({21.0, 21.3, 20.8})));
    CHECK(text.find("u_mean_kv = 21.0333\n") != std::string::npos);
    CHECK(text.find("d_max_kv = 0.3000\n") != std::string::npos);
    CHECK(text.find("d_mean_kv = 0.1667\n") != std::string::npos);
    CHECK(text.find("n = 3\n") != std::string::npos);
}
