#include "vvc/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace vvc {

namespace {

void require_nonempty(std::span<const SeriesSample> s, const char* what)
{
    if (s.empty())
        throw InputError(std::string(what) + ": empty series");
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

double mean_voltage(std::span<const SeriesSample> s)
{
    require_nonempty(s, "mean_voltage");
    double sum = 0.0;
    for (const auto& x : s)
        sum += x.v2_kv;
    return sum / static_cast<double>(s.size());
}

double max_deviation(std::span<const SeriesSample> s, double ref_kv)
{
    require_nonempty(s, "max_deviation");
    double m = 0.0;
    for (const auto& x : s)
        m = std::max(m, std::abs(x.v2_kv - ref_kv));
    return m;
}

double mean_deviation(std::span<const SeriesSample> s, double ref_kv)
{
    require_nonempty(s, "mean_deviation");
    double sum = 0.0;
    for (const auto& x : s)
        sum += std::abs(x.v2_kv - ref_kv);
    return sum / static_cast<double>(s.size());
}

double losses_ratio(double cos_ref, double cos_test)
{
    if (!(cos_ref > 0.0 && cos_ref <= 1.0 && cos_test > 0.0 && cos_test <= 1.0))
        throw RangeError("power factors must lie in (0, 1]");
    const double r = cos_ref / cos_test;
    return r * r;
}

namespace {

void check_aligned(std::span<const SeriesSample> a, std::span<const SeriesSample> b)
{
    if (a.size() != b.size())
        throw AlignmentError("series lengths differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                             ")");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].time_s != b[i].time_s)
            throw AlignmentError("timestamps differ at sample " + std::to_string(i) + " (" + fixed(a[i].time_s, 3) +
                                 " vs " + fixed(b[i].time_s, 3) + ")");
}

}  // namespace

double avg_losses_ratio(std::span<const SeriesSample> ref, std::span<const SeriesSample> test)
{
    check_aligned(ref, test);
    require_nonempty(ref, "avg_losses_ratio");
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        sum += losses_ratio(ref[i].pf, test[i].pf);
    return sum / static_cast<double>(ref.size());
}

SummaryStats summarize(std::span<const SeriesSample> s, double ref_kv)
{
    require_nonempty(s, "summarize");
    SummaryStats out;
    out.n = s.size();
    out.u_mean_kv = mean_voltage(s);
    out.d_max_kv = max_deviation(s, ref_kv);
    out.d_mean_kv = mean_deviation(s, ref_kv);

    std::size_t ge098 = 0;
    std::size_t ge099 = 0;
    out.pf_min = s.front().pf;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto& x = s[i];
        out.pf_min = std::min(out.pf_min, x.pf);
        ge098 += x.pf >= 0.98 ? 1 : 0;
        ge099 += x.pf >= 0.99 ? 1 : 0;
        if (i + 1 < s.size()) {
            if (x.leading)
                out.leading_duration_s += std::max(0.0, s[i + 1].time_s - x.time_s);
            const int dtap = s[i + 1].tap - x.tap;
            if (dtap != 0) {
                ++out.tap_ops;
                out.tap_positions += std::abs(dtap);
            }
            if (s[i + 1].cap_connected != x.cap_connected)
                ++out.cap_ops;
        }
    }
    out.frac_pf_ge_098 = static_cast<double>(ge098) / static_cast<double>(s.size());
    out.frac_pf_ge_099 = static_cast<double>(ge099) / static_cast<double>(s.size());
    return out;
}

bool DayInterval::contains(double t_s) const
{
    double tod = std::fmod(t_s, 86400.0);
    if (tod < 0.0)
        tod += 86400.0;
    if (from_s <= to_s)
        return tod >= from_s && tod <= to_s;
    return tod >= from_s || tod <= to_s;
}

std::optional<double> parse_time_of_day(std::string_view text)
{
    int parts[3] = {0, 0, 0};
    int n = 0;
    while (true) {
        if (n == 3)
            return std::nullopt;
        const auto colon = text.find(':');
        const std::string_view f = text.substr(0, colon);
        int v = 0;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || v < 0)
            return std::nullopt;
        parts[n++] = v;
        if (colon == std::string_view::npos)
            break;
        text.remove_prefix(colon + 1);
    }
    if (n < 2 || parts[0] > 24 || parts[1] >= 60 || parts[2] >= 60)
        return std::nullopt;
    const double s = parts[0] * 3600.0 + parts[1] * 60.0 + parts[2];
    if (s > 86400.0)
        return std::nullopt;
    return s;
}

std::string format_time_of_day(double seconds)
{
    const long s = std::lround(seconds);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02ld:%02ld:%02ld", s / 3600, (s / 60) % 60, s % 60);
    return buf;
}

ComparisonReport compare(std::span<const SeriesSample> ref, std::span<const SeriesSample> test,
                         std::optional<DayInterval> interval, double ref_kv)
{
    check_aligned(ref, test);
    if (ref.empty())
        throw AlignmentError("nothing to compare: both series are empty");

    ComparisonReport r;
    r.ref = summarize(ref, ref_kv);
    r.test = summarize(test, ref_kv);
    r.phi_profile.reserve(ref.size());
    double sum = 0.0;
    double sum_in = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double phi = losses_ratio(ref[i].pf, test[i].pf);
        r.phi_profile.push_back(phi);
        sum += phi;
        if (interval && interval->contains(ref[i].time_s)) {
            sum_in += phi;
            ++r.interval_samples;
        }
    }
    r.phi_mean = sum / static_cast<double>(ref.size());
    if (interval) {
        if (r.interval_samples == 0)
            throw AlignmentError("interval " + format_time_of_day(interval->from_s) + "-" +
                                 format_time_of_day(interval->to_s) + " contains no samples of the compared span");
        r.interval = interval;
        r.phi_mean_interval = sum_in / static_cast<double>(r.interval_samples);
    }
    if (r.ref.d_mean_kv == 0.0)
        r.d_mean_ratio = r.test.d_mean_kv == 0.0 ? 1.0 : INFINITY;
    else
        r.d_mean_ratio = r.test.d_mean_kv / r.ref.d_mean_kv;
    return r;
}

std::string format_summary(const SummaryStats& s)
{
    std::string out;
    auto line = [&](const char* k, const std::string& v) { out += std::string(k) + " = " + v + '\n'; };
    line("u_mean_kv", fixed(s.u_mean_kv, 4));
    line("d_max_kv", fixed(s.d_max_kv, 4));
    line("d_mean_kv", fixed(s.d_mean_kv, 4));
    line("pf_min", fixed(s.pf_min, 4));
    line("frac_pf_ge_098", fixed(s.frac_pf_ge_098, 4));
    line("frac_pf_ge_099", fixed(s.frac_pf_ge_099, 4));
    line("leading_duration_s", fixed(s.leading_duration_s, 0));
    line("tap_ops", std::to_string(s.tap_ops));
    line("tap_positions", std::to_string(s.tap_positions));
    line("cap_ops", std::to_string(s.cap_ops));
    line("n", std::to_string(s.n));
    return out;
}

std::string format_report(const ComparisonReport& r, const std::string& ref_label, const std::string& test_label)
{
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s %14s %14s\n", "statistic", ref_label.c_str(), test_label.c_str());
    out += buf;
    auto row = [&](const char* name, const std::string& a, const std::string& b) {
        std::snprintf(buf, sizeof buf, "%-22s %14s %14s\n", name, a.c_str(), b.c_str());
        out += buf;
    };
    row("u_mean_kv", fixed(r.ref.u_mean_kv, 4), fixed(r.test.u_mean_kv, 4));
    row("d_max_kv", fixed(r.ref.d_max_kv, 4), fixed(r.test.d_max_kv, 4));
    row("d_mean_kv", fixed(r.ref.d_mean_kv, 4), fixed(r.test.d_mean_kv, 4));
    row("pf_min", fixed(r.ref.pf_min, 4), fixed(r.test.pf_min, 4));
    row("frac_pf_ge_098", fixed(r.ref.frac_pf_ge_098, 4), fixed(r.test.frac_pf_ge_098, 4));
    row("frac_pf_ge_099", fixed(r.ref.frac_pf_ge_099, 4), fixed(r.test.frac_pf_ge_099, 4));
    row("leading_duration_s", fixed(r.ref.leading_duration_s, 0), fixed(r.test.leading_duration_s, 0));
    row("tap_ops", std::to_string(r.ref.tap_ops), std::to_string(r.test.tap_ops));
    row("tap_positions", std::to_string(r.ref.tap_positions), std::to_string(r.test.tap_positions));
    row("cap_ops", std::to_string(r.ref.cap_ops), std::to_string(r.test.cap_ops));
    row("n", std::to_string(r.ref.n), std::to_string(r.test.n));
    out += '\n';
    out += "d_mean_ratio = " + fixed(r.d_mean_ratio, 4) + '\n';
    out += "d_mean_reduction_pct = " + fixed(reduction_percent(r.d_mean_ratio), 2) + '\n';
    out += '\n';

    std::snprintf(buf, sizeof buf, "%-22s %14s %20s\n", "losses ratio", "phi_mean", "loss_reduction_pct");
    out += buf;
    std::snprintf(buf, sizeof buf, "%-22s %14s %20s\n", "whole span", fixed(r.phi_mean, 4).c_str(),
                  fixed(reduction_percent(r.phi_mean), 2).c_str());
    out += buf;
    if (r.interval && r.phi_mean_interval) {
        const std::string label = format_time_of_day(r.interval->from_s) + "-" + format_time_of_day(r.interval->to_s);
        std::snprintf(buf, sizeof buf, "%-22s %14s %20s\n", label.c_str(), fixed(*r.phi_mean_interval, 4).c_str(),
                      fixed(reduction_percent(*r.phi_mean_interval), 2).c_str());
        out += buf;
    }
    return out;
}

}  // namespace vvc
