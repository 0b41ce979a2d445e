#pragma once

// Voltage-profile and loss-ratio statistics over logged telemetry.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vvc/diagnostics.hpp"

namespace vvc {

class AlignmentError : public Error {
public:
    using Error::Error;
};

struct SeriesSample {
    double time_s = 0.0;
    double v2_kv = 0.0;
    double pf = 1.0;
    bool leading = false;
    int tap = 0;
    bool cap_connected = false;
};

using Series = std::vector<SeriesSample>;

struct SummaryStats {
    double u_mean_kv = 0.0;
    double d_max_kv = 0.0;
    double d_mean_kv = 0.0;
    double pf_min = 1.0;
    double frac_pf_ge_098 = 0.0;
    double frac_pf_ge_099 = 0.0;
    double leading_duration_s = 0.0;
    int tap_ops = 0;        // events, a two-position move counts once
    int tap_positions = 0;  // positions travelled
    int cap_ops = 0;        // breaker state changes
    std::size_t n = 0;
};

/// Throws InputError on an empty series.
double mean_voltage(std::span<const SeriesSample> s);
/// Largest |U_i - ref|.
double max_deviation(std::span<const SeriesSample> s, double ref_kv = 21.0);
/// Mean of |U_i - ref|.
double mean_deviation(std::span<const SeriesSample> s, double ref_kv = 21.0);

/// Joule-loss ratio proxy (cos_ref / cos_test)^2. Throws RangeError unless
/// both factors lie in (0, 1].
double losses_ratio(double cos_ref, double cos_test);

/// Mean per-sample losses ratio; throws AlignmentError unless both series
/// carry identical timestamps.
double avg_losses_ratio(std::span<const SeriesSample> ref, std::span<const SeriesSample> test);

/// Percent reduction implied by a ratio: (1 - ratio) * 100.
inline double reduction_percent(double ratio)
{
    return (1.0 - ratio) * 100.0;
}

SummaryStats summarize(std::span<const SeriesSample> s, double ref_kv = 21.0);

/// Time-of-day window in seconds after midnight. When from > to the window
/// wraps through midnight, as in 23:55:30 - 08:13:19.
struct DayInterval {
    double from_s = 0.0;
    double to_s = 0.0;

    bool contains(double t_s) const;
};

/// Parses HH:MM[:SS].
std::optional<double> parse_time_of_day(std::string_view text);
std::string format_time_of_day(double seconds);

struct ComparisonReport {
    SummaryStats ref;
    SummaryStats test;
    double phi_mean = 1.0;
    std::optional<DayInterval> interval;
    std::optional<double> phi_mean_interval;
    std::size_t interval_samples = 0;
    std::vector<double> phi_profile;  // per aligned sample
    double d_mean_ratio = 1.0;        // test D_m / ref D_m
};

/// Aligns the two series (identical timestamps required) and evaluates the
/// whole span plus the optional time-of-day sub-interval. Throws
/// AlignmentError when the series cannot be aligned or the interval holds
/// no samples.
ComparisonReport compare(std::span<const SeriesSample> ref, std::span<const SeriesSample> test,
                         std::optional<DayInterval> interval = std::nullopt, double ref_kv = 21.0);

/// "key = value" lines, one per SummaryStats field.
std::string format_summary(const SummaryStats& s);

/// Two-column table of both summaries followed by the losses-ratio rows.
std::string format_report(const ComparisonReport& r, const std::string& ref_label = "ref",
                          const std::string& test_label = "test");

}  // namespace vvc
