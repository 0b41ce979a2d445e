#include "vvc/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vvc/config.hpp"
#include "vvc/rules.hpp"

namespace vvc {

const char* to_string(ControllerKind k)
{
    switch (k) {
    case ControllerKind::Fis:
        return "fis";
    case ControllerKind::Baseline:
        return "baseline";
    case ControllerKind::None:
        break;
    }
    return "none";
}

namespace {

template <class Point, class Value>
Value interpolate(const std::vector<Point>& pts, double t, Value (*get)(const Point&), Value (*lerp)(const Value&, const Value&, double))
{
    if (pts.empty())
        throw InputError("profile has no breakpoints");
    if (t <= pts.front().time_s)
        return get(pts.front());
    if (t >= pts.back().time_s)
        return get(pts.back());
    auto hi = std::upper_bound(pts.begin(), pts.end(), t, [](double x, const Point& p) { return x < p.time_s; });
    auto lo = hi - 1;
    if (t == lo->time_s)
        return get(*lo);
    const double w = (t - lo->time_s) / (hi->time_s - lo->time_s);
    return lerp(get(*lo), get(*hi), w);
}

LoadPower get_load(const ProfilePoint& p)
{
    return {p.p_mw, p.q_mvar};
}

LoadPower lerp_load(const LoadPower& a, const LoadPower& b, double w)
{
    return {a.p_mw + (b.p_mw - a.p_mw) * w, a.q_mvar + (b.q_mvar - a.q_mvar) * w};
}

double get_voltage(const VoltagePoint& p)
{
    return p.v_kv;
}

double lerp_voltage(const double& a, const double& b, double w)
{
    return a + (b - a) * w;
}

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t'))
            f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r'))
            f.remove_suffix(1);
        out.push_back(f);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

struct CsvTable {
    std::vector<std::vector<std::string_view>> rows;
    std::vector<std::size_t> lines;
};

// Splits into rows after checking the header matches exactly. Blank lines and
// lines starting with '#' are skipped.
CsvTable read_csv(std::string_view text, const std::string& header, const std::string& source)
{
    CsvTable t;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool header_seen = false;
    auto fail = [&](const std::string& msg) -> void {
        Diagnostics d{{Severity::Error, "csv", msg, {0, 0, line_no, 1}, source}};
        throw ParseError(std::move(d));
    };
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!header_seen && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF")
            line.remove_prefix(3);
        if (line.empty() || line.front() == '#')
            continue;
        if (!header_seen) {
            if (line != header)
                fail("expected header '" + header + "'");
            header_seen = true;
            continue;
        }
        t.rows.push_back(split_csv(line));
        t.lines.push_back(line_no);
    }
    if (!header_seen) {
        line_no = 1;
        fail("missing header '" + header + "'");
    }
    return t;
}

[[noreturn]] void field_error(const std::string& source, std::size_t line, const std::string& msg)
{
    Diagnostics d{{Severity::Error, "csv", msg, {0, 0, line, 1}, source}};
    throw ParseError(std::move(d));
}

double field_number(std::string_view f, const std::string& source, std::size_t line, const char* name)
{
    if (!f.empty() && f.front() == '+')
        f.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
        field_error(source, line, std::string("bad number in column '") + name + "': '" + std::string(f) + "'");
    return v;
}

int field_int(std::string_view f, const std::string& source, std::size_t line, const char* name)
{
    if (!f.empty() && f.front() == '+')
        f.remove_prefix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc() || ptr != f.data() + f.size())
        field_error(source, line, std::string("bad integer in column '") + name + "': '" + std::string(f) + "'");
    return v;
}

template <class Pts>
void check_increasing(const Pts& pts, const std::vector<std::size_t>& lines, const std::string& source)
{
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (!(pts[i].time_s > pts[i - 1].time_s))
            field_error(source, lines[i], "times must be strictly increasing");
    if (pts.empty())
        field_error(source, 1, "profile has no data rows");
}

}  // namespace

LoadPower interpolate_profile(const LoadProfile& profile, double t_s)
{
    return interpolate<ProfilePoint, LoadPower>(profile.points, t_s, &get_load, &lerp_load);
}

double interpolate_profile(const VoltageProfile& profile, double t_s)
{
    return interpolate<VoltagePoint, double>(profile.points, t_s, &get_voltage, &lerp_voltage);
}

LoadProfile read_load_profile(const std::filesystem::path& path)
{
    const std::string text = read_text_file(path);
    const std::string src = path.string();
    const CsvTable t = read_csv(text, "time_s,p_mw,q_mvar", src);
    LoadProfile p;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        if (r.size() != 3)
            field_error(src, t.lines[i], "expected 3 columns, found " + std::to_string(r.size()));
        p.points.push_back({field_number(r[0], src, t.lines[i], "time_s"), field_number(r[1], src, t.lines[i], "p_mw"),
                            field_number(r[2], src, t.lines[i], "q_mvar")});
        if (p.points.back().p_mw < 0.0)
            field_error(src, t.lines[i], "active power must be non-negative");
    }
    check_increasing(p.points, t.lines, src);
    return p;
}

VoltageProfile read_voltage_profile(const std::filesystem::path& path)
{
    const std::string text = read_text_file(path);
    const std::string src = path.string();
    const CsvTable t = read_csv(text, "time_s,v1_kv", src);
    VoltageProfile p;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        if (r.size() != 2)
            field_error(src, t.lines[i], "expected 2 columns, found " + std::to_string(r.size()));
        p.points.push_back({field_number(r[0], src, t.lines[i], "time_s"), field_number(r[1], src, t.lines[i], "v1_kv")});
    }
    check_increasing(p.points, t.lines, src);
    return p;
}

namespace {

ZipFractions read_zip(ConfigReader& rd, const ConfigSection* s, const char* key, ZipFractions fallback)
{
    auto v = rd.numbers(s, key, {fallback.z, fallback.i, fallback.p});
    if (v.size() != 3) {
        rd.error(s, key, std::string("'") + key + "' expects three fractions 'z i p'");
        return fallback;
    }
    return {v[0], v[1], v[2]};
}

template <class F>
void check(ConfigReader& rd, const ConfigSection* s, const char* key, F&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        rd.error(s, key, e.what());
    }
}

ScenarioConfig read_scenario_config(const ConfigDocument& doc, Diagnostics& diags)
{
    ConfigReader rd(doc, diags);
    ScenarioConfig c;
    c.source = doc.source();

    const auto* sc = doc.section("scenario");
    if (!sc)
        rd.error_at(0, "missing [scenario] section");
    c.name = rd.text(sc, "name", "");
    c.duration_s = rd.number(sc, "duration_s", c.duration_s);
    c.step_s = rd.number(sc, "step_s", c.step_s);
    c.noise.seed = rd.unsigned_integer(sc, "seed", c.noise.seed);
    c.v_ref_kv = rd.number(sc, "v_ref_kv", c.v_ref_kv);
    const std::string kind = rd.text(sc, "controller", "fis");
    if (kind == "fis")
        c.controller = ControllerKind::Fis;
    else if (kind == "baseline")
        c.controller = ControllerKind::Baseline;
    else if (kind == "none")
        c.controller = ControllerKind::None;
    else
        rd.error(sc, "controller", "controller must be one of fis, baseline, none (got '" + kind + "')");

    const auto* files = doc.section("files");
    if (auto p = rd.path(files, "fis"))
        c.fis_path = *p;
    if (auto p = rd.path(files, "rules"))
        c.rules_path = *p;
    if (auto p = rd.path(files, "load_profile"))
        c.load_profile_path = *p;
    else
        rd.error_at(files ? files->line : 0, "[files] needs 'load_profile'");
    c.primary_profile_path = rd.path(files, "primary_profile");

    const auto* pl = doc.section("plant");
    auto& t = c.transformer;
    t.s_rated_mva = rd.number(pl, "s_rated_mva", t.s_rated_mva);
    t.v1_nom_kv = rd.number(pl, "v1_nom_kv", t.v1_nom_kv);
    t.v2_nom_kv = rd.number(pl, "v2_nom_kv", t.v2_nom_kv);
    t.tap_min = static_cast<int>(rd.integer(pl, "tap_min", t.tap_min));
    t.tap_max = static_cast<int>(rd.integer(pl, "tap_max", t.tap_max));
    t.tap_step = rd.number(pl, "tap_step", t.tap_step);
    t.r_pu = rd.number(pl, "r_pu", t.r_pu);
    t.x_pu = rd.number(pl, "x_pu", t.x_pu);
    t.hv_metering_includes_losses = rd.flag(pl, "hv_metering_includes_losses", t.hv_metering_includes_losses);
    c.initial_tap = static_cast<int>(rd.integer(pl, "initial_tap", c.initial_tap));
    c.v1_kv = rd.number(pl, "v1_kv", c.v1_kv);
    check(rd, pl, "tap_min", [&] { validate(t); });
    if (c.initial_tap < t.tap_min || c.initial_tap > t.tap_max)
        rd.error(pl, "initial_tap", "initial_tap outside the tap range");
    if (!(c.v1_kv > 0.5 * t.v1_nom_kv && c.v1_kv < 1.5 * t.v1_nom_kv))
        rd.error(pl, "v1_kv", "v1_kv must lie within (0.5, 1.5) x v1_nom_kv");

    const auto* cp = doc.section("capacitor");
    c.capacitor.q_rated_mvar = rd.number(cp, "q_rated_mvar", c.capacitor.q_rated_mvar);
    c.capacitor.v_rated_kv = rd.number(cp, "v_rated_kv", c.capacitor.v_rated_kv);
    c.initial_cap_connected = rd.flag(cp, "initially_connected", c.initial_cap_connected);
    check(rd, cp, "q_rated_mvar", [&] { validate(c.capacitor); });

    const auto* ld = doc.section("load");
    c.load_v0_kv = rd.number(ld, "v0_kv", c.load_v0_kv);
    c.zip_active = read_zip(rd, ld, "zip_active", c.zip_active);
    c.zip_reactive = read_zip(rd, ld, "zip_reactive", c.zip_reactive);
    check(rd, ld, "zip_active", [&] {
        ZipLoad probe;
        probe.v0_kv = c.load_v0_kv;
        probe.active = c.zip_active;
        probe.reactive = c.zip_reactive;
        validate(probe);
    });

    const auto* sd = doc.section("scada");
    auto& q = c.quantization;
    q.v_step_v = rd.number(sd, "v_step_v", q.v_step_v);
    q.p_step_kw = rd.number(sd, "p_step_kw", q.p_step_kw);
    q.q_step_kvar = rd.number(sd, "q_step_kvar", q.q_step_kvar);
    q.tap_step = static_cast<int>(rd.integer(sd, "tap_step", q.tap_step));
    q.refresh_s = rd.number(sd, "refresh_s", q.refresh_s);
    check(rd, sd, "v_step_v", [&] { validate(q); });

    const auto* nz = doc.section("noise");
    c.noise.enabled = rd.flag(nz, "enabled", c.noise.enabled);
    c.noise.sigma_v_v = rd.number(nz, "sigma_v_v", c.noise.sigma_v_v);
    c.noise.sigma_q_kvar = rd.number(nz, "sigma_q_kvar", c.noise.sigma_q_kvar);
    check(rd, nz, "sigma_v_v", [&] { validate(c.noise); });

    const auto* lm = doc.section("limits");
    auto& l = c.limits;
    l.max_tap_ops_per_day = static_cast<int>(rd.integer(lm, "max_tap_ops_per_day", l.max_tap_ops_per_day));
    l.max_cap_ops_per_day = static_cast<int>(rd.integer(lm, "max_cap_ops_per_day", l.max_cap_ops_per_day));
    l.tap_dwell_s = rd.number(lm, "tap_dwell_s", l.tap_dwell_s);
    l.cap_dwell_s = rd.number(lm, "cap_dwell_s", l.cap_dwell_s);
    l.tap_deadzone = rd.number(lm, "tap_deadzone", l.tap_deadzone);
    l.cap_threshold = rd.number(lm, "cap_threshold", l.cap_threshold);
    l.persistence = static_cast<int>(rd.integer(lm, "persistence", l.persistence));
    check(rd, lm, "persistence", [&] { validate(l); });

    const auto* sch = doc.section("schedule");
    if (sch && sch->find("on_peak")) {
        const std::string text = rd.text(sch, "on_peak", "");
        check(rd, sch, "on_peak", [&] { c.schedule = parse_peak_schedule(text); });
    }

    const auto* bl = doc.section("baseline");
    auto& w = c.baseline;
    w.w_v = rd.number(bl, "w_v", w.w_v);
    w.w_q = rd.number(bl, "w_q", w.w_q);
    w.w_s = rd.number(bl, "w_s", w.w_s);
    w.v_target_kv = rd.number(bl, "v_target_kv", c.v_ref_kv);
    w.pf_min = rd.number(bl, "pf_min", w.pf_min);
    w.lock_capacitor_on = rd.flag(bl, "lock_capacitor_on", w.lock_capacitor_on);
    if (w.w_v < 0 || w.w_q < 0 || w.w_s < 0)
        rd.error(bl, "w_v", "baseline weights must be non-negative");

    const auto* out = doc.section("output");
    c.log_path = rd.path(out, "log");
    c.summary_path = rd.path(out, "summary");

    // Cross-field invariants.
    if (!(c.step_s > 0.0))
        rd.error(sc, "step_s", "step_s must be positive");
    else if (std::abs(c.step_s - q.refresh_s) > 1e-9)
        rd.error(sc, "step_s", "step_s (" + std::to_string(c.step_s) + ") must equal the SCADA refresh period (" +
                                   std::to_string(q.refresh_s) + ")");
    if (!(c.duration_s > 0.0))
        rd.error(sc, "duration_s", "duration_s must be positive");
    else if (c.step_s > 0.0 && !sample_clock(c.step_s, c.duration_s))
        rd.error(sc, "duration_s", "duration_s must be a whole number of steps");

    if (c.controller == ControllerKind::Fis) {
        if (c.fis_path.empty())
            rd.error_at(files ? files->line : 0, "controller 'fis' needs [files] fis");
        if (c.rules_path.empty())
            rd.error_at(files ? files->line : 0, "controller 'fis' needs [files] rules");
    }

    for (const auto& s : doc.sections()) {
        static const char* known[] = {"scenario", "files", "plant", "capacitor", "load", "scada",
                                      "noise", "limits", "schedule", "baseline", "output"};
        if (std::find(std::begin(known), std::end(known), s.header()) == std::end(known))
            rd.error_at(s.line, "unknown section [" + s.header() + "]");
    }
    return c;
}

void require_file(const std::filesystem::path& p, const char* what, const ScenarioConfig& c, Diagnostics& diags)
{
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec))
        diags.push_back({Severity::Error, "missing-file", std::string(what) + " '" + p.string() + "' does not exist",
                         {}, c.source.string()});
}

void append(Diagnostics& to, const Diagnostics& from)
{
    to.insert(to.end(), from.begin(), from.end());
}

}  // namespace

std::optional<Scenario> load_scenario(const std::filesystem::path& path, Diagnostics& diags)
{
    const std::size_t before = count_errors(diags);
    std::optional<ConfigDocument> doc;
    try {
        doc = ConfigDocument::load(path);
    } catch (const ParseError& e) {
        append(diags, e.diagnostics());
        return std::nullopt;
    } catch (const IoError& e) {
        diags.push_back({Severity::Error, "io", e.what(), {}, path.string()});
        return std::nullopt;
    }

    Scenario s;
    s.config = read_scenario_config(*doc, diags);
    append(diags, doc->unused_entries());
    const ScenarioConfig& c = s.config;

    if (!c.load_profile_path.empty()) {
        require_file(c.load_profile_path, "load profile", c, diags);
        if (std::filesystem::is_regular_file(c.load_profile_path)) {
            try {
                s.load = read_load_profile(c.load_profile_path);
            } catch (const ParseError& e) {
                append(diags, e.diagnostics());
            } catch (const IoError& e) {
                diags.push_back({Severity::Error, "io", e.what(), {}, c.load_profile_path.string()});
            }
        }
    }
    if (c.primary_profile_path) {
        require_file(*c.primary_profile_path, "primary voltage profile", c, diags);
        if (std::filesystem::is_regular_file(*c.primary_profile_path)) {
            try {
                s.primary = read_voltage_profile(*c.primary_profile_path);
                for (const auto& p : s.primary->points)
                    if (!(p.v_kv > 0.5 * c.transformer.v1_nom_kv && p.v_kv < 1.5 * c.transformer.v1_nom_kv)) {
                        diags.push_back({Severity::Error, "config",
                                         "primary voltage profile leaves (0.5, 1.5) x v1_nom_kv", {},
                                         c.primary_profile_path->string()});
                        break;
                    }
            } catch (const ParseError& e) {
                append(diags, e.diagnostics());
            } catch (const IoError& e) {
                diags.push_back({Severity::Error, "io", e.what(), {}, c.primary_profile_path->string()});
            }
        }
    }

    if (!c.fis_path.empty() || !c.rules_path.empty()) {
        if (!c.fis_path.empty())
            require_file(c.fis_path, "fuzzy system", c, diags);
        if (!c.rules_path.empty())
            require_file(c.rules_path, "rule file", c, diags);
        std::error_code ec;
        if (std::filesystem::is_regular_file(c.fis_path, ec) && std::filesystem::is_regular_file(c.rules_path, ec)) {
            try {
                FisDefinition fis = load_fis(c.fis_path, c.rules_path, diags);
                s.fis = bind_peak_schedule(std::move(fis), c.schedule);
            } catch (const IoError& e) {
                diags.push_back({Severity::Error, "io", e.what(), {}, c.source.string()});
            }
        }
    }

    if (count_errors(diags) > before)
        return std::nullopt;
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    Diagnostics diags;
    auto s = load_scenario(path, diags);
    if (!s) {
        Diagnostics errors;
        for (auto& d : diags)
            if (d.severity == Severity::Error)
                errors.push_back(std::move(d));
        if (errors.empty())
            errors.push_back({Severity::Error, "config", "scenario failed to load", {}, path.string()});
        throw ParseError(std::move(errors));
    }
    return std::move(*s);
}

Diagnostics validate_config(const std::filesystem::path& path)
{
    Diagnostics diags;
    (void)load_scenario(path, diags);
    return diags;
}

RunResult run_scenario(const Scenario& scenario)
{
    const ScenarioConfig& c = scenario.config;
    const auto steps = static_cast<long>(std::llround(c.duration_s / c.step_s));

    ZipLoad load;
    load.v0_kv = c.load_v0_kv;
    load.active = c.zip_active;
    load.reactive = c.zip_reactive;

    DeviceState dev{c.initial_tap, c.initial_cap_connected};
    ControllerState ctl;
    NoiseSource rng(c.noise.seed);

    RunResult result;
    result.log.reserve(static_cast<std::size_t>(steps) + 1);

    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * c.step_s;
        const LoadPower lp = interpolate_profile(scenario.load, t);
        load.p0_mw = lp.p_mw;
        load.q0_mvar = lp.q_mvar;
        const double v1 = scenario.primary ? interpolate_profile(*scenario.primary, t) : c.v1_kv;

        OperatingPoint op;
        try {
            op = solve_operating_point(c.transformer, c.capacitor, dev.cap_connected, load, v1, dev.tap);
        } catch (const Error& e) {
            throw SimulationError("plant solve failed at t=" + std::to_string(t) + " s: " + e.what(), t);
        }
        const Measurement m = quantize(c.quantization, op, t, c.noise, &rng);

        ControlAction action;
        switch (c.controller) {
        case ControllerKind::Fis: {
            const double hour = std::fmod(t, 86400.0) / 3600.0;
            action = enforce_limits(fis_decide(scenario.fis, m, hour, c.limits), ctl, c.limits, t);
            break;
        }
        case ControllerKind::Baseline: {
            const PlantInputs plant{c.transformer, c.capacitor, load, v1};
            try {
                action = enforce_limits(baseline_decide(plant, dev, c.baseline), ctl, c.limits, t);
            } catch (const Error& e) {
                throw SimulationError("baseline failed at t=" + std::to_string(t) + " s: " + e.what(), t);
            }
            break;
        }
        case ControllerKind::None:
            break;
        }

        RunRecord rec;
        rec.time_s = t;
        rec.v1_kv = v1;
        rec.v2_true_kv = op.v2_kv;
        rec.v2_meas_kv = m.v2_kv;
        rec.p_mw = m.p_mw;
        rec.q_hv_mvar = m.q_hv_mvar;
        rec.pf = m.pf;
        rec.leading = m.q_hv_mvar < 0.0;
        rec.tap = dev.tap;
        rec.cap_connected = dev.cap_connected;
        rec.action_tap = action.tap_delta;
        rec.action_cap = action.cap;
        rec.suppressed_by = action.suppression();
        result.log.push_back(std::move(rec));

        dev = apply_action(dev, action.tap_delta, action.cap, c.transformer).state;
    }

    result.summary = summarize(to_series(result.log), c.v_ref_kv);
    return result;
}

const char* const kRunLogHeader =
    "time_s,v1_kv,v2_true_kv,v2_meas_kv,p_mw,q_hv_mvar,pf,leading,tap,cap,action_tap,action_cap,suppressed_by";

namespace {

void append_fixed(std::string& out, double v, int decimals)
{
    char buf[64];
    if (v == 0.0)
        v = 0.0;  // print -0 as 0
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    out += buf;
}

}  // namespace

void write_run_log(std::ostream& out, const RunLog& log)
{
    std::string line;
    out << kRunLogHeader << '\n';
    for (const auto& r : log) {
        line.clear();
        const bool whole = r.time_s == std::floor(r.time_s);
        append_fixed(line, r.time_s, whole ? 0 : 3);
        line += ',';
        append_fixed(line, r.v1_kv, 4);
        line += ',';
        append_fixed(line, r.v2_true_kv, 4);
        line += ',';
        append_fixed(line, r.v2_meas_kv, 4);
        line += ',';
        append_fixed(line, r.p_mw, 3);
        line += ',';
        append_fixed(line, r.q_hv_mvar, 3);
        line += ',';
        append_fixed(line, r.pf, 6);
        line += r.leading ? ",1," : ",0,";
        line += std::to_string(r.tap);
        line += r.cap_connected ? ",1," : ",0,";
        line += std::to_string(r.action_tap);
        line += ',';
        line += to_string(r.action_cap);
        line += ',';
        line += r.suppressed_by;
        line += '\n';
        out << line;
    }
}

void write_run_log(const std::filesystem::path& path, const RunLog& log)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    write_run_log(out, log);
    if (!out)
        throw IoError("error writing '" + path.string() + "'");
}

RunLog parse_run_log(std::string_view text, const std::string& source)
{
    const CsvTable t = read_csv(text, kRunLogHeader, source);
    RunLog log;
    log.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& f = t.rows[i];
        const std::size_t ln = t.lines[i];
        if (f.size() != 13)
            field_error(source, ln, "expected 13 columns, found " + std::to_string(f.size()));
        RunRecord r;
        r.time_s = field_number(f[0], source, ln, "time_s");
        r.v1_kv = field_number(f[1], source, ln, "v1_kv");
        r.v2_true_kv = field_number(f[2], source, ln, "v2_true_kv");
        r.v2_meas_kv = field_number(f[3], source, ln, "v2_meas_kv");
        r.p_mw = field_number(f[4], source, ln, "p_mw");
        r.q_hv_mvar = field_number(f[5], source, ln, "q_hv_mvar");
        r.pf = field_number(f[6], source, ln, "pf");
        r.leading = field_int(f[7], source, ln, "leading") != 0;
        r.tap = field_int(f[8], source, ln, "tap");
        r.cap_connected = field_int(f[9], source, ln, "cap") != 0;
        r.action_tap = field_int(f[10], source, ln, "action_tap");
        if (f[11] == "hold")
            r.action_cap = CapCommand::Hold;
        else if (f[11] == "connect")
            r.action_cap = CapCommand::Connect;
        else if (f[11] == "disconnect")
            r.action_cap = CapCommand::Disconnect;
        else
            field_error(source, ln, "bad action_cap '" + std::string(f[11]) + "'");
        r.suppressed_by = std::string(f[12]);
        if (!(r.pf > 0.0 && r.pf <= 1.0))
            field_error(source, ln, "power factor must lie in (0, 1]");
        if (!log.empty() && !(r.time_s > log.back().time_s))
            field_error(source, ln, "time_s must be strictly increasing");
        log.push_back(std::move(r));
    }
    return log;
}

RunLog read_run_log(const std::filesystem::path& path)
{
    return parse_run_log(read_text_file(path), path.string());
}

Series to_series(const RunLog& log)
{
    Series s;
    s.reserve(log.size());
    for (const auto& r : log)
        s.push_back({r.time_s, r.v2_meas_kv, r.pf, r.leading, r.tap, r.cap_connected});
    return s;
}

ComparisonReport evaluate(const std::filesystem::path& ref_log, const std::filesystem::path& test_log,
                          std::optional<DayInterval> interval, double ref_kv)
{
    const Series a = to_series(read_run_log(ref_log));
    const Series b = to_series(read_run_log(test_log));
    return compare(a, b, interval, ref_kv);
}

}  // namespace vvc
