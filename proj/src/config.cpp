#include "vvc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "vvc/rules.hpp"

namespace vvc {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string_view strip_comment(std::string_view line)
{
    for (std::size_t i = 0; i < line.size(); ++i) {
        if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t'))
            return line.substr(0, i);
    }
    return line;
}

std::optional<double> parse_double(std::string_view s)
{
    s = trim(s);
    if (s.empty())
        return std::nullopt;
    if (s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

}  // namespace

std::optional<std::vector<double>> parse_number_list(std::string_view text)
{
    std::vector<double> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ','))
            ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',')
            ++j;
        if (j > i) {
            auto v = parse_double(text.substr(i, j - i));
            if (!v)
                return std::nullopt;
            out.push_back(*v);
        }
        i = j;
    }
    return out;
}

const ConfigEntry* ConfigSection::find(std::string_view key) const
{
    for (const auto& e : entries)
        if (e.key == key)
            return &e;
    return nullptr;
}

ConfigDocument ConfigDocument::parse(std::string_view text, std::string source)
{
    ConfigDocument doc;
    doc.source_ = std::move(source);
    Diagnostics diags;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        const std::string_view raw = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;

        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) {
            if (end == text.size())
                break;
            continue;
        }
        auto bad = [&](std::string msg) {
            diags.push_back({Severity::Error, "syntax", std::move(msg), {0, 0, line_no, 1}, doc.source_});
        };

        if (line.front() == '[') {
            if (line.back() != ']') {
                bad("section header is missing ']'");
                continue;
            }
            const std::string_view header = trim(line.substr(1, line.size() - 2));
            if (header.empty()) {
                bad("empty section header");
                continue;
            }
            ConfigSection sec;
            const auto sp = header.find_first_of(" \t");
            sec.type = std::string(header.substr(0, sp));
            sec.label = sp == std::string_view::npos ? std::string() : std::string(trim(header.substr(sp)));
            sec.line = line_no;
            doc.sections_.push_back(std::move(sec));
        } else {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                bad("expected 'key = value'");
                continue;
            }
            const std::string_view key = trim(line.substr(0, eq));
            if (key.empty()) {
                bad("missing key before '='");
                continue;
            }
            if (doc.sections_.empty()) {
                bad("entry '" + std::string(key) + "' appears before any [section]");
                continue;
            }
            auto& sec = doc.sections_.back();
            if (sec.find(key)) {
                bad("duplicate key '" + std::string(key) + "' in [" + sec.header() + "]");
                continue;
            }
            sec.entries.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
        }
        if (end == text.size())
            break;
    }

    if (!diags.empty())
        throw ParseError(std::move(diags));
    return doc;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("error reading '" + path.string() + "'");
    return ss.str();
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path)
{
    ConfigDocument doc = parse(read_text_file(path), path.string());
    doc.base_dir_ = path.parent_path();
    return doc;
}

const ConfigSection* ConfigDocument::section(std::string_view header) const
{
    for (const auto& s : sections_)
        if (s.header() == header)
            return &s;
    return nullptr;
}

std::vector<const ConfigSection*> ConfigDocument::sections_of_type(std::string_view type) const
{
    std::vector<const ConfigSection*> out;
    for (const auto& s : sections_)
        if (s.type == type)
            out.push_back(&s);
    return out;
}

Diagnostics ConfigDocument::unused_entries() const
{
    Diagnostics out;
    for (const auto& s : sections_)
        for (const auto& e : s.entries)
            if (!e.used)
                out.push_back({Severity::Warning, "unknown-key",
                               "unknown key '" + e.key + "' in [" + s.header() + "]", {0, 0, e.line, 1}, source_});
    return out;
}

const ConfigEntry* ConfigReader::entry(const ConfigSection* s, std::string_view key)
{
    if (!s)
        return nullptr;
    const ConfigEntry* e = s->find(key);
    if (e)
        e->used = true;
    return e;
}

void ConfigReader::error(const ConfigSection* s, std::string_view key, std::string message)
{
    std::size_t line = 0;
    if (s) {
        line = s->line;
        if (const auto* e = s->find(key))
            line = e->line;
    }
    error_at(line, std::move(message));
}

void ConfigReader::error_at(std::size_t line, std::string message)
{
    Span span;
    if (line > 0)
        span = {0, 0, line, 1};
    diags_.push_back({Severity::Error, "config", std::move(message), span, doc_.source()});
}

double ConfigReader::number(const ConfigSection* s, std::string_view key, double fallback)
{
    const auto* e = entry(s, key);
    if (!e)
        return fallback;
    auto v = parse_double(e->value);
    if (!v) {
        error_at(e->line, "'" + e->key + "' expects a number, got '" + e->value + "'");
        return fallback;
    }
    return *v;
}

std::int64_t ConfigReader::integer(const ConfigSection* s, std::string_view key, std::int64_t fallback)
{
    const auto* e = entry(s, key);
    if (!e)
        return fallback;
    std::string_view t = trim(e->value);
    if (!t.empty() && t.front() == '+')
        t.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        error_at(e->line, "'" + e->key + "' expects an integer, got '" + e->value + "'");
        return fallback;
    }
    return v;
}

std::uint64_t ConfigReader::unsigned_integer(const ConfigSection* s, std::string_view key, std::uint64_t fallback)
{
    const auto* e = entry(s, key);
    if (!e)
        return fallback;
    std::string_view t = trim(e->value);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        error_at(e->line, "'" + e->key + "' expects a non-negative integer, got '" + e->value + "'");
        return fallback;
    }
    return v;
}

bool ConfigReader::flag(const ConfigSection* s, std::string_view key, bool fallback)
{
    const auto* e = entry(s, key);
    if (!e)
        return fallback;
    std::string v = e->value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "on" || v == "yes" || v == "1")
        return true;
    if (v == "false" || v == "off" || v == "no" || v == "0")
        return false;
    error_at(e->line, "'" + e->key + "' expects on/off, got '" + e->value + "'");
    return fallback;
}

std::string ConfigReader::text(const ConfigSection* s, std::string_view key, std::string fallback)
{
    const auto* e = entry(s, key);
    return e ? e->value : fallback;
}

std::vector<double> ConfigReader::numbers(const ConfigSection* s, std::string_view key, std::vector<double> fallback)
{
    const auto* e = entry(s, key);
    if (!e)
        return fallback;
    auto v = parse_number_list(e->value);
    if (!v) {
        error_at(e->line, "'" + e->key + "' expects a list of numbers, got '" + e->value + "'");
        return fallback;
    }
    return *v;
}

std::optional<std::filesystem::path> ConfigReader::path(const ConfigSection* s, std::string_view key)
{
    const auto* e = entry(s, key);
    if (!e || e->value.empty())
        return std::nullopt;
    std::filesystem::path p(e->value);
    if (p.is_relative())
        p = doc_.base_dir() / p;
    return p.lexically_normal();
}

namespace {

LinguisticVariable read_variable(const ConfigSection& sec, VariableKind kind, ConfigReader& rd)
{
    LinguisticVariable var;
    var.name = sec.label;
    var.kind = kind;
    if (var.name.empty())
        rd.error_at(sec.line, "[" + sec.type + "] needs a variable name, e.g. [" + sec.type + " Voltage]");

    const auto u = rd.numbers(&sec, "universe", {});
    if (u.size() == 2) {
        var.universe = {u[0], u[1]};
    } else {
        rd.error(&sec, "universe", "[" + sec.header() + "] needs 'universe = MIN MAX'");
    }
    var.unit = rd.text(&sec, "unit", "");
    if (const auto* e = sec.find("aliases")) {
        e->used = true;
        std::istringstream ss(e->value);
        std::string a;
        while (ss >> a) {
            if (a.back() == ',')
                a.pop_back();
            if (!a.empty())
                var.aliases.push_back(a);
        }
    }

    for (const auto& e : sec.entries) {
        if (e.key == "universe" || e.key == "unit" || e.key == "aliases")
            continue;
        e.used = true;
        FuzzySet set;
        set.term = e.key;
        std::string_view rest = e.value;
        bool ok = true;
        while (ok) {
            const auto bar = rest.find('|');
            auto nums = parse_number_list(rest.substr(0, bar));
            if (!nums || nums->size() != 4) {
                ok = false;
                break;
            }
            set.pieces.push_back({(*nums)[0], (*nums)[1], (*nums)[2], (*nums)[3]});
            if (bar == std::string_view::npos)
                break;
            rest.remove_prefix(bar + 1);
        }
        if (!ok) {
            rd.error_at(e.line, "term '" + e.key + "' expects four breakpoints 'a b c d' (pieces joined by '|')");
            continue;
        }
        var.sets.push_back(std::move(set));
    }
    return var;
}

}  // namespace

FisDefinition read_fis(const ConfigDocument& doc, Diagnostics& diags)
{
    ConfigReader rd(doc, diags);
    FisDefinition fis;
    const ConfigSection* sys = doc.section("system");
    fis.name = rd.text(sys, "name", "");
    const auto res = rd.integer(sys, "resolution", 1001);
    if (res < 101)
        rd.error(sys, "resolution", "resolution must be at least 101");
    fis.resolution = static_cast<std::size_t>(std::max<std::int64_t>(res, 101));

    for (const auto* sec : doc.sections_of_type("input"))
        fis.inputs.push_back(read_variable(*sec, VariableKind::Input, rd));
    for (const auto* sec : doc.sections_of_type("output"))
        fis.outputs.push_back(read_variable(*sec, VariableKind::Output, rd));

    for (const auto& s : doc.sections())
        if (s.type != "system" && s.type != "input" && s.type != "output")
            rd.error_at(s.line, "unknown section [" + s.header() + "]");
    return fis;
}

FisDefinition load_fis(const std::filesystem::path& fis_path, const std::filesystem::path& rules_path,
                       Diagnostics& diags)
{
    FisDefinition fis;
    try {
        const ConfigDocument doc = ConfigDocument::load(fis_path);
        fis = read_fis(doc, diags);
        auto unused = doc.unused_entries();
        diags.insert(diags.end(), unused.begin(), unused.end());
    } catch (const ParseError& e) {
        diags.insert(diags.end(), e.diagnostics().begin(), e.diagnostics().end());
    }

    const std::string text = read_text_file(rules_path);
    ParseResult parsed = parse_ruleset(text, rules_path.string());
    diags.insert(diags.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
    fis.rules = std::move(parsed.rules);

    for (auto& d : validate_fis(fis)) {
        // Rule-level findings point into the rule file, variable-level ones into the system file.
        d.source = d.span.valid() ? rules_path.string() : fis_path.string();
        diags.push_back(std::move(d));
    }
    for (auto& d : lint(fis.rules, fis)) {
        // Name resolution is already covered by validate_fis; keep only lint-specific findings.
        if (d.code == "duplicate-rule" || d.code == "contradictory-rule") {
            d.source = rules_path.string();
            diags.push_back(std::move(d));
        }
    }
    return fis;
}

FisDefinition load_fis(const std::filesystem::path& fis_path, const std::filesystem::path& rules_path)
{
    Diagnostics diags;
    FisDefinition fis = load_fis(fis_path, rules_path, diags);
    if (has_errors(diags)) {
        Diagnostics errors;
        for (auto& d : diags)
            if (d.severity == Severity::Error)
                errors.push_back(std::move(d));
        throw ParseError(std::move(errors));
    }
    return fis;
}

}  // namespace vvc
