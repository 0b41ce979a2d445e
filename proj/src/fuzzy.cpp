#include "vvc/fuzzy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace vvc {

double membership(const Trapezoid& mf, double x)
{
    if (x < mf.a || x > mf.d)
        return 0.0;
    if (x >= mf.b && x <= mf.c)
        return 1.0;
    if (x < mf.b)
        return (x - mf.a) / (mf.b - mf.a);
    return (mf.d - x) / (mf.d - mf.c);
}

double FuzzySet::degree(double x) const
{
    double mu = 0.0;
    for (const auto& p : pieces)
        mu = std::max(mu, membership(p, x));
    return mu;
}

double FuzzySet::support_min() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces)
        m = std::min(m, p.a);
    return m;
}

double FuzzySet::support_max() const
{
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces)
        m = std::max(m, p.d);
    return m;
}

double Universe::clamp(double x) const
{
    if (std::isnan(x))
        return midpoint();
    return std::clamp(x, min, max);
}

double Universe::sample(std::size_t i, std::size_t n) const
{
    if (n < 2)
        return midpoint();
    if (i + 1 == n)
        return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(n - 1);
}

bool LinguisticVariable::answers_to(std::string_view n) const
{
    if (name == n)
        return true;
    return std::find(aliases.begin(), aliases.end(), n) != aliases.end();
}

namespace {

std::optional<double> numeric_term(std::string_view s)
{
    if (s.empty())
        return std::nullopt;
    std::string_view body = s;
    bool negative = false;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    if (body.empty() || !std::isdigit(static_cast<unsigned char>(body.front())))
        return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || ptr != body.data() + body.size())
        return std::nullopt;
    return negative ? -v : v;
}

}  // namespace

bool same_term(std::string_view lhs, std::string_view rhs)
{
    if (lhs == rhs)
        return true;
    auto l = numeric_term(lhs);
    auto r = numeric_term(rhs);
    return l && r && *l == *r;
}

const FuzzySet* LinguisticVariable::find_set(std::string_view term) const
{
    for (const auto& s : sets)
        if (s.term == term)
            return &s;
    for (const auto& s : sets)
        if (same_term(s.term, term))
            return &s;
    return nullptr;
}

namespace {

const LinguisticVariable* find_var(const std::vector<LinguisticVariable>& vars, std::string_view n)
{
    for (const auto& v : vars)
        if (v.name == n)
            return &v;
    for (const auto& v : vars)
        if (v.answers_to(n))
            return &v;
    return nullptr;
}

}  // namespace

const LinguisticVariable* FisDefinition::find_input(std::string_view n) const
{
    return find_var(inputs, n);
}

const LinguisticVariable* FisDefinition::find_output(std::string_view n) const
{
    return find_var(outputs, n);
}

std::vector<TermDegree> fuzzify(const LinguisticVariable& var, double x)
{
    const double xc = var.universe.clamp(x);
    std::vector<TermDegree> out;
    out.reserve(var.sets.size());
    for (const auto& s : var.sets)
        out.push_back({s.term, s.degree(xc)});
    return out;
}

void FuzzifiedInputs::set(const LinguisticVariable& var, std::vector<TermDegree> degrees)
{
    for (auto& e : entries_) {
        if (e.var == &var) {
            e.degrees = std::move(degrees);
            return;
        }
    }
    entries_.push_back({&var, std::move(degrees)});
}

double FuzzifiedInputs::degree(std::string_view variable, std::string_view term) const
{
    const Entry* entry = nullptr;
    for (const auto& e : entries_)
        if (e.var->name == variable)
            entry = &e;
    if (!entry)
        for (const auto& e : entries_)
            if (e.var->answers_to(variable))
                entry = &e;
    if (!entry)
        throw DefinitionError("unknown input variable '" + std::string(variable) + "'");
    for (const auto& td : entry->degrees)
        if (td.term == term)
            return td.degree;
    for (const auto& td : entry->degrees)
        if (same_term(td.term, term))
            return td.degree;
    throw DefinitionError("unknown term '" + std::string(term) + "' for variable '" + entry->var->name + "'");
}

FuzzifiedInputs fuzzify_all(const FisDefinition& fis, const CrispInputs& inputs)
{
    FuzzifiedInputs out;
    for (const auto& var : fis.inputs) {
        auto it = inputs.find(var.name);
        if (it == inputs.end()) {
            for (const auto& alias : var.aliases) {
                it = inputs.find(alias);
                if (it != inputs.end())
                    break;
            }
        }
        if (it == inputs.end())
            throw InputError("missing value for input '" + var.name + "'");
        out.set(var, fuzzify(var, it->second));
    }
    return out;
}

double rule_strength(const Rule& rule, const FuzzifiedInputs& degrees)
{
    double strength = 1.0;
    for (const auto& ant : rule.antecedents) {
        const double mu = degrees.degree(ant.variable, ant.term);
        strength = std::min(strength, ant.negated ? 1.0 - mu : mu);
    }
    return strength;
}

double AggregatedOutput::operator()(double x) const
{
    double mu = 0.0;
    for (const auto& p : parts)
        mu = std::max(mu, std::min(p.height, p.set.degree(x)));
    return mu;
}

std::vector<AggregatedOutput> aggregate(const FisDefinition& fis, std::span<const double> strengths)
{
    if (strengths.size() != fis.rules.size())
        throw InputError("aggregate: expected " + std::to_string(fis.rules.size()) + " rule strengths, got " +
                         std::to_string(strengths.size()));

    std::vector<AggregatedOutput> out;
    out.reserve(fis.outputs.size());
    for (const auto& var : fis.outputs)
        out.push_back({var.name, var.universe, {}});

    for (std::size_t r = 0; r < fis.rules.size(); ++r) {
        const double h = strengths[r];
        if (!(h > 0.0))
            continue;
        for (const auto& cons : fis.rules[r].consequents) {
            std::size_t k = 0;
            for (; k < fis.outputs.size(); ++k)
                if (fis.outputs[k].answers_to(cons.variable))
                    break;
            if (k == fis.outputs.size())
                throw DefinitionError("unknown output variable '" + cons.variable + "'");
            const FuzzySet* set = fis.outputs[k].find_set(cons.term);
            if (!set)
                throw DefinitionError("unknown term '" + cons.term + "' for output '" + fis.outputs[k].name + "'");

            // Identical consequents from several rules collapse to the strongest clip.
            auto& parts = out[k].parts;
            auto same = std::find_if(parts.begin(), parts.end(),
                                     [&](const ClippedSet& p) { return p.set.term == set->term; });
            if (same != parts.end())
                same->height = std::max(same->height, std::min(h, 1.0));
            else
                parts.push_back({*set, std::min(h, 1.0)});
        }
    }
    return out;
}

CentroidResult defuzzify_centroid(const AggregatedOutput& aggregated, std::size_t resolution)
{
    if (aggregated.parts.empty())
        return {aggregated.universe.midpoint(), true};
    return defuzzify_centroid(aggregated, aggregated.universe, resolution);
}

const OutputValue& InferenceResult::output(std::string_view name) const
{
    auto it = outputs.find(name);
    if (it == outputs.end())
        throw InputError("no output named '" + std::string(name) + "'");
    return it->second;
}

InferenceResult infer(const FisDefinition& fis, const CrispInputs& inputs)
{
    const FuzzifiedInputs degrees = fuzzify_all(fis, inputs);

    InferenceResult result;
    result.rule_strengths.reserve(fis.rules.size());
    for (const auto& rule : fis.rules)
        result.rule_strengths.push_back(rule_strength(rule, degrees));

    for (const auto& agg : aggregate(fis, result.rule_strengths)) {
        const auto c = defuzzify_centroid(agg, fis.resolution);
        result.outputs.emplace(agg.variable, OutputValue{c.value, c.no_rule_fired});
    }
    return result;
}

namespace {

std::string fmt_num(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_variable(const LinguisticVariable& var, std::size_t resolution, Diagnostics& diags)
{
    const std::string where = (var.kind == VariableKind::Input ? "input '" : "output '") + var.name + "'";
    auto add = [&](Severity sev, std::string code, std::string msg) {
        diags.push_back({sev, std::move(code), std::move(msg), {}, {}});
    };

    if (!(var.universe.min < var.universe.max))
        add(Severity::Error, "bad-universe", where + ": universe min must be below max");
    if (var.sets.empty())
        add(Severity::Error, "no-sets", where + " has no fuzzy sets");

    for (std::size_t i = 0; i < var.sets.size(); ++i) {
        const auto& s = var.sets[i];
        for (std::size_t j = 0; j < i; ++j)
            if (var.sets[j].term == s.term)
                add(Severity::Error, "duplicate-term", where + ": term '" + s.term + "' declared twice");
        if (s.pieces.empty()) {
            add(Severity::Warning, "empty-set", where + ": term '" + s.term + "' has no membership function");
            continue;
        }
        for (const auto& p : s.pieces) {
            if (!p.well_ordered())
                add(Severity::Error, "breakpoint-order",
                    where + ": term '" + s.term + "' breakpoints must satisfy a <= b <= c <= d (got " + fmt_num(p.a) +
                        ", " + fmt_num(p.b) + ", " + fmt_num(p.c) + ", " + fmt_num(p.d) + ")");
        }
        if (s.support_min() < var.universe.min || s.support_max() > var.universe.max)
            add(Severity::Error, "support-outside-universe",
                where + ": support of term '" + s.term + "' leaves the universe [" + fmt_num(var.universe.min) + ", " +
                    fmt_num(var.universe.max) + "]");
    }

    if (var.kind != VariableKind::Input || var.sets.empty() || !(var.universe.min < var.universe.max))
        return;

    // Coverage sweep: report each maximal run of samples where no set is active.
    // Lone samples are where adjacent sets meet at zero (or a set ends at the
    // universe edge); only runs of two or more count as gaps.
    const std::size_t n = std::max<std::size_t>(resolution, 2);
    std::optional<double> gap_start;
    double gap_end = 0.0;
    auto flush = [&]() {
        if (gap_start && gap_end > *gap_start)
            add(Severity::Warning, "coverage-gap",
                where + ": no term covers [" + fmt_num(*gap_start) + ", " + fmt_num(gap_end) + "]");
        gap_start.reset();
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double x = var.universe.sample(i, n);
        double mu = 0.0;
        for (const auto& s : var.sets)
            mu = std::max(mu, s.degree(x));
        if (mu > 0.0) {
            flush();
        } else {
            if (!gap_start)
                gap_start = x;
            gap_end = x;
        }
    }
    flush();
}

bool set_is_reachable(const FuzzySet& s, const Universe& u)
{
    if (s.pieces.empty())
        return false;
    for (const auto& p : s.pieces) {
        if (!p.well_ordered())
            continue;
        if (p.d < u.min || p.a > u.max)
            continue;
        return true;
    }
    return false;
}

}  // namespace

Diagnostics validate_fis(const FisDefinition& fis)
{
    Diagnostics diags;
    if (fis.inputs.empty())
        diags.push_back({Severity::Error, "no-inputs", "the system declares no input variables", {}, {}});
    if (fis.outputs.empty())
        diags.push_back({Severity::Error, "no-outputs", "the system declares no output variables", {}, {}});
    if (fis.resolution < 101)
        diags.push_back({Severity::Error, "bad-resolution", "defuzzification resolution must be at least 101", {}, {}});

    for (const auto& v : fis.inputs)
        check_variable(v, fis.resolution, diags);
    for (const auto& v : fis.outputs)
        check_variable(v, fis.resolution, diags);

    std::vector<bool> output_used(fis.outputs.size(), false);
    for (std::size_t r = 0; r < fis.rules.size(); ++r) {
        const Rule& rule = fis.rules[r];
        const std::string where = "rule " + std::to_string(r + 1);
        auto add = [&](Severity sev, std::string code, std::string msg, const Span& span) {
            diags.push_back({sev, std::move(code), where + ": " + msg, span.valid() ? span : rule.span, {}});
        };

        if (rule.antecedents.empty())
            add(Severity::Error, "empty-antecedent", "rule has no conditions", rule.span);
        if (rule.consequents.empty())
            add(Severity::Error, "empty-consequent", "rule has no consequents", rule.span);

        for (const auto& ant : rule.antecedents) {
            const LinguisticVariable* var = fis.find_input(ant.variable);
            if (!var) {
                add(Severity::Error, "unknown-variable", "unknown input variable '" + ant.variable + "'", ant.span);
                continue;
            }
            const FuzzySet* set = var->find_set(ant.term);
            if (!set) {
                add(Severity::Error, "unknown-term", "unknown term '" + ant.term + "' for variable '" + var->name + "'",
                    ant.span);
                continue;
            }
            if (!ant.negated && !set_is_reachable(*set, var->universe))
                add(Severity::Warning, "unreachable-rule",
                    "rule can never fire: term '" + set->term + "' has empty support inside the universe", ant.span);
        }
        for (const auto& cons : rule.consequents) {
            std::size_t k = 0;
            for (; k < fis.outputs.size(); ++k)
                if (fis.outputs[k].answers_to(cons.variable))
                    break;
            if (k == fis.outputs.size()) {
                add(Severity::Error, "unknown-variable", "unknown output variable '" + cons.variable + "'", cons.span);
                continue;
            }
            output_used[k] = true;
            if (!fis.outputs[k].find_set(cons.term))
                add(Severity::Error, "unknown-term",
                    "unknown term '" + cons.term + "' for output '" + fis.outputs[k].name + "'", cons.span);
        }
    }
    for (std::size_t k = 0; k < fis.outputs.size(); ++k)
        if (!output_used[k])
            diags.push_back({Severity::Warning, "unused-output",
                             "output '" + fis.outputs[k].name + "' is not driven by any rule", {}, {}});
    return diags;
}

bool has_errors(const Diagnostics& diags)
{
    return count_errors(diags) > 0;
}

std::size_t count_errors(const Diagnostics& diags)
{
    return static_cast<std::size_t>(
        std::count_if(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

std::string to_string(const Diagnostic& d)
{
    std::ostringstream os;
    if (!d.source.empty())
        os << d.source << ':';
    if (d.span.valid())
        os << d.span.line << ':' << d.span.column << ':';
    if (!d.source.empty() || d.span.valid())
        os << ' ';
    os << (d.severity == Severity::Error ? "error: " : "warning: ") << d.message;
    if (!d.code.empty())
        os << " [" << d.code << ']';
    return os.str();
}

}  // namespace vvc
