#pragma once

// Mamdani fuzzy inference: trapezoidal membership functions, min-AND rule
// evaluation with complement negation, min-clip implication, max aggregation
// and sampled centroid defuzzification.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vvc/diagnostics.hpp"

namespace vvc {

/// Trapezoid with breakpoints a <= b <= c <= d. Triangles have b == c,
/// left shoulders a == b, right shoulders c == d.
struct Trapezoid {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    bool well_ordered() const { return a <= b && b <= c && c <= d; }

    friend bool operator==(const Trapezoid&, const Trapezoid&) = default;
};

/// Degree of membership of x. Exactly 1 on [b, c], exactly 0 outside [a, d].
double membership(const Trapezoid& mf, double x);

/// A linguistic term. Most terms are a single trapezoid; a term may list
/// several pieces whose union (pointwise max) forms the set, which is how
/// time-of-day windows such as "10-14 h and 18-22 h" are expressed.
struct FuzzySet {
    std::string term;
    std::vector<Trapezoid> pieces;

    double degree(double x) const;
    double support_min() const;
    double support_max() const;
};

struct Universe {
    double min = 0.0;
    double max = 1.0;

    double clamp(double x) const;
    double midpoint() const { return 0.5 * (min + max); }
    double width() const { return max - min; }
    /// i-th of n uniformly spaced samples, both ends included.
    double sample(std::size_t i, std::size_t n) const;
};

enum class VariableKind { Input, Output };

struct LinguisticVariable {
    std::string name;
    VariableKind kind = VariableKind::Input;
    Universe universe;
    std::string unit;
    std::vector<FuzzySet> sets;
    std::vector<std::string> aliases;  // alternative names accepted in rules

    bool answers_to(std::string_view n) const;
    const FuzzySet* find_set(std::string_view term) const;
};

/// Term names compare literally, except that numeric terms compare by value
/// so that "+1" and "1" name the same set.
bool same_term(std::string_view lhs, std::string_view rhs);

struct Antecedent {
    std::string variable;
    std::string term;
    bool negated = false;
    Span span;
};

struct Consequent {
    std::string variable;
    std::string term;
    Span span;
};

struct Rule {
    std::vector<Antecedent> antecedents;  // joined by AND
    std::vector<Consequent> consequents;
    Span span;
    std::vector<std::string> comments;  // comment lines directly above the rule
};

struct FisDefinition {
    std::string name;
    std::vector<LinguisticVariable> inputs;
    std::vector<LinguisticVariable> outputs;
    std::vector<Rule> rules;
    std::size_t resolution = 1001;

    const LinguisticVariable* find_input(std::string_view n) const;
    const LinguisticVariable* find_output(std::string_view n) const;
};

/// Crisp input values keyed by input variable name.
using CrispInputs = std::map<std::string, double, std::less<>>;

struct TermDegree {
    std::string term;
    double degree = 0.0;
};

/// One entry per set of `var`, evaluated at x clamped to the universe.
std::vector<TermDegree> fuzzify(const LinguisticVariable& var, double x);

/// Degrees of every input term, keyed by canonical variable name.
class FuzzifiedInputs {
public:
    void set(const LinguisticVariable& var, std::vector<TermDegree> degrees);
    /// Throws DefinitionError if the variable or term is unknown.
    double degree(std::string_view variable, std::string_view term) const;

private:
    struct Entry {
        const LinguisticVariable* var;
        std::vector<TermDegree> degrees;
    };
    std::vector<Entry> entries_;
};

FuzzifiedInputs fuzzify_all(const FisDefinition& fis, const CrispInputs& inputs);

/// min over antecedents, a negated antecedent contributing 1 - mu.
double rule_strength(const Rule& rule, const FuzzifiedInputs& degrees);

struct ClippedSet {
    FuzzySet set;
    double height = 0.0;
};

/// Pointwise max of clipped consequent sets for one output variable.
struct AggregatedOutput {
    std::string variable;
    Universe universe;
    std::vector<ClippedSet> parts;

    double operator()(double x) const;
};

/// strengths.size() must equal fis.rules.size(). Rules with zero strength
/// contribute nothing. One entry per output variable, in declaration order.
std::vector<AggregatedOutput> aggregate(const FisDefinition& fis, std::span<const double> strengths);

struct CentroidResult {
    double value = 0.0;
    bool no_rule_fired = false;
};

/// Centroid over `resolution` uniform samples of the universe. An identically
/// zero aggregate yields the universe midpoint with no_rule_fired set.
template <class MembershipFn>
CentroidResult defuzzify_centroid(const MembershipFn& mu, const Universe& u, std::size_t resolution)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < resolution; ++i) {
        const double x = u.sample(i, resolution);
        const double m = mu(x);
        num += x * m;
        den += m;
    }
    if (den <= 0.0)
        return {u.midpoint(), true};
    return {u.clamp(num / den), false};
}

CentroidResult defuzzify_centroid(const AggregatedOutput& aggregated, std::size_t resolution);

struct OutputValue {
    double crisp = 0.0;
    bool no_rule_fired = false;
};

struct InferenceResult {
    std::map<std::string, OutputValue, std::less<>> outputs;
    std::vector<double> rule_strengths;  // fired-rule report, indexed like fis.rules

    /// Throws InputError if `name` is not an output of the system.
    const OutputValue& output(std::string_view name) const;
};

/// fuzzify -> rule_strength -> aggregate -> defuzzify_centroid.
/// Throws InputError when a declared input has no value.
InferenceResult infer(const FisDefinition& fis, const CrispInputs& inputs);

/// Structural checks; never throws.
Diagnostics validate_fis(const FisDefinition& fis);

}  // namespace vvc
