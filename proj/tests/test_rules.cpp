#include <algorithm>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vvc/rules.hpp"

using namespace vvc;

namespace {

const char* const kConnectRule =
    "If (Reactive_power is High) and (Tap is Normal) and (Shunt_Off is Disconnected) then (Tap is -2)(Capacitor is Connect)";
const char* const kLowerRule = "If (Voltage is H) and (Reactive_power is Good) and (Tap is not Tap1) then (Tap is -1)";

// Structural view of a rule, ignoring spans and comments.
std::string shape(const Rule& r)
{
    std::string s;
    for (const auto& a : r.antecedents)
        s += a.variable + (a.negated ? " !" : " ") + a.term + ";";
    s += "=>";
    for (const auto& c : r.consequents)
        s += c.variable + " " + c.term + ";";
    return s;
}

std::vector<std::string> shapes(const std::vector<Rule>& rules)
{
    std::vector<std::string> out;
    for (const auto& r : rules)
        out.push_back(shape(r));
    return out;
}

bool span_in_bounds(const Span& s, std::size_t n)
{
    return !s.valid() || s.offset + s.length <= n;
}

bool has_code(const Diagnostics& d, const std::string& code)
{
    return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.code == code; });
}

}  // namespace

TEST_CASE("the two published rule strings parse cleanly")
{
    const auto r = parse_ruleset(std::string(kConnectRule) + "\n" + kLowerRule + "\n");
    CHECK(r.diagnostics.empty());
    REQUIRE(r.rules.size() == 2);
    CHECK(r.rules[0].antecedents.size() == 3);
    CHECK(r.rules[0].consequents.size() == 2);
    CHECK(r.rules[1].antecedents.size() == 3);
    CHECK(r.rules[1].consequents.size() == 1);
    CHECK(r.rules[1].antecedents[2].negated);
    CHECK(r.rules[1].antecedents[2].term == "Tap1");
    CHECK(r.rules[0].consequents[0].term == "-2");
    CHECK(r.rules[0].consequents[1].variable == "Capacitor");
}

TEST_CASE("formatting a published rule reproduces it byte for byte")
{
    for (const char* text : {kConnectRule, kLowerRule}) {
        const auto r = parse_ruleset(text);
        REQUIRE(r.rules.size() == 1);
        CHECK(format_rule(r.rules[0]) == text);
    }
}

TEST_CASE("empty and comment-only input")
{
    CHECK(parse_ruleset("").rules.empty());
    CHECK(parse_ruleset("").diagnostics.empty());
    const auto c = parse_ruleset("-- nothing here\n\n   \n");
    CHECK(c.rules.empty());
    CHECK(c.diagnostics.empty());
}

TEST_CASE("missing term is one spanned error covering the group")
{
    const std::string text = "If (Voltage is) then (Tap is 0)";
    const auto r = parse_ruleset(text);
    CHECK(r.rules.empty());
    REQUIRE(r.diagnostics.size() == 1);
    const auto& d = r.diagnostics[0];
    CHECK(d.severity == Severity::Error);
    REQUIRE(d.span.valid());
    CHECK(text.substr(d.span.offset, d.span.length) == "(Voltage is)");
    CHECK(d.span.line == 1);
    CHECK(d.span.column == 4);
}

TEST_CASE("error recovery resumes at the next statement")
{
    const std::string text = "If (A is x) (B is y) then (C is z)\n"
                             "If (A is x then (C is z)\n"
                             "(A is x) then (C is z)\n"
                             "If (A is x) then\n"
                             "If (A is x) and (B is y) then (C is z)\n";
    const auto r = parse_ruleset(text);
    CHECK(r.rules.size() == 1);
    CHECK(r.diagnostics.size() == 4);
    for (const auto& d : r.diagnostics) {
        CHECK(d.severity == Severity::Error);
        CHECK(d.span.valid());
        CHECK(span_in_bounds(d.span, text.size()));
    }
    CHECK(r.rules[0].span.line == 5);
}

TEST_CASE("keywords are case-insensitive and periods separate rules")
{
    const auto r = parse_ruleset("IF (A is x) AND (B IS NOT y) THEN (C is +1). if (A is y) then (C is 0)");
    CHECK(r.diagnostics.empty());
    REQUIRE(r.rules.size() == 2);
    CHECK(r.rules[0].antecedents[1].negated);
    CHECK(format_rule(r.rules[0]) == "If (A is x) and (B is not y) then (C is +1)");
}

TEST_CASE("negation is printed as 'is not'")
{
    const auto r = parse_ruleset("If (Tap is not TapMax) then (Taps is 1)");
    REQUIRE(r.rules.size() == 1);
    CHECK(format_rule(r.rules[0]).find("(Tap is not TapMax)") != std::string::npos);
}

TEST_CASE("the shipped rule file is a formatting fixed point")
{
    const std::string text = testing::slurp(testing::source_path("rules/default14.rules"));
    const auto r = parse_ruleset(text);
    CHECK(r.diagnostics.empty());
    CHECK(r.rules.size() == 14);
    CHECK(format_ruleset(r.rules) == text);

    // Both published rules are present verbatim.
    CHECK(text.find(kConnectRule) != std::string::npos);
    CHECK(text.find(kLowerRule) != std::string::npos);
}

TEST_CASE("parse after format preserves structure")
{
    std::mt19937_64 rng(2024);
    const std::vector<std::string> vars{"Voltage", "Reactive_power", "Tap", "Shunt_Off", "A_b"};
    const std::vector<std::string> terms{"H", "Good", "-2", "+1", "0", "Tap1", "x9"};
    auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
    for (int k = 0; k < 200; ++k) {
        std::string text;
        const int n = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) {
            if (rng() % 3 == 0)
                text += "-- comment " + std::to_string(i) + "\n";
            text += (rng() % 2) ? "If" : "if";
            const int na = 1 + static_cast<int>(rng() % 4);
            for (int a = 0; a < na; ++a) {
                if (a)
                    text += (rng() % 2) ? " and" : "  AND";
                text += " (" + pick(vars) + " is " + ((rng() % 3 == 0) ? "not " : "") + pick(terms) + ")";
            }
            text += " then";
            const int nc = 1 + static_cast<int>(rng() % 2);
            for (int c = 0; c < nc; ++c)
                text += (rng() % 2 ? " " : "") + std::string("(") + pick(vars) + " is " + pick(terms) + ")";
            text += (rng() % 2) ? "\n" : ".\n\n";
        }
        const auto first = parse_ruleset(text);
        REQUIRE(first.diagnostics.empty());
        const std::string canon = format_ruleset(first.rules);
        const auto second = parse_ruleset(canon);
        CHECK(second.diagnostics.empty());
        CHECK(shapes(second.rules) == shapes(first.rules));
        CHECK(format_ruleset(second.rules) == canon);
    }
}

TEST_CASE("random bytes never crash the parser and spans stay in bounds")
{
    std::mt19937_64 rng(77);
    const std::string alphabet = "If then and not is ()-+.\n\t ABCxyz019_#\"\\";
    for (int k = 0; k < 20000; ++k) {
        std::string text(rng() % 64, '\0');
        for (auto& ch : text)
            ch = (k % 2) ? static_cast<char>(rng() & 0xff) : alphabet[rng() % alphabet.size()];
        const auto r = parse_ruleset(text);
        for (const auto& d : r.diagnostics)
            REQUIRE(span_in_bounds(d.span, text.size()));
        for (const auto& rule : r.rules) {
            REQUIRE(span_in_bounds(rule.span, text.size()));
            for (const auto& a : rule.antecedents)
                REQUIRE(span_in_bounds(a.span, text.size()));
        }
    }
}

TEST_CASE("rule spans point at their text")
{
    const std::string text = "-- c\nIf (A is x) then (B is y)\n";
    const auto r = parse_ruleset(text);
    REQUIRE(r.rules.size() == 1);
    const auto& rule = r.rules[0];
    CHECK(rule.span.line == 2);
    CHECK(text.substr(rule.span.offset, rule.span.length) == "If (A is x) then (B is y)");
    CHECK(text.substr(rule.antecedents[0].span.offset, rule.antecedents[0].span.length) == "(A is x)");
    REQUIRE(rule.comments.size() == 1);
}

TEST_CASE("lint")
{
    const auto& fis = testing::default_fis();
    SUBCASE("shipped rule base is consistent with the shipped system")
    {
        CHECK_FALSE(has_errors(lint(fis.rules, fis)));
    }
    SUBCASE("unknown variable")
    {
        const auto r = parse_ruleset("If (Frequency is High) then (Taps is 0)");
        const auto d = lint(r.rules, fis);
        CHECK(has_errors(d));
        CHECK(has_code(d, "unknown-variable"));
    }
    SUBCASE("duplicate rules warn")
    {
        const auto r = parse_ruleset("If (Voltage is G) then (Taps is 0)\nIf (Voltage is G) then (Taps is 0)\n");
        const auto d = lint(r.rules, fis);
        CHECK_FALSE(has_errors(d));
        CHECK(has_code(d, "duplicate-rule"));
    }
    SUBCASE("contradictory consequents warn")
    {
        const auto r = parse_ruleset("If (Voltage is G) then (Taps is 0)\nIf (Voltage is G) then (Taps is 1)\n");
        CHECK(has_code(lint(r.rules, fis), "contradictory-rule"));
    }
    SUBCASE("output with no rule warns")
    {
        const auto r = parse_ruleset("If (Voltage is G) then (Taps is 0)");
        CHECK(has_code(lint(r.rules, fis), "unused-output"));
    }
    SUBCASE("numeric terms and aliases resolve")
    {
        const auto r = parse_ruleset("If (Voltage is VL) then (Tap is +2)(Capacitor is Hold)");
        CHECK_FALSE(has_errors(lint(r.rules, fis)));
    }
}
