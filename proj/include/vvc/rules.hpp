#pragma once

// Textual rule language:
//
//   rule       := "If" cond ("and" cond)* "then" consequent+
//   cond       := "(" IDENT "is" ["not"] TERM ")"
//   consequent := "(" IDENT "is" TERM ")"
//
// Rules end at a newline or ".", keywords are case-insensitive, TERM is an
// identifier or a signed number such as -2, and "--" comments run to the end
// of the line.

#include <string>
#include <string_view>
#include <vector>

#include "vvc/diagnostics.hpp"
#include "vvc/fuzzy.hpp"

namespace vvc {

struct ParseResult {
    std::vector<Rule> rules;
    Diagnostics diagnostics;
};

/// Never throws on malformed input; a statement with an error is skipped
/// and parsing resumes at the next one.
ParseResult parse_ruleset(std::string_view text, std::string_view source_name = {});

/// Canonical one-rule-per-line form, each rule preceded by its comment lines.
/// Every commented rule after the first also gets a blank line before it.
std::string format_rule(const Rule& rule);
std::string format_ruleset(const std::vector<Rule>& rules);

/// Cross-checks rule names against the system and flags duplicate,
/// contradictory and missing coverage of outputs.
Diagnostics lint(const std::vector<Rule>& rules, const FisDefinition& fis);

}  // namespace vvc
