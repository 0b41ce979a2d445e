#include "vvc/rules.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <tuple>

namespace vvc {

namespace {

enum class Tok { LParen, RParen, Ident, Number, Dot, Newline, Comment, Invalid, End };

struct Token {
    Tok kind;
    std::string_view text;
    Span span;
};

bool ident_start(unsigned char c)
{
    return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool ident_char(unsigned char c)
{
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_digit(unsigned char c)
{
    return c >= '0' && c <= '9';
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            const auto c = static_cast<unsigned char>(text_[pos_]);
            if (c == '\n') {
                out.push_back(make(Tok::Newline, 1));
                advance_line();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                step(1);
                continue;
            }
            if (c == '-' && peek(1) == '-') {
                std::size_t n = 0;
                while (pos_ + n < text_.size() && text_[pos_ + n] != '\n')
                    ++n;
                out.push_back(make(Tok::Comment, n));
                step(n);
                continue;
            }
            if (c == '(') {
                out.push_back(make(Tok::LParen, 1));
                step(1);
                continue;
            }
            if (c == ')') {
                out.push_back(make(Tok::RParen, 1));
                step(1);
                continue;
            }
            if (c == '.') {
                out.push_back(make(Tok::Dot, 1));
                step(1);
                continue;
            }
            if (is_digit(c) || ((c == '+' || c == '-') && is_digit(peek(1)))) {
                std::size_t n = 1;
                while (is_digit(peek(n)))
                    ++n;
                if (peek(n) == '.' && is_digit(peek(n + 1))) {
                    n += 2;
                    while (is_digit(peek(n)))
                        ++n;
                }
                // A number glued to letters ("2a") is malformed rather than two tokens.
                if (ident_start(peek(n))) {
                    while (ident_char(peek(n)))
                        ++n;
                    out.push_back(make(Tok::Invalid, n));
                } else {
                    out.push_back(make(Tok::Number, n));
                }
                step(n);
                continue;
            }
            if (ident_start(c)) {
                std::size_t n = 1;
                while (ident_char(peek(n)))
                    ++n;
                out.push_back(make(Tok::Ident, n));
                step(n);
                continue;
            }
            out.push_back(make(Tok::Invalid, 1));
            step(1);
        }
        out.push_back(make(Tok::End, 0));
        return out;
    }

private:
    unsigned char peek(std::size_t k) const
    {
        return pos_ + k < text_.size() ? static_cast<unsigned char>(text_[pos_ + k]) : 0;
    }

    Token make(Tok kind, std::size_t n) const
    {
        return {kind, text_.substr(pos_, n), {pos_, n, line_, col_}};
    }

    void step(std::size_t n)
    {
        pos_ += n;
        col_ += n;
    }

    void advance_line()
    {
        ++pos_;
        ++line_;
        col_ = 1;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool keyword(const Token& t, std::string_view kw)
{
    if (t.kind != Tok::Ident || t.text.size() != kw.size())
        return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(t.text[i])) != kw[i])
            return false;
    return true;
}

bool any_keyword(const Token& t)
{
    return keyword(t, "if") || keyword(t, "and") || keyword(t, "then") || keyword(t, "is") || keyword(t, "not");
}

Span cover(const Span& from, const Span& to)
{
    Span s = from;
    s.length = to.offset + to.length - from.offset;
    return s;
}

struct StatementError {
    std::string code;
    std::string message;
    Span span;
};

// Parses one statement (tokens between separators, comments removed).
class StatementParser {
public:
    explicit StatementParser(const std::vector<Token>& toks) : toks_(toks) {}

    std::optional<Rule> parse(std::optional<StatementError>& err)
    {
        for (const auto& t : toks_) {
            if (t.kind == Tok::Invalid) {
                err = StatementError{"unexpected-character", "unexpected '" + printable(t.text) + "'", t.span};
                return std::nullopt;
            }
        }

        Rule rule;
        if (!keyword(cur(), "if")) {
            err = StatementError{"expected-if", "rule must start with 'If'", cur().span};
            return std::nullopt;
        }
        const Span first = cur().span;
        ++i_;

        for (;;) {
            Antecedent ant;
            if (!parse_group(ant.variable, ant.term, &ant.negated, ant.span, err))
                return std::nullopt;
            rule.antecedents.push_back(std::move(ant));

            if (at_end()) {
                err = StatementError{"missing-then", "missing 'then' after the conditions", rule.antecedents.back().span};
                return std::nullopt;
            }
            if (keyword(cur(), "and")) {
                ++i_;
                continue;
            }
            if (keyword(cur(), "then")) {
                ++i_;
                break;
            }
            err = StatementError{"expected-and-or-then", "expected 'and' or 'then', found '" + printable(cur().text) + "'",
                                 cur().span};
            return std::nullopt;
        }

        if (at_end()) {
            err = StatementError{"missing-consequent", "expected a consequent after 'then'", toks_[i_ - 1].span};
            return std::nullopt;
        }
        while (!at_end()) {
            Consequent cons;
            if (!parse_group(cons.variable, cons.term, nullptr, cons.span, err))
                return std::nullopt;
            rule.consequents.push_back(std::move(cons));
        }
        rule.span = cover(first, toks_.back().span);
        return rule;
    }

private:
    const Token& cur() const { return toks_[std::min(i_, toks_.size() - 1)]; }
    bool at_end() const { return i_ >= toks_.size(); }

    static std::string printable(std::string_view s)
    {
        std::string out;
        for (unsigned char c : s) {
            if (c >= 0x20 && c < 0x7f) {
                out += static_cast<char>(c);
            } else {
                static const char* hex = "0123456789abcdef";
                out += "\\x";
                out += hex[c >> 4];
                out += hex[c & 0xf];
            }
        }
        return out;
    }

    // Span from `open` to the first ')' at or after i_, or to the end of the statement.
    Span group_span(std::size_t open) const
    {
        for (std::size_t k = open + 1; k < toks_.size(); ++k)
            if (toks_[k].kind == Tok::RParen)
                return cover(toks_[open].span, toks_[k].span);
        return cover(toks_[open].span, toks_.back().span);
    }

    bool parse_group(std::string& var, std::string& term, bool* negated, Span& span,
                     std::optional<StatementError>& err)
    {
        if (at_end() || cur().kind != Tok::LParen) {
            if (!at_end() && cur().kind == Tok::RParen)
                err = StatementError{"unbalanced-parentheses", "unbalanced parentheses: unexpected ')'", cur().span};
            else
                err = StatementError{"expected-lparen",
                                     negated ? "expected '(' to open a condition" : "expected '(' to open a consequent",
                                     at_end() ? toks_.back().span : cur().span};
            return false;
        }
        const std::size_t open = i_++;
        const char* what = negated ? "malformed condition" : "malformed consequent";
        auto fail = [&](const std::string& detail) {
            bool closed = false;
            for (std::size_t k = open + 1; k < toks_.size(); ++k)
                if (toks_[k].kind == Tok::RParen)
                    closed = true;
            if (!closed)
                err = StatementError{"unbalanced-parentheses", "unbalanced parentheses: missing ')'", group_span(open)};
            else
                err = StatementError{negated ? "malformed-condition" : "malformed-consequent",
                                     std::string(what) + ": " + detail, group_span(open)};
            return false;
        };

        if (at_end() || cur().kind != Tok::Ident || any_keyword(cur()))
            return fail("expected a variable name");
        var = std::string(cur().text);
        ++i_;
        if (at_end() || !keyword(cur(), "is"))
            return fail("expected 'is' after '" + var + "'");
        ++i_;
        if (!at_end() && keyword(cur(), "not")) {
            if (!negated)
                return fail("'not' is not allowed in a consequent");
            *negated = true;
            ++i_;
        }
        if (at_end() || (cur().kind != Tok::Ident && cur().kind != Tok::Number) || any_keyword(cur()))
            return fail("missing term after 'is'");
        term = std::string(cur().text);
        ++i_;
        if (at_end() || cur().kind != Tok::RParen)
            return fail("expected ')'");
        span = cover(toks_[open].span, cur().span);
        ++i_;
        return true;
    }

    const std::vector<Token>& toks_;
    std::size_t i_ = 0;
};

std::string comment_text(std::string_view raw)
{
    raw.remove_prefix(2);  // "--"
    while (!raw.empty() && (raw.front() == ' ' || raw.front() == '\t'))
        raw.remove_prefix(1);
    while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r'))
        raw.remove_suffix(1);
    return std::string(raw);
}

}  // namespace

ParseResult parse_ruleset(std::string_view text, std::string_view source_name)
{
    ParseResult result;
    const std::vector<Token> toks = Lexer(text).run();

    std::vector<Token> stmt;
    std::vector<std::string> pending_comments;
    bool line_has_code = false;

    auto finish = [&]() {
        if (stmt.empty())
            return;
        std::optional<StatementError> err;
        auto rule = StatementParser(stmt).parse(err);
        if (rule) {
            rule->comments = std::move(pending_comments);
            result.rules.push_back(std::move(*rule));
        } else if (err) {
            result.diagnostics.push_back(
                {Severity::Error, err->code, err->message, err->span, std::string(source_name)});
        }
        pending_comments.clear();
        stmt.clear();
    };

    for (const auto& t : toks) {
        switch (t.kind) {
        case Tok::Comment:
            if (!line_has_code && stmt.empty())
                pending_comments.push_back(comment_text(t.text));
            break;
        case Tok::Newline:
            finish();
            line_has_code = false;
            break;
        case Tok::Dot:
            finish();
            break;
        case Tok::End:
            finish();
            break;
        default:
            stmt.push_back(t);
            line_has_code = true;
            break;
        }
    }
    return result;
}

std::string format_rule(const Rule& rule)
{
    std::string out = "If ";
    for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
        const auto& a = rule.antecedents[i];
        if (i > 0)
            out += " and ";
        out += '(' + a.variable + (a.negated ? " is not " : " is ") + a.term + ')';
    }
    out += " then ";
    for (const auto& c : rule.consequents)
        out += '(' + c.variable + " is " + c.term + ')';
    return out;
}

std::string format_ruleset(const std::vector<Rule>& rules)
{
    std::string out;
    for (const auto& r : rules) {
        // A commented rule opens a new paragraph.
        if (!r.comments.empty() && !out.empty())
            out += '\n';
        for (const auto& c : r.comments)
            out += c.empty() ? std::string("--\n") : "-- " + c + '\n';
        out += format_rule(r);
        out += '\n';
    }
    return out;
}

Diagnostics lint(const std::vector<Rule>& rules, const FisDefinition& fis)
{
    Diagnostics diags;
    using Key = std::vector<std::tuple<std::string, std::string, bool>>;
    struct Normalized {
        Key antecedents;
        std::vector<std::pair<std::string, std::string>> consequents;
    };
    std::vector<Normalized> norm;
    std::vector<bool> output_used(fis.outputs.size(), false);

    for (std::size_t r = 0; r < rules.size(); ++r) {
        const Rule& rule = rules[r];
        const std::string where = "rule " + std::to_string(r + 1) + ": ";
        auto add = [&](Severity sev, std::string code, std::string msg, const Span& span) {
            diags.push_back({sev, std::move(code), where + msg, span.valid() ? span : rule.span, {}});
        };
        Normalized n;
        for (const auto& a : rule.antecedents) {
            std::string var = a.variable;
            std::string term = a.term;
            if (const auto* v = fis.find_input(a.variable)) {
                var = v->name;
                if (const auto* s = v->find_set(a.term))
                    term = s->term;
                else
                    add(Severity::Error, "unknown-term", "unknown term '" + a.term + "' for variable '" + v->name + "'",
                        a.span);
            } else if (fis.find_output(a.variable)) {
                add(Severity::Error, "unknown-variable",
                    "'" + a.variable + "' is an output and cannot appear in a condition", a.span);
            } else {
                add(Severity::Error, "unknown-variable", "unknown variable '" + a.variable + "'", a.span);
            }
            n.antecedents.emplace_back(var, term, a.negated);
        }
        for (const auto& c : rule.consequents) {
            std::string var = c.variable;
            std::string term = c.term;
            std::size_t k = 0;
            for (; k < fis.outputs.size(); ++k)
                if (fis.outputs[k].answers_to(c.variable))
                    break;
            if (k < fis.outputs.size()) {
                output_used[k] = true;
                var = fis.outputs[k].name;
                if (const auto* s = fis.outputs[k].find_set(c.term))
                    term = s->term;
                else
                    add(Severity::Error, "unknown-term",
                        "unknown term '" + c.term + "' for output '" + fis.outputs[k].name + "'", c.span);
            } else {
                add(Severity::Error, "unknown-variable", "unknown output variable '" + c.variable + "'", c.span);
            }
            n.consequents.emplace_back(var, term);
        }
        std::sort(n.antecedents.begin(), n.antecedents.end());
        std::sort(n.consequents.begin(), n.consequents.end());

        for (std::size_t p = 0; p < norm.size(); ++p) {
            if (norm[p].antecedents != n.antecedents)
                continue;
            if (norm[p].consequents == n.consequents) {
                add(Severity::Warning, "duplicate-rule", "duplicates rule " + std::to_string(p + 1), rule.span);
                continue;
            }
            for (const auto& [var, term] : n.consequents)
                for (const auto& [pvar, pterm] : norm[p].consequents)
                    if (var == pvar && term != pterm)
                        add(Severity::Warning, "contradictory-rule",
                            "same conditions as rule " + std::to_string(p + 1) + " but sets '" + var + "' to '" +
                                term + "' instead of '" + pterm + "'",
                            rule.span);
        }
        norm.push_back(std::move(n));
    }

    for (std::size_t k = 0; k < fis.outputs.size(); ++k)
        if (!output_used[k])
            diags.push_back({Severity::Warning, "unused-output",
                             "output '" + fis.outputs[k].name + "' is not driven by any rule", {}, {}});
    return diags;
}

}  // namespace vvc
