#pragma once

// Sectioned key/value text used for both system definitions and scenarios:
//
//   # comment
//   [section]
//   key = value
//   [input Voltage]        # section type "input", section label "Voltage"
//
// Keys are case-sensitive; values run to the end of the line with
// surrounding blanks removed. '#' and ';' start comments at line start or
// after whitespace.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vvc/diagnostics.hpp"
#include "vvc/fuzzy.hpp"

namespace vvc {

struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
    mutable bool used = false;
};

struct ConfigSection {
    std::string type;   // first word of the header
    std::string label;  // remainder of the header, may be empty
    std::size_t line = 0;
    std::vector<ConfigEntry> entries;

    const ConfigEntry* find(std::string_view key) const;
    std::string header() const { return label.empty() ? type : type + ' ' + label; }
};

class ConfigDocument {
public:
    /// Throws ParseError listing every malformed line.
    static ConfigDocument parse(std::string_view text, std::string source = {});
    /// Throws IoError if the file cannot be read.
    static ConfigDocument load(const std::filesystem::path& path);

    const std::string& source() const { return source_; }
    std::filesystem::path base_dir() const { return base_dir_; }
    const std::vector<ConfigSection>& sections() const { return sections_; }

    /// First section whose header equals `header`.
    const ConfigSection* section(std::string_view header) const;
    std::vector<const ConfigSection*> sections_of_type(std::string_view type) const;

    /// Warnings for every entry no reader consumed (likely typos).
    Diagnostics unused_entries() const;

private:
    std::string source_;
    std::filesystem::path base_dir_;
    std::vector<ConfigSection> sections_;
};

/// Typed lookups that record problems as diagnostics instead of throwing.
/// A missing optional key yields the fallback without a diagnostic.
class ConfigReader {
public:
    ConfigReader(const ConfigDocument& doc, Diagnostics& diags) : doc_(doc), diags_(diags) {}

    double number(const ConfigSection* s, std::string_view key, double fallback);
    std::int64_t integer(const ConfigSection* s, std::string_view key, std::int64_t fallback);
    std::uint64_t unsigned_integer(const ConfigSection* s, std::string_view key, std::uint64_t fallback);
    bool flag(const ConfigSection* s, std::string_view key, bool fallback);
    std::string text(const ConfigSection* s, std::string_view key, std::string fallback);
    std::vector<double> numbers(const ConfigSection* s, std::string_view key, std::vector<double> fallback);
    /// Resolves relative paths against the document's directory.
    std::optional<std::filesystem::path> path(const ConfigSection* s, std::string_view key);

    void error(const ConfigSection* s, std::string_view key, std::string message);
    void error_at(std::size_t line, std::string message);

    const ConfigDocument& document() const { return doc_; }

private:
    const ConfigEntry* entry(const ConfigSection* s, std::string_view key);

    const ConfigDocument& doc_;
    Diagnostics& diags_;
};

/// Parses a whitespace-separated list of numbers; nullopt on any bad token.
std::optional<std::vector<double>> parse_number_list(std::string_view text);

/// Builds a fuzzy system from [system], [input NAME] and [output NAME]
/// sections. Within a variable section the reserved keys are `universe`
/// (min max), `unit` and `aliases`; every other key declares a term whose
/// value is four breakpoints "a b c d", or several such groups joined by '|'.
FisDefinition read_fis(const ConfigDocument& doc, Diagnostics& diags);

/// Loads a system definition and a rule file into one validated definition.
/// Throws ParseError carrying all error diagnostics when either file is
/// malformed or the combination fails validation.
FisDefinition load_fis(const std::filesystem::path& fis_path, const std::filesystem::path& rules_path);

/// Like load_fis but returns every diagnostic (including warnings) and a
/// best-effort definition instead of throwing on errors. I/O failures still throw.
FisDefinition load_fis(const std::filesystem::path& fis_path, const std::filesystem::path& rules_path,
                       Diagnostics& diags);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace vvc
