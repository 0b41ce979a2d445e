#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vvc {

/// Byte range inside a source text. Lines and columns are 1-based.
struct Span {
    std::size_t offset = 0;
    std::size_t length = 0;
    std::size_t line = 0;
    std::size_t column = 0;

    bool valid() const { return line > 0; }
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;     // short machine-readable tag, e.g. "unknown-term"
    std::string message;
    Span span;            // may be invalid for diagnostics without a source location
    std::string source;   // file name or logical origin, may be empty
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diags);
std::size_t count_errors(const Diagnostics& diags);

/// "file:line:col: error: message [code]"
std::string to_string(const Diagnostic& d);

// Exception hierarchy for the C++ core. The C API maps each class to a status code.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid definition or configuration (unresolved names, bad values).
class DefinitionError : public Error {
public:
    using Error::Error;
};

/// Missing or malformed runtime input.
class InputError : public Error {
public:
    using Error::Error;
};

/// Value outside a permitted range.
class RangeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Config or data file that failed to parse, with every diagnostic attached.
class ParseError : public Error {
public:
    ParseError(const std::string& what, Diagnostics diags)
        : Error(what), diagnostics_(std::move(diags)) {}
    /// Message taken from the first diagnostic.
    explicit ParseError(Diagnostics diags)
        : Error(diags.empty() ? std::string("parse error") : to_string(diags.front())), diagnostics_(std::move(diags)) {}
    const Diagnostics& diagnostics() const { return diagnostics_; }

private:
    Diagnostics diagnostics_;
};

}  // namespace vvc
