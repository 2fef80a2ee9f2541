#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace regtrace {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: broken JSON/CSV syntax, unknown tags, ill-formed
/// references, values outside their lexical range.
struct ParseError : Error {
    using Error::Error;
};

/// Structurally well-formed input violating a semantic invariant: bad
/// spans, quote drift, typing-rule violations, dangling references.
struct ValidationError : Error {
    using Error::Error;
};

enum class Severity { Error, Warning };

/// One validation finding. `subject` names the offending object
/// (annotation id, instance id, provision reference, record id).
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string subject;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) return true;
    }
    return false;
}

std::string to_string(const Diagnostic& d);

}  // namespace regtrace
