#include "regtrace/errors.hpp"

namespace regtrace {

std::string to_string(const Diagnostic& d) {
    std::string out = d.severity == Severity::Error ? "error: " : "warning: ";
    if (!d.subject.empty()) {
        out += "[" + d.subject + "] ";
    }
    out += d.message;
    return out;
}

}  // namespace regtrace
