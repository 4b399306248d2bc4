#include "xdnp/diagnostics.hpp"

#include <algorithm>

namespace xdnp {

std::string_view severity_name(Severity severity) {
    return severity == Severity::Error ? "error" : "warning";
}

std::string format_diagnostic(const Diagnostic& diagnostic, std::string_view file) {
    std::string line;
    if (!file.empty()) {
        line.append(file);
        line.push_back(':');
    }
    line += std::to_string(diagnostic.span.line);
    line.push_back(':');
    line += std::to_string(diagnostic.span.column);
    line += ": ";
    line += severity_name(diagnostic.severity);
    line += ": ";
    line += diagnostic.message;
    return line;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace xdnp
