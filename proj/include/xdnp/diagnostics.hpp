#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xdnp {

// 1-based position of a lexeme or error region in a policy document.
struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 1;

    bool operator==(const SourceSpan&) const = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    SourceSpan span;
};

std::string_view severity_name(Severity severity);

// Renders "file:line:col: severity: message". The file prefix is omitted
// when `file` is empty.
std::string format_diagnostic(const Diagnostic& diagnostic, std::string_view file = {});

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace xdnp
