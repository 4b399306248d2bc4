#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "xdnp/lexer.hpp"
#include "xdnp/model.hpp"

namespace xdnp {

struct ParseResult {
    std::optional<Policy> policy;  // set iff no error diagnostics
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return policy.has_value(); }
};

// Recursive descent over the document grammar. Document order of rules and
// conditions is preserved. An omitted connector on a non-first condition
// maps to And. On a syntax error inside a rule the parser records a
// diagnostic and resynchronizes at the next <rule> (or the closing tag);
// with fail_fast it stops at the first diagnostic instead.
ParseResult parse(const std::vector<Token>& tokens, bool fail_fast = false);

// lex + parse.
ParseResult parse_source(std::string_view source, bool fail_fast = false);

struct LoadResult {
    std::optional<Policy> policy;
    std::vector<Diagnostic> diagnostics;
    std::optional<std::string> io_error;  // file missing/unreadable

    bool ok() const { return policy.has_value(); }
};

// lex + parse + validate on a UTF-8 file. I/O failures are reported apart
// from syntax/semantic diagnostics.
LoadResult parse_file(const std::filesystem::path& path, bool fail_fast = false);

}  // namespace xdnp
