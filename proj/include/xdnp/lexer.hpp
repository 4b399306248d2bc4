#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xdnp/diagnostics.hpp"

namespace xdnp {

// Token classes of the policy document language. Tag names are keywords:
// an open tag is lexed as "<name" followed by attribute tokens and a
// TagEnd ">". Close tags are single tokens including the ">".
enum class TokenKind {
    SdnOpen,       // <SDN
    SdnClose,      // </SDN>
    RulesOpen,     // <rules
    RulesClose,    // </rules>
    RuleOpen,      // <rule
    RuleClose,     // </rule>
    CondOpen,      // <condition
    CondClose,     // </condition>
    ActionOpen,    // <action
    ActionClose,   // </action>
    AttrName,      // identifier inside a tag
    AttrEquals,    // = inside a tag
    QuotedString,  // "..." (lexeme keeps the quotes)
    Identifier,    // identifier in text content (unknown keyword)
    Ipv4Literal,   // dotted quad per the octet productions
    NumberLiteral, // [0-9]+
    FieldKeyword,  // src_ip | dest_ip | src_prt | dest_prt
    EqSign,        // = in text content
    TagEnd,        // > closing an open tag
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Identifier;
    std::string lexeme;  // exact source slice
    SourceSpan span;
};

// Tokens lexed up to the first unmatched input; `error` is set when lexing
// stopped early. Whitespace and XML comments (<!-- -->) are skipped.
struct LexResult {
    std::vector<Token> tokens;
    std::optional<Diagnostic> error;

    bool ok() const { return !error.has_value(); }
};

LexResult lex(std::string_view source);

}  // namespace xdnp
