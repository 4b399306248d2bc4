#include "xdnp/lexer.hpp"

#include <array>
#include <utility>

namespace xdnp {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

bool is_name_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_name_char(char c) {
    return is_name_start(c) || is_digit(c);
}

// Longest prefix of `text` matching one octet production:
//   oct10 = [1-9][0-9] | 1[0-9][0-9] | 2[0-4][0-9] | 25[0-5]
//   octet = [0-9] | oct10        start_oct = [1-9] | oct10
// Multi-digit forms never start with 0, so a leading zero caps the match at
// one digit. Returns 0 when nothing matches.
std::size_t octet_match(std::string_view text, bool start_oct) {
    if (text.empty() || !is_digit(text[0])) return 0;
    if (text[0] == '0') return start_oct ? 0 : 1;
    std::size_t digits = 1;
    while (digits < text.size() && digits < 3 && is_digit(text[digits])) ++digits;
    if (digits == 3) {
        int value = (text[0] - '0') * 100 + (text[1] - '0') * 10 + (text[2] - '0');
        if (value <= 255) return 3;
        digits = 2;  // three digits exceed 255; fall back
    }
    return digits;  // [1-9] or [1-9][0-9]
}

// Longest prefix matching ipv4 = {start_oct}\.{octet}\.{octet}\.{octet}.
// The three inner octets must run exactly up to their dot (a shorter match
// would leave a digit where the dot belongs), so only the final octet needs
// the shorter fallbacks.
std::size_t ipv4_match(std::string_view text) {
    std::size_t pos = 0;
    for (int component = 0; component < 4; ++component) {
        if (component > 0) {
            if (pos >= text.size() || text[pos] != '.') return 0;
            ++pos;
        }
        std::size_t len = octet_match(text.substr(pos), component == 0);
        if (len == 0) return 0;
        if (component < 3) {
            // must land exactly on the separating dot
            while (len > 0 && (pos + len >= text.size() || text[pos + len] != '.')) --len;
            if (len == 0 || octet_match(text.substr(pos, len), component == 0) != len) return 0;
        }
        pos += len;
    }
    return pos;
}

enum class Mode { Content, Tag };

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;
    int line = 1;
    int column = 1;
    Mode mode = Mode::Content;
    LexResult result{};

    bool eof() const { return pos >= src.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }
    bool starts_with(std::string_view prefix) const {
        return src.substr(pos).starts_with(prefix);
    }

    void advance(std::size_t count = 1) {
        for (std::size_t i = 0; i < count && pos < src.size(); ++i, ++pos) {
            if (src[pos] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    }

    SourceSpan span_here(std::size_t length) const {
        return {line, column, static_cast<int>(length > 0 ? length : 1)};
    }

    void emit(TokenKind kind, std::size_t length) {
        Token token{kind, std::string(src.substr(pos, length)), span_here(length)};
        result.tokens.push_back(std::move(token));
        advance(length);
    }

    void fail(std::string message, std::size_t length = 1) {
        result.error = Diagnostic{Severity::Error, std::move(message), span_here(length)};
    }

    std::size_t name_run_length(std::size_t from) const {
        std::size_t len = 0;
        while (from + len < src.size() && is_name_char(src[from + len])) ++len;
        return len;
    }

    void skip_insignificant() {
        while (!eof()) {
            if (is_space(peek())) {
                advance();
                continue;
            }
            if (mode == Mode::Content && starts_with("<!--")) {
                std::size_t end = src.find("-->", pos + 4);
                if (end == std::string_view::npos) {
                    fail("unterminated comment", src.size() - pos);
                    return;
                }
                advance(end + 3 - pos);
                continue;
            }
            return;
        }
    }

    void lex_tag_open() {
        const bool closing = peek(1) == '/';
        const std::size_t name_pos = pos + (closing ? 2 : 1);
        const std::size_t name_len = name_run_length(name_pos);
        const std::string_view name = src.substr(name_pos, name_len);

        static constexpr std::array<std::pair<std::string_view, std::pair<TokenKind, TokenKind>>, 5>
            kTags{{
                {"SDN", {TokenKind::SdnOpen, TokenKind::SdnClose}},
                {"rules", {TokenKind::RulesOpen, TokenKind::RulesClose}},
                {"rule", {TokenKind::RuleOpen, TokenKind::RuleClose}},
                {"condition", {TokenKind::CondOpen, TokenKind::CondClose}},
                {"action", {TokenKind::ActionOpen, TokenKind::ActionClose}},
            }};

        for (const auto& [tag, kinds] : kTags) {
            if (name != tag) continue;
            if (closing) {
                const std::size_t end = name_pos + name_len;
                if (end >= src.size() || src[end] != '>') {
                    fail("expected '>' after '</" + std::string(name) + "'",
                         end - pos);
                    return;
                }
                emit(kinds.second, end + 1 - pos);
            } else {
                emit(kinds.first, name_pos + name_len - pos);
                mode = Mode::Tag;
            }
            return;
        }
        if (name_len == 0) {
            fail(closing ? "expected tag name after '</'" : "expected tag name after '<'",
             closing ? 2 : 1);
            return;
        }
        fail("unknown tag name '" + std::string(name) + "'",
             name_pos + name_len - pos);
    }

    void lex_in_tag() {
        const char c = peek();
        if (c == '>') {
            emit(TokenKind::TagEnd, 1);
            mode = Mode::Content;
            return;
        }
        if (c == '=') {
            emit(TokenKind::AttrEquals, 1);
            return;
        }
        if (c == '"') {
            std::size_t end = src.find('"', pos + 1);
            if (end == std::string_view::npos) {
                fail("unterminated attribute value", src.size() - pos);
                return;
            }
            emit(TokenKind::QuotedString, end + 1 - pos);
            return;
        }
        if (is_name_start(c)) {
            emit(TokenKind::AttrName, name_run_length(pos));
            return;
        }
        fail(std::string("unexpected character '") + c + "' inside tag");
    }

    void lex_in_content() {
        const char c = peek();
        if (c == '<') {
            lex_tag_open();
            return;
        }
        if (c == '=') {
            emit(TokenKind::EqSign, 1);
            return;
        }
        if (is_digit(c)) {
            // Ipv4Literal wins over NumberLiteral: a successful dotted match
            // is always longer than the leading digit run.
            if (std::size_t ip_len = ipv4_match(src.substr(pos)); ip_len > 0) {
                emit(TokenKind::Ipv4Literal, ip_len);
                return;
            }
            std::size_t len = 0;
            while (is_digit(peek(len))) ++len;
            emit(TokenKind::NumberLiteral, len);
            return;
        }
        if (is_name_start(c)) {
            const std::size_t len = name_run_length(pos);
            const std::string_view word = src.substr(pos, len);
            const bool keyword = word == "src_ip" || word == "dest_ip" ||
                                 word == "src_prt" || word == "dest_prt";
            emit(keyword ? TokenKind::FieldKeyword : TokenKind::Identifier, len);
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::SdnOpen: return "<SDN";
        case TokenKind::SdnClose: return "</SDN>";
        case TokenKind::RulesOpen: return "<rules";
        case TokenKind::RulesClose: return "</rules>";
        case TokenKind::RuleOpen: return "<rule";
        case TokenKind::RuleClose: return "</rule>";
        case TokenKind::CondOpen: return "<condition";
        case TokenKind::CondClose: return "</condition>";
        case TokenKind::ActionOpen: return "<action";
        case TokenKind::ActionClose: return "</action>";
        case TokenKind::AttrName: return "attribute name";
        case TokenKind::AttrEquals: return "'='";
        case TokenKind::QuotedString: return "quoted string";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Ipv4Literal: return "IP address";
        case TokenKind::NumberLiteral: return "number";
        case TokenKind::FieldKeyword: return "field keyword";
        case TokenKind::EqSign: return "'='";
        case TokenKind::TagEnd: return "'>'";
    }
    return "token";
}

LexResult lex(std::string_view source) {
    Lexer lexer{.src = source};
    while (true) {
        lexer.skip_insignificant();
        if (lexer.result.error || lexer.eof()) break;
        if (lexer.mode == Mode::Tag) {
            lexer.lex_in_tag();
        } else {
            lexer.lex_in_content();
        }
        if (lexer.result.error) break;
    }
    return std::move(lexer.result);
}

}  // namespace xdnp
