#include "xdnp/parser.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

namespace xdnp {

namespace {

std::string quoted_lexeme_contents(const Token& token) {
    // lexer guarantees surrounding double quotes
    return token.lexeme.size() >= 2 ? token.lexeme.substr(1, token.lexeme.size() - 2)
                                    : std::string{};
}

// exits the whole parse (header-level or fail-fast errors)
struct Abort {};

struct Parser {
    const std::vector<Token>& tokens;
    bool fail_fast;
    std::size_t pos = 0;
    std::vector<Diagnostic> diags{};

    bool eof() const { return pos >= tokens.size(); }
    const Token& current() const { return tokens[pos]; }
    TokenKind kind() const { return current().kind; }

    SourceSpan span_here() const {
        if (!eof()) return current().span;
        // point at the last consumed token when input ends early
        return tokens.empty() ? SourceSpan{1, 1, 1} : tokens.back().span;
    }

    void error_at(SourceSpan span, std::string message) {
        diags.push_back({Severity::Error, std::move(message), span});
        if (fail_fast) throw Abort{};
    }

    void error(std::string message) { error_at(span_here(), std::move(message)); }

    std::string describe_current() const {
        if (eof()) return "end of input";
        const Token& t = current();
        switch (t.kind) {
            case TokenKind::Identifier:
            case TokenKind::NumberLiteral:
            case TokenKind::Ipv4Literal:
            case TokenKind::FieldKeyword:
            case TokenKind::AttrName:
                return "'" + t.lexeme + "'";
            default:
                return std::string(token_kind_name(t.kind));
        }
    }

    bool at(TokenKind k) const { return !eof() && kind() == k; }

    const Token* accept(TokenKind k) {
        if (!at(k)) return nullptr;
        return &tokens[pos++];
    }

    // reports and throws Abort on mismatch: callers below rule level catch
    // nothing, rule boundaries catch RuleError instead
    const Token& expect(TokenKind k, std::string_view what) {
        if (const Token* t = accept(k)) return *t;
        error("expected " + std::string(what) + ", got " + describe_current());
        throw Abort{};
    }

    void parse_document(std::optional<Policy>& out) {
        if (eof()) {
            error("expected SDN element");
            throw Abort{};
        }
        Policy policy;
        const Token& open = expect(TokenKind::SdnOpen, "'<SDN'");
        policy.span = open.span;
        const Token& attr = expect(TokenKind::AttrName, "'name' attribute");
        if (attr.lexeme != "name") {
            error_at(attr.span, "unknown attribute '" + attr.lexeme + "' (expected 'name')");
            throw Abort{};
        }
        expect(TokenKind::AttrEquals, "'='");
        policy.name = quoted_lexeme_contents(expect(TokenKind::QuotedString, "quoted policy name"));
        expect(TokenKind::TagEnd, "'>'");

        expect(TokenKind::RulesOpen, "'<rules'");
        expect(TokenKind::TagEnd, "'>'");
        parse_rule_list(policy.rules);
        expect(TokenKind::SdnClose, "'</SDN>'");
        if (!eof()) error("unexpected content after '</SDN>'");
        out = std::move(policy);
    }

    void parse_rule_list(std::vector<Rule>& rules) {
        while (true) {
            if (eof()) {
                error("expected '</rules>' before end of input");
                throw Abort{};
            }
            if (accept(TokenKind::RulesClose)) return;
            if (at(TokenKind::SdnClose)) {
                // report the missing close tag but let the SDN close parse
                error("expected '</rules>' before '</SDN>'");
                return;
            }
            if (at(TokenKind::RuleOpen)) {
                try {
                    rules.push_back(parse_rule());
                } catch (const RuleError&) {
                    resync();
                }
            } else {
                error("expected '<rule' or '</rules>', got " + describe_current());
                ++pos;
                resync();
            }
        }
    }

    // unwinds to parse_rule_list, which resynchronizes
    struct RuleError {};

    void resync() {
        while (!eof() && kind() != TokenKind::RuleOpen &&
               kind() != TokenKind::RulesClose && kind() != TokenKind::SdnClose) {
            ++pos;
        }
    }

    Rule parse_rule() {
        try {
            Rule rule;
            rule.span = expect(TokenKind::RuleOpen, "'<rule'").span;
            expect(TokenKind::TagEnd, "'>'");
            while (at(TokenKind::CondOpen)) {
                rule.conditions.push_back(parse_condition(rule.conditions.empty()));
            }
            if (rule.conditions.empty()) {
                error_at(rule.span, "rule has no conditions");
                throw Abort{};
            }
            rule.action = parse_action();
            expect(TokenKind::RuleClose, "'</rule>'");
            return rule;
        } catch (const Abort&) {
            if (fail_fast) throw;
            throw RuleError{};
        }
    }

    Condition parse_condition(bool first) {
        Condition cond;
        cond.span = expect(TokenKind::CondOpen, "'<condition'").span;
        cond.connector = first ? Connector::None : Connector::And;
        if (const Token* attr = accept(TokenKind::AttrName)) {
            if (attr->lexeme != "connector") {
                error_at(attr->span,
                         "unknown attribute '" + attr->lexeme + "' (expected 'connector')");
                throw Abort{};
            }
            expect(TokenKind::AttrEquals, "'='");
            const Token& value = expect(TokenKind::QuotedString, "connector value");
            const std::string text = quoted_lexeme_contents(value);
            if (text == "and") {
                cond.connector = Connector::And;
            } else if (text == "or") {
                cond.connector = Connector::Or;
            } else {
                error_at(value.span, "connector must be \"and\" or \"or\", got \"" + text + "\"");
                throw Abort{};
            }
        }
        expect(TokenKind::TagEnd, "'>'");

        if (at(TokenKind::Identifier)) {
            error("unknown field '" + current().lexeme +
                  "' (expected src_ip, dest_ip, src_prt or dest_prt)");
            throw Abort{};
        }
        const Token& field = expect(TokenKind::FieldKeyword, "field keyword");
        cond.field = *field_from_keyword(field.lexeme);
        expect(TokenKind::EqSign, "'='");
        if (const Token* ip = accept(TokenKind::Ipv4Literal)) {
            cond.value = *Ipv4::parse(ip->lexeme);
        } else if (at(TokenKind::NumberLiteral)) {
            cond.value = PortNumber{parse_port(current(), "port value")};
            ++pos;
        } else {
            error("expected IP address or number, got " + describe_current());
            throw Abort{};
        }
        expect(TokenKind::CondClose, "'</condition>'");
        return cond;
    }

    Action parse_action() {
        expect(TokenKind::ActionOpen, "'<action'");
        expect(TokenKind::TagEnd, "'>'");
        const Token& number = expect(TokenKind::NumberLiteral, "output port number");
        const std::uint16_t port = parse_port(number, "output port");
        expect(TokenKind::ActionClose, "'</action>'");
        if (port == 0) return Drop{};
        return Forward{port};
    }

    std::uint16_t parse_port(const Token& token, std::string_view what) {
        // lexeme is a plain digit run; only range can go wrong
        unsigned long value = 0;
        bool overflow = token.lexeme.size() > 5;
        if (!overflow) value = std::strtoul(token.lexeme.c_str(), nullptr, 10);
        if (overflow || value > 65535) {
            error_at(token.span, std::string(what) + " out of range (0-65535)");
            throw Abort{};
        }
        return static_cast<std::uint16_t>(value);
    }
};

}  // namespace

ParseResult parse(const std::vector<Token>& tokens, bool fail_fast) {
    Parser parser{.tokens = tokens, .fail_fast = fail_fast};
    ParseResult result;
    try {
        parser.parse_document(result.policy);
    } catch (const Abort&) {
        result.policy.reset();
    }
    if (has_errors(parser.diags)) result.policy.reset();
    result.diagnostics = std::move(parser.diags);
    return result;
}

ParseResult parse_source(std::string_view source, bool fail_fast) {
    LexResult lexed = lex(source);
    if (!lexed.ok()) {
        ParseResult result;
        result.diagnostics.push_back(std::move(*lexed.error));
        return result;
    }
    return parse(lexed.tokens, fail_fast);
}

LoadResult parse_file(const std::filesystem::path& path, bool fail_fast) {
    LoadResult result;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        result.io_error = "cannot open file: " + path.string();
        return result;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        result.io_error = "cannot read file: " + path.string();
        return result;
    }

    ParseResult parsed = parse_source(buffer.str(), fail_fast);
    result.diagnostics = std::move(parsed.diagnostics);
    result.policy = std::move(parsed.policy);
    if (result.policy) {
        std::vector<Diagnostic> semantic = validate(*result.policy);
        if (has_errors(semantic)) result.policy.reset();
        result.diagnostics.insert(result.diagnostics.end(), semantic.begin(), semantic.end());
    }
    return result;
}

}  // namespace xdnp
