#include "xdnp/model.hpp"

#include <cctype>
#include <charconv>

namespace xdnp {

namespace {

bool is_ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9') || c == '_';
}

std::string_view connector_attr(Connector connector) {
    switch (connector) {
        case Connector::And: return "and";
        case Connector::Or: return "or";
        case Connector::None: break;
    }
    return {};
}

}  // namespace

std::string_view field_keyword(Field field) {
    switch (field) {
        case Field::SrcIp: return "src_ip";
        case Field::DstIp: return "dest_ip";
        case Field::SrcPort: return "src_prt";
        case Field::DstPort: return "dest_prt";
    }
    return {};
}

std::optional<Field> field_from_keyword(std::string_view keyword) {
    if (keyword == "src_ip") return Field::SrcIp;
    if (keyword == "dest_ip") return Field::DstIp;
    if (keyword == "src_prt") return Field::SrcPort;
    if (keyword == "dest_prt") return Field::DstPort;
    return std::nullopt;
}

ValueKind field_kind(Field field) {
    return (field == Field::SrcIp || field == Field::DstIp) ? ValueKind::Ip
                                                            : ValueKind::Port;
}

std::string Ipv4::to_string() const {
    std::string text = std::to_string(octets[0]);
    for (int i = 1; i < 4; ++i) {
        text.push_back('.');
        text += std::to_string(octets[i]);
    }
    return text;
}

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
    Ipv4 result;
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        if (i > 0) {
            if (pos >= text.size() || text[pos] != '.') return std::nullopt;
            ++pos;
        }
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        std::size_t len = pos - start;
        if (len == 0 || len > 3) return std::nullopt;
        if (len > 1 && text[start] == '0') return std::nullopt;  // no leading zeros
        unsigned int octet = 0;
        std::from_chars(text.data() + start, text.data() + pos, octet);
        if (octet > 255) return std::nullopt;
        if (i == 0 && octet == 0) return std::nullopt;
        result.octets[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(octet);
    }
    if (pos != text.size()) return std::nullopt;
    return result;
}

ValueKind value_kind(const Value& value) {
    return std::holds_alternative<Ipv4>(value) ? ValueKind::Ip : ValueKind::Port;
}

std::string value_to_string(const Value& value) {
    if (const auto* ip = std::get_if<Ipv4>(&value)) return ip->to_string();
    return std::to_string(std::get<PortNumber>(value).value);
}

bool is_identifier(std::string_view text) {
    if (text.empty() || !is_ident_start(text[0])) return false;
    for (char c : text.substr(1)) {
        if (!is_ident_char(c)) return false;
    }
    return true;
}

std::string canonical_xml(const Policy& policy) {
    std::string doc;
    doc += "<SDN name=\"" + policy.name + "\">\n";
    doc += "  <rules>\n";
    for (const Rule& rule : policy.rules) {
        doc += "    <rule>\n";
        for (const Condition& condition : rule.conditions) {
            doc += "      <condition";
            if (condition.connector != Connector::None) {
                doc += " connector=\"";
                doc += connector_attr(condition.connector);
                doc += "\"";
            }
            doc += ">";
            doc += field_keyword(condition.field);
            doc += "=";
            doc += value_to_string(condition.value);
            doc += "</condition>\n";
        }
        doc += "      <action>";
        if (const auto* forward = std::get_if<Forward>(&rule.action)) {
            doc += std::to_string(forward->port);
        } else {
            doc += "0";
        }
        doc += "</action>\n";
        doc += "    </rule>\n";
    }
    doc += "  </rules>\n";
    doc += "</SDN>\n";
    return doc;
}

std::vector<Diagnostic> validate(const Policy& policy) {
    std::vector<Diagnostic> diagnostics;
    auto error = [&](std::string message, SourceSpan span) {
        diagnostics.push_back({Severity::Error, std::move(message), span});
    };

    if (!is_identifier(policy.name)) {
        error("policy name '" + policy.name + "' is not a valid identifier", policy.span);
    }

    for (std::size_t r = 0; r < policy.rules.size(); ++r) {
        const Rule& rule = policy.rules[r];
        const std::string where = "rule " + std::to_string(r + 1);

        if (rule.conditions.empty()) {
            error(where + " has no conditions", rule.span);
        }
        for (std::size_t c = 0; c < rule.conditions.size(); ++c) {
            const Condition& condition = rule.conditions[c];
            if (c == 0 && condition.connector != Connector::None) {
                error(where + ": first condition must not carry a connector",
                      condition.span);
            }
            if (c > 0 && condition.connector == Connector::None) {
                error(where + ": condition " + std::to_string(c + 1) +
                          " is missing a connector",
                      condition.span);
            }
            if (value_kind(condition.value) != field_kind(condition.field)) {
                const bool ip_field = field_kind(condition.field) == ValueKind::Ip;
                error(where + ": field '" + std::string(field_keyword(condition.field)) +
                          (ip_field ? "' requires an IP address value"
                                    : "' requires a port number value"),
                      condition.span);
            }
            if (const auto* ip = std::get_if<Ipv4>(&condition.value)) {
                if (ip->octets[0] == 0) {
                    error(where + ": IP address first octet must be 1-255",
                          condition.span);
                }
            }
        }
        if (const auto* forward = std::get_if<Forward>(&rule.action)) {
            if (forward->port == 0) {
                error(where + ": forward port must be >= 1 (0 spells drop)", rule.span);
            }
        }
    }
    return diagnostics;
}

}  // namespace xdnp
