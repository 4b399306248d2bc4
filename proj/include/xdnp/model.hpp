#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xdnp/diagnostics.hpp"

namespace xdnp {

// The four header variables a condition may test.
enum class Field { SrcIp, DstIp, SrcPort, DstPort };

// Source spelling of a field keyword ("src_ip", "dest_ip", "src_prt", "dest_prt").
std::string_view field_keyword(Field field);
std::optional<Field> field_from_keyword(std::string_view keyword);

enum class ValueKind { Ip, Port };
ValueKind field_kind(Field field);

// How a condition combines with the one before it. The first condition of a
// rule carries None.
enum class Connector { None, And, Or };

enum class Comparator { Eq };

// Dotted-quad address. The first octet is 1-255, the rest 0-255.
struct Ipv4 {
    std::array<std::uint8_t, 4> octets{};

    auto operator<=>(const Ipv4&) const = default;

    std::string to_string() const;
    // Strict dotted-quad parse: four components, no leading zeros, first
    // octet >= 1. Returns nullopt otherwise.
    static std::optional<Ipv4> parse(std::string_view text);
};

struct PortNumber {
    std::uint16_t value = 0;

    auto operator<=>(const PortNumber&) const = default;
};

using Value = std::variant<Ipv4, PortNumber>;

ValueKind value_kind(const Value& value);
std::string value_to_string(const Value& value);

// Forward to a switch port (>= 1). Port 0 exists only in the external
// syntax, where it spells Drop.
struct Forward {
    std::uint16_t port = 1;

    auto operator<=>(const Forward&) const = default;
};

struct Drop {
    auto operator<=>(const Drop&) const = default;
};

using Action = std::variant<Forward, Drop>;

struct Condition {
    Connector connector = Connector::None;
    Field field = Field::SrcIp;
    Comparator comparator = Comparator::Eq;
    Value value = PortNumber{0};
    SourceSpan span;  // diagnostics metadata; not part of equality

    friend bool operator==(const Condition& a, const Condition& b) {
        return a.connector == b.connector && a.field == b.field &&
               a.comparator == b.comparator && a.value == b.value;
    }
};

struct Rule {
    std::vector<Condition> conditions;  // non-empty; document order
    Action action = Drop{};
    SourceSpan span;

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.conditions == b.conditions && a.action == b.action;
    }
};

struct Policy {
    std::string name;          // identifier declared on the SDN element
    std::vector<Rule> rules;   // document order = priority order
    SourceSpan span;

    friend bool operator==(const Policy& a, const Policy& b) {
        return a.name == b.name && a.rules == b.rules;
    }
};

// The 4-tuple a rule matches on. ICMP-style traffic carries ports 0/0.
struct PacketHeader {
    Ipv4 src_ip;
    Ipv4 dst_ip;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;

    auto operator<=>(const PacketHeader&) const = default;
};

bool is_identifier(std::string_view text);

// Pretty-prints a policy in the external document grammar: 2-space indent,
// double-quoted attributes, one element per line, trailing newline. Parsing
// the output yields a structurally equal Policy.
std::string canonical_xml(const Policy& policy);

// Post-parse semantic checks. Returns one Diagnostic per violated type
// invariant; empty exactly when the policy is well-formed.
std::vector<Diagnostic> validate(const Policy& policy);

}  // namespace xdnp
