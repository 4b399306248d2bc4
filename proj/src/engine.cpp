#include "xdnp/engine.hpp"

#include <array>
#include <cstdlib>
#include <sstream>

namespace xdnp {

bool match_atom(const AtomicMatch& atom, const PacketHeader& packet) {
    switch (atom.field) {
        case Field::SrcIp: return Value{packet.src_ip} == atom.value;
        case Field::DstIp: return Value{packet.dst_ip} == atom.value;
        case Field::SrcPort: return Value{PortNumber{packet.src_port}} == atom.value;
        case Field::DstPort: return Value{PortNumber{packet.dst_port}} == atom.value;
    }
    return false;
}

bool matches_clause(const Clause& clause, const PacketHeader& packet) {
    for (const AtomicMatch& atom : clause.all_of) {
        if (!match_atom(atom, packet)) return false;
    }
    return true;
}

bool matches(const DnfPredicate& predicate, const PacketHeader& packet) {
    for (const Clause& clause : predicate.any_of) {
        if (matches_clause(clause, packet)) return true;
    }
    return false;
}

MatchResult evaluate(const CompiledPolicy& cp, const PacketHeader& packet) {
    for (std::size_t ei = 0; ei < cp.entries.size(); ++ei) {
        const DnfPredicate& predicate = cp.entries[ei].predicate;
        for (std::size_t ci = 0; ci < predicate.any_of.size(); ++ci) {
            if (matches_clause(predicate.any_of[ci], packet)) {
                return {EffectiveAction{std::visit(
                            [](auto action) { return EffectiveAction{action}; },
                            cp.entries[ei].action)},
                        ei, ci};
            }
        }
    }
    MatchResult result;
    result.action = cp.default_action == DefaultAction::Drop ? EffectiveAction{Drop{}}
                                                             : EffectiveAction{NormalForward{}};
    return result;
}

Action switch_handle(SwitchState& state, const CompiledPolicy& cp,
                     const PacketHeader& packet, const NormalPortFn& normal_port) {
    ++state.stats.packets_total;
    if (const auto it = state.flow_table.find(packet); it != state.flow_table.end()) {
        ++state.stats.table_hits;
        return it->second;
    }
    ++state.stats.packet_ins;
    const MatchResult decision = evaluate(cp, packet);
    Action concrete = Drop{};
    if (const auto* forward = std::get_if<Forward>(&decision.action)) {
        concrete = *forward;
    } else if (std::holds_alternative<NormalForward>(decision.action)) {
        concrete = Forward{normal_port(packet)};
    }
    state.flow_table.emplace(packet, concrete);
    ++state.stats.installs;
    return concrete;
}

namespace {

// INT component of the packet literal; bare digits only
bool parse_port_literal(std::string_view text, std::uint16_t& out) {
    if (text.empty() || text.size() > 5) return false;
    unsigned long value = 0;
    for (const char c : text) {
        if (c < '0' || c > '9') return false;
        value = value * 10 + static_cast<unsigned long>(c - '0');
    }
    if (value > 65535) return false;
    out = static_cast<std::uint16_t>(value);
    return true;
}

}  // namespace

std::optional<PacketHeader> parse_packet(std::string_view spec, std::string* error) {
    const auto fail = [&](std::string message) -> std::optional<PacketHeader> {
        if (error) *error = std::move(message);
        return std::nullopt;
    };

    PacketHeader packet;
    std::array<bool, 4> seen{};  // src, dst, sport, dport
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string_view::npos) comma = spec.size();
        const std::string_view item = spec.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) {
            return fail("expected key=value, got '" + std::string(item) + "'");
        }
        const std::string_view key = item.substr(0, eq);
        const std::string_view value = item.substr(eq + 1);
        static constexpr std::array<std::string_view, 4> kKeys{"src", "dst", "sport", "dport"};
        for (std::size_t i = 0; i < kKeys.size(); ++i) {
            if (key == kKeys[i] && seen[i]) {
                return fail("duplicate key '" + std::string(key) + "'");
            }
        }
        if (key == "src" || key == "dst") {
            const std::optional<Ipv4> ip = Ipv4::parse(value);
            if (!ip) return fail("'" + std::string(key) + "' needs an IPv4 address, got '" +
                                 std::string(value) + "'");
            (key == "src" ? packet.src_ip : packet.dst_ip) = *ip;
            seen[key == "src" ? 0 : 1] = true;
        } else if (key == "sport" || key == "dport") {
            std::uint16_t port = 0;
            if (!parse_port_literal(value, port)) {
                return fail("'" + std::string(key) + "' needs a port in 0-65535, got '" +
                            std::string(value) + "'");
            }
            (key == "sport" ? packet.src_port : packet.dst_port) = port;
            seen[key == "sport" ? 2 : 3] = true;
        } else {
            return fail("unknown key '" + std::string(key) +
                        "' (expected src, dst, sport, dport)");
        }
        if (comma == spec.size()) break;
        pos = comma + 1;
    }

    static constexpr std::array<std::string_view, 4> kNames{"src", "dst", "sport", "dport"};
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) return fail("missing '" + std::string(kNames[i]) + "'");
    }
    return packet;
}

std::string packet_to_string(const PacketHeader& packet) {
    std::ostringstream out;
    out << "src=" << packet.src_ip.to_string() << ",dst=" << packet.dst_ip.to_string()
        << ",sport=" << packet.src_port << ",dport=" << packet.dst_port;
    return out.str();
}

}  // namespace xdnp
