#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "xdnp/analyzer.hpp"
#include "xdnp/model.hpp"

namespace xdnp {

// Placeholder for the controller's built-in forwarding: deliver to the port
// of the host owning the destination IP.
struct NormalForward {
    bool operator==(const NormalForward&) const = default;
};

using EffectiveAction = std::variant<Forward, Drop, NormalForward>;

// Outcome of evaluating one packet. Indices are present iff a non-default
// entry matched; clause_index is the lowest satisfied clause of that entry.
struct MatchResult {
    EffectiveAction action = NormalForward{};
    std::optional<std::size_t> entry_index;
    std::optional<std::size_t> clause_index;

    bool is_default() const { return !entry_index.has_value(); }
};

bool match_atom(const AtomicMatch& atom, const PacketHeader& packet);
bool matches_clause(const Clause& clause, const PacketHeader& packet);
bool matches(const DnfPredicate& predicate, const PacketHeader& packet);

// First-match scan in decreasing priority (document) order. Total: no
// packet can cause an error.
MatchResult evaluate(const CompiledPolicy& cp, const PacketHeader& packet);

struct SwitchStats {
    std::uint64_t table_hits = 0;
    std::uint64_t packet_ins = 0;
    std::uint64_t installs = 0;
    std::uint64_t packets_total = 0;
};

// Flow-table cache of exact 4-tuple microflow entries. Single-writer; no
// eviction or timeouts.
struct SwitchState {
    std::map<PacketHeader, Action> flow_table;
    SwitchStats stats;
};

using NormalPortFn = std::function<std::uint16_t(const PacketHeader&)>;

// Reactive switch step: a flow-table hit handles the packet locally; a miss
// consults the controller (evaluate) and installs a microflow entry. A
// default NormalForwarding decision is resolved through `normal_port`
// before install, so the table only ever holds concrete actions.
Action switch_handle(SwitchState& state, const CompiledPolicy& cp,
                     const PacketHeader& packet, const NormalPortFn& normal_port);

// Packet literal: src=IPv4,dst=IPv4,sport=INT,dport=INT (keys in any
// order, each exactly once). Fills `error` on failure.
std::optional<PacketHeader> parse_packet(std::string_view spec, std::string* error = nullptr);

std::string packet_to_string(const PacketHeader& packet);

}  // namespace xdnp
