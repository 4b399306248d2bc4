#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xdnp/analyzer.hpp"
#include "xdnp/engine.hpp"
#include "xdnp/model.hpp"

namespace xdnp {

struct Host {
    std::string name;  // "h" + index
    Ipv4 ip;           // 10.0.0.<index>
    std::uint16_t port = 1;  // switch port = index
};

// One implicit switch with N directly attached hosts.
struct Topology {
    std::vector<Host> hosts;

    // Hosts h1..hN on ports 1..N with addresses 10.0.0.1..10.0.0.N.
    // host_count must be in 2..254.
    static Topology single(std::size_t host_count);

    const Host* host_by_ip(const Ipv4& ip) const;
    const Host* host_on_port(std::uint16_t port) const;
};

struct Delivery {
    enum class Outcome { Delivered, Lost };
    Outcome outcome = Outcome::Lost;
    const Host* host = nullptr;  // set iff Delivered
    std::string note;            // why a packet was lost

    bool delivered() const { return outcome == Outcome::Delivered; }
};

// Runs the packet through the switch. Drop loses it; Forward(p) reaches the
// host on port p, which discards frames whose destination IP is not its own
// (misdelivery). A destination IP owned by no host is lost without touching
// the switch.
Delivery deliver(const Topology& topo, const CompiledPolicy& cp,
                 SwitchState& state, const PacketHeader& packet);

enum class PingOutcome { Success, RequestLost, ReplyLost };

std::string_view ping_outcome_name(PingOutcome outcome);

// Echo request a->b then reply b->a, both with ports 0/0.
PingOutcome ping(const Topology& topo, const CompiledPolicy& cp,
                 SwitchState& state, const Host& from, const Host& to);

struct PingPair {
    std::string src;
    std::string dst;
    PingOutcome outcome = PingOutcome::Success;
};

struct PingReport {
    std::vector<PingPair> pairs;      // all ordered pairs, source-major order
    double request_loss_pct = 0.0;    // requests that never reached the target
    double roundtrip_loss_pct = 0.0;  // pairs without a completed round trip
};

// Pings every ordered host pair on one shared switch state.
PingReport pingall(const Topology& topo, const CompiledPolicy& cp, SwitchState& state);
PingReport pingall(const Topology& topo, const CompiledPolicy& cp);

// Text matrix (rows = source, columns = destination, cells ok/RQ/RP).
std::string render_matrix(const Topology& topo, const PingReport& report);

// {"pairs":[{"src","dst","outcome"}...],"request_loss_pct","roundtrip_loss_pct"}
std::string ping_report_json(const PingReport& report);

}  // namespace xdnp
