#include "xdnp/netsim.hpp"

#include <algorithm>
#include <cassert>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace xdnp {

Topology Topology::single(std::size_t host_count) {
    assert(host_count >= 2 && host_count <= 254);
    Topology topo;
    topo.hosts.reserve(host_count);
    for (std::size_t i = 1; i <= host_count; ++i) {
        Host host;
        host.name = "h" + std::to_string(i);
        host.ip = Ipv4{{10, 0, 0, static_cast<std::uint8_t>(i)}};
        host.port = static_cast<std::uint16_t>(i);
        topo.hosts.push_back(std::move(host));
    }
    return topo;
}

const Host* Topology::host_by_ip(const Ipv4& ip) const {
    for (const Host& host : hosts) {
        if (host.ip == ip) return &host;
    }
    return nullptr;
}

const Host* Topology::host_on_port(std::uint16_t port) const {
    for (const Host& host : hosts) {
        if (host.port == port) return &host;
    }
    return nullptr;
}

Delivery deliver(const Topology& topo, const CompiledPolicy& cp,
                 SwitchState& state, const PacketHeader& packet) {
    if (topo.host_by_ip(packet.dst_ip) == nullptr) {
        return {Delivery::Outcome::Lost, nullptr,
                "no such host: " + packet.dst_ip.to_string()};
    }
    const NormalPortFn normal_port = [&topo](const PacketHeader& pkt) {
        return topo.host_by_ip(pkt.dst_ip)->port;  // checked above; cache-hit pkts repeat it
    };
    const Action action = switch_handle(state, cp, packet, normal_port);
    if (std::holds_alternative<Drop>(action)) {
        return {Delivery::Outcome::Lost, nullptr, "dropped by policy"};
    }
    const std::uint16_t port = std::get<Forward>(action).port;
    const Host* at_port = topo.host_on_port(port);
    if (at_port == nullptr) {
        return {Delivery::Outcome::Lost, nullptr,
                "no host on port " + std::to_string(port)};
    }
    if (at_port->ip != packet.dst_ip) {
        // misdelivery: the frame reaches a host that is not the IP
        // destination, which discards it
        return {Delivery::Outcome::Lost, nullptr, "misdelivered to " + at_port->name};
    }
    return {Delivery::Outcome::Delivered, at_port, ""};
}

std::string_view ping_outcome_name(PingOutcome outcome) {
    switch (outcome) {
        case PingOutcome::Success: return "Success";
        case PingOutcome::RequestLost: return "RequestLost";
        case PingOutcome::ReplyLost: return "ReplyLost";
    }
    return "Success";
}

PingOutcome ping(const Topology& topo, const CompiledPolicy& cp,
                 SwitchState& state, const Host& from, const Host& to) {
    const PacketHeader request{from.ip, to.ip, 0, 0};
    if (!deliver(topo, cp, state, request).delivered()) return PingOutcome::RequestLost;
    const PacketHeader reply{to.ip, from.ip, 0, 0};
    if (!deliver(topo, cp, state, reply).delivered()) return PingOutcome::ReplyLost;
    return PingOutcome::Success;
}

PingReport pingall(const Topology& topo, const CompiledPolicy& cp, SwitchState& state) {
    PingReport report;
    std::size_t requests_lost = 0;
    std::size_t successes = 0;
    for (const Host& from : topo.hosts) {
        for (const Host& to : topo.hosts) {
            if (&from == &to) continue;
            const PingOutcome outcome = ping(topo, cp, state, from, to);
            report.pairs.push_back({from.name, to.name, outcome});
            requests_lost += outcome == PingOutcome::RequestLost;
            successes += outcome == PingOutcome::Success;
        }
    }
    if (!report.pairs.empty()) {
        const double pairs = static_cast<double>(report.pairs.size());
        report.request_loss_pct = 100.0 * static_cast<double>(requests_lost) / pairs;
        report.roundtrip_loss_pct =
            100.0 * static_cast<double>(report.pairs.size() - successes) / pairs;
    }
    return report;
}

PingReport pingall(const Topology& topo, const CompiledPolicy& cp) {
    SwitchState state;
    return pingall(topo, cp, state);
}

std::string render_matrix(const Topology& topo, const PingReport& report) {
    std::size_t width = 2;  // widest cell: ok/RQ/RP
    for (const Host& host : topo.hosts) width = std::max(width, host.name.size());
    const auto cell_code = [](PingOutcome outcome) -> std::string_view {
        switch (outcome) {
            case PingOutcome::Success: return "ok";
            case PingOutcome::RequestLost: return "RQ";
            case PingOutcome::ReplyLost: return "RP";
        }
        return "ok";
    };

    // report.pairs is source-major over all ordered pairs
    std::size_t next_pair = 0;
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(width + 2)) << "";
    for (const Host& to : topo.hosts) {
        out << std::setw(static_cast<int>(width + 2)) << to.name;
    }
    out << '\n';
    for (const Host& from : topo.hosts) {
        out << std::setw(static_cast<int>(width + 2)) << from.name;
        for (const Host& to : topo.hosts) {
            if (&from == &to) {
                out << std::setw(static_cast<int>(width + 2)) << "-";
            } else {
                out << std::setw(static_cast<int>(width + 2))
                    << cell_code(report.pairs[next_pair++].outcome);
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string ping_report_json(const PingReport& report) {
    nlohmann::ordered_json doc;
    doc["pairs"] = nlohmann::ordered_json::array();
    for (const PingPair& pair : report.pairs) {
        doc["pairs"].push_back({{"src", pair.src},
                                {"dst", pair.dst},
                                {"outcome", std::string(ping_outcome_name(pair.outcome))}});
    }
    doc["request_loss_pct"] = report.request_loss_pct;
    doc["roundtrip_loss_pct"] = report.roundtrip_loss_pct;
    return doc.dump(2) + "\n";
}

}  // namespace xdnp
