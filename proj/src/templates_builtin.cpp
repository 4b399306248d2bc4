#include "xdnp/codegen.hpp"

namespace xdnp {

// Reference controller target: a Floodlight OpenFlow module that registers a
// PACKET_IN listener and reactively installs exact-match flows. Emitted as
// text only; never compiled here.
Template builtin_floodlight_template() {
    Template t;
    t.id = "floodlight";
    t.extension = ".java";

    t.header = R"java(/*
 * {{class_name}}.java
 * Generated policy module. Do not edit; regenerate from the policy
 * document instead.
 */
package net.floodlightcontroller.generated;

import java.util.ArrayList;
import java.util.Collection;
import java.util.Collections;
import java.util.Map;

import org.projectfloodlight.openflow.protocol.OFFactory;
import org.projectfloodlight.openflow.protocol.OFFlowAdd;
import org.projectfloodlight.openflow.protocol.OFMessage;
import org.projectfloodlight.openflow.protocol.OFPacketIn;
import org.projectfloodlight.openflow.protocol.OFPacketOut;
import org.projectfloodlight.openflow.protocol.OFType;
import org.projectfloodlight.openflow.protocol.action.OFAction;
import org.projectfloodlight.openflow.protocol.match.Match;
import org.projectfloodlight.openflow.protocol.match.MatchField;
import org.projectfloodlight.openflow.types.EthType;
import org.projectfloodlight.openflow.types.IPv4Address;
import org.projectfloodlight.openflow.types.OFBufferId;
import org.projectfloodlight.openflow.types.OFPort;
import org.projectfloodlight.openflow.types.TransportPort;

import net.floodlightcontroller.core.FloodlightContext;
import net.floodlightcontroller.core.IFloodlightProviderService;
import net.floodlightcontroller.core.IOFMessageListener;
import net.floodlightcontroller.core.IOFSwitch;
import net.floodlightcontroller.core.module.FloodlightModuleContext;
import net.floodlightcontroller.core.module.FloodlightModuleException;
import net.floodlightcontroller.core.module.IFloodlightModule;
import net.floodlightcontroller.core.module.IFloodlightService;
import net.floodlightcontroller.packet.Ethernet;
import net.floodlightcontroller.packet.IPv4;
import net.floodlightcontroller.packet.TCP;
import net.floodlightcontroller.packet.UDP;

public class {{class_name}} implements IOFMessageListener, IFloodlightModule {

    private static final int FLOW_PRIORITY_BASE = 100;
    private static final int IDLE_TIMEOUT_SECONDS = 5;

    private IFloodlightProviderService floodlightProvider;

    @Override
    public String getName() {
        return "{{class_name}}";
    }

    @Override
    public boolean isCallbackOrderingPrereq(OFType type, String name) {
        return false;
    }

    @Override
    public boolean isCallbackOrderingPostreq(OFType type, String name) {
        return type.equals(OFType.PACKET_IN) && name.equals("forwarding");
    }

    @Override
    public Command receive(IOFSwitch sw, OFMessage msg, FloodlightContext cntx) {
        if (msg.getType() != OFType.PACKET_IN) {
            return Command.CONTINUE;
        }
        OFPacketIn pi = (OFPacketIn) msg;
        Ethernet eth = IFloodlightProviderService.bcStore.get(cntx,
                IFloodlightProviderService.CONTEXT_PI_PAYLOAD);
        if (!(eth.getPayload() instanceof IPv4)) {
            return Command.CONTINUE;
        }
        IPv4 ip = (IPv4) eth.getPayload();
        IPv4Address srcIp = ip.getSourceAddress();
        IPv4Address dstIp = ip.getDestinationAddress();
        int srcPort = 0;
        int dstPort = 0;
        if (ip.getPayload() instanceof TCP) {
            TCP tcp = (TCP) ip.getPayload();
            srcPort = tcp.getSourcePort().getPort();
            dstPort = tcp.getDestinationPort().getPort();
        } else if (ip.getPayload() instanceof UDP) {
            UDP udp = (UDP) ip.getPayload();
            srcPort = udp.getSourcePort().getPort();
            dstPort = udp.getDestinationPort().getPort();
        }
        return applyPolicy(sw, pi, srcIp, dstIp, srcPort, dstPort);
    }

    private Command applyPolicy(IOFSwitch sw, OFPacketIn pi,
            IPv4Address srcIp, IPv4Address dstIp, int srcPort, int dstPort) {
)java";

    t.branch = R"java(        // rule {{entry_index}} clause {{clause_index}} (priority {{priority}})
        if ({{predicate}}) {
            {{action}}
        }
)java";

    t.and_joiner = " && ";
    t.field_exprs = {
        {Field::SrcIp, R"(srcIp.equals(IPv4Address.of("{{value}}")))"},
        {Field::DstIp, R"(dstIp.equals(IPv4Address.of("{{value}}")))"},
        {Field::SrcPort, "srcPort == {{value}}"},
        {Field::DstPort, "dstPort == {{value}}"},
    };
    t.forward =
        "return installAndForward(sw, pi, srcIp, dstIp, srcPort, dstPort, "
        "OFPort.of({{port}}), {{priority}});";
    t.drop =
        "return installAndDrop(sw, pi, srcIp, dstIp, srcPort, dstPort, {{priority}});";

    t.default_normal = R"java(        // no rule matched: defer to the controller's standard forwarding
        return Command.CONTINUE;
)java";

    t.default_drop = R"java(        // no rule matched: this policy drops unmatched traffic
        return installAndDrop(sw, pi, srcIp, dstIp, srcPort, dstPort, 0);
)java";

    t.footer = R"java(    }

    private Command installAndForward(IOFSwitch sw, OFPacketIn pi,
            IPv4Address srcIp, IPv4Address dstIp, int srcPort, int dstPort,
            OFPort outPort, int priority) {
        OFFactory factory = sw.getOFFactory();
        ArrayList<OFAction> actions = new ArrayList<OFAction>();
        actions.add(factory.actions().buildOutput().setPort(outPort).build());
        OFFlowAdd flow = factory.buildFlowAdd()
                .setMatch(buildExactMatch(sw, srcIp, dstIp, srcPort, dstPort))
                .setActions(actions)
                .setPriority(FLOW_PRIORITY_BASE + priority)
                .setIdleTimeout(IDLE_TIMEOUT_SECONDS)
                .setBufferId(OFBufferId.NO_BUFFER)
                .build();
        sw.write(flow);
        pushPacket(sw, pi, outPort);
        return Command.STOP;
    }

    private Command installAndDrop(IOFSwitch sw, OFPacketIn pi,
            IPv4Address srcIp, IPv4Address dstIp, int srcPort, int dstPort,
            int priority) {
        OFFactory factory = sw.getOFFactory();
        OFFlowAdd flow = factory.buildFlowAdd()
                .setMatch(buildExactMatch(sw, srcIp, dstIp, srcPort, dstPort))
                .setActions(new ArrayList<OFAction>())
                .setPriority(FLOW_PRIORITY_BASE + priority)
                .setIdleTimeout(IDLE_TIMEOUT_SECONDS)
                .setBufferId(OFBufferId.NO_BUFFER)
                .build();
        sw.write(flow);
        return Command.STOP;
    }

    private Match buildExactMatch(IOFSwitch sw, IPv4Address srcIp, IPv4Address dstIp,
            int srcPort, int dstPort) {
        Match.Builder mb = sw.getOFFactory().buildMatch();
        mb.setExact(MatchField.ETH_TYPE, EthType.IPv4);
        mb.setExact(MatchField.IPV4_SRC, srcIp);
        mb.setExact(MatchField.IPV4_DST, dstIp);
        if (srcPort != 0 || dstPort != 0) {
            mb.setExact(MatchField.TCP_SRC, TransportPort.of(srcPort));
            mb.setExact(MatchField.TCP_DST, TransportPort.of(dstPort));
        }
        return mb.build();
    }

    private void pushPacket(IOFSwitch sw, OFPacketIn pi, OFPort outPort) {
        OFFactory factory = sw.getOFFactory();
        OFPacketOut po = factory.buildPacketOut()
                .setData(pi.getData())
                .setActions(Collections.singletonList(
                        (OFAction) factory.actions().buildOutput().setPort(outPort).build()))
                .setInPort(OFPort.CONTROLLER)
                .setBufferId(OFBufferId.NO_BUFFER)
                .build();
        sw.write(po);
    }

    @Override
    public Collection<Class<? extends IFloodlightService>> getModuleServices() {
        return null;
    }

    @Override
    public Map<Class<? extends IFloodlightService>, IFloodlightService> getServiceImpls() {
        return null;
    }

    @Override
    public Collection<Class<? extends IFloodlightService>> getModuleDependencies() {
        Collection<Class<? extends IFloodlightService>> deps =
                new ArrayList<Class<? extends IFloodlightService>>();
        deps.add(IFloodlightProviderService.class);
        return deps;
    }

    @Override
    public void init(FloodlightModuleContext context) throws FloodlightModuleException {
        floodlightProvider = context.getServiceImpl(IFloodlightProviderService.class);
    }

    @Override
    public void startUp(FloodlightModuleContext context) throws FloodlightModuleException {
        floodlightProvider.addOFMessageListener(OFType.PACKET_IN, this);
    }
}
)java";

    return t;
}

}  // namespace xdnp
