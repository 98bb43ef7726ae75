#include "oppccn/protocols.hpp"

namespace oppccn {

void MobccnProtocol::start(Sim& sim) {
  nodes_.assign(sim.inputs().n_nodes, Node{});
  for (const auto& [producer, names] : sim.inputs().placement.by_producer) {
    Node& node = nodes_[producer];
    std::set<std::int32_t> types;
    for (const ContentName& n : names) {
      node.routing.cs.insert(n, cfg_.sizes.payload_bytes, 0);
      types.insert(n.content_type);
    }
    // Initial providers start with a high direct utility.
    for (std::int32_t t : types) {
      node.routing.util.set_direct(t, cfg_.utility.u_cap / 2.0);
    }
  }
}

void MobccnProtocol::contact_up(Sim& sim, NodeId a, NodeId b) {
  Node& na = nodes_[a];
  Node& nb = nodes_[b];
  na.routing.peer_ict.record(b, sim.now(), cfg_.utility);
  nb.routing.peer_ict.record(a, sim.now(), cfg_.utility);

  // Symmetric Hello exchange built from the pre-contact state of both sides.
  Packet hello_a = build_hello(na.routing);
  Packet hello_b = build_hello(nb.routing);
  sim.count_transmission(a, b, hello_a);
  sim.count_transmission(b, a, hello_b);
  process_hello(nb.routing, hello_a, a, sim.now(), cfg_.utility);
  process_hello(na.routing, hello_b, b, sim.now(), cfg_.utility);

  // Data owed to the peer across the disconnection.
  for (Packet& d : na.fwd.data_outbox.take(b)) sim.send(a, b, d);
  for (Packet& d : nb.fwd.data_outbox.take(a)) sim.send(b, a, d);

  flush_interests(sim, a);
  flush_interests(sim, b);
}

void MobccnProtocol::contact_down(Sim& sim, NodeId a, NodeId b) {
  (void)sim;
  nodes_[a].routing.cnu.remove_neighbor(b);
  nodes_[b].routing.cnu.remove_neighbor(a);
}

void MobccnProtocol::request(Sim& sim, const RequestEvent& ev) {
  Packet interest = make_interest(ev.name, ev.consumer, sim.new_instance(), ev.rid);
  handle_interest(sim, ev.consumer, ev.consumer, interest);
}

void MobccnProtocol::receive(Sim& sim, NodeId at, NodeId from, const Packet& pkt) {
  switch (pkt.kind) {
    case PacketKind::Hello:
      process_hello(nodes_[at].routing, pkt, from, sim.now(), cfg_.utility);
      flush_interests(sim, at);
      break;
    case PacketKind::Interest:
      handle_interest(sim, at, from, pkt);
      break;
    case PacketKind::Data:
      handle_data(sim, at, pkt);
      break;
  }
}

void MobccnProtocol::send_data_reply(Sim& sim, NodeId from, NodeId to, const ContentName& n) {
  const ContentStore::Entry* e = nodes_[from].routing.cs.find(n);
  Packet data = make_data(n, e->payload_bytes, sim.new_instance());
  sim.send(from, to, data);
}

void MobccnProtocol::handle_interest(Sim& sim, NodeId at, NodeId from, const Packet& pkt) {
  Node& node = nodes_[at];
  const InterestDecision d =
      process_interest(node.routing, node.fwd, pkt, from, sim.neighbors(at));
  switch (d.outcome) {
    case InterestOutcome::ReturnData:
      if (d.target == at) {
        // The consumer's own request hit the local Content Store.
        sim.deliver_to_consumer(at, pkt.name, 0);
      } else {
        send_data_reply(sim, at, d.target, pkt.name);
      }
      break;
    case InterestOutcome::Registered: {
      auto retx = maybe_retransmit(node.fwd, pkt.name, cfg_.retransmission);
      if (retx) {
        retx->instance = sim.new_instance();  // a retransmission is a fresh copy
        const InterestDecision rd =
            dispatch_interest(node.routing, node.fwd, *retx, sim.neighbors(at));
        if (rd.outcome == InterestOutcome::Forwarded) sim.send(at, rd.target, *retx);
      }
      break;
    }
    case InterestOutcome::Forwarded:
      sim.send(at, d.target, pkt);
      break;
    case InterestOutcome::Held:
      break;
    case InterestOutcome::Dropped:
      sim.count_dropped_interest();
      break;
  }
}

void MobccnProtocol::handle_data(Sim& sim, NodeId at, const Packet& pkt) {
  Node& node = nodes_[at];
  const DataActions actions =
      process_data(node.routing.cs, node.fwd, pkt, at, sim.neighbors(at), cfg_.caching);
  if (actions.unsolicited) {
    if (sim.is_consumer(at)) sim.deliver_to_consumer(at, pkt.name, pkt.hops);
    return;
  }
  for (NodeId face : actions.forward_now) sim.send(at, face, pkt);
  if (actions.delivered_locally) {
    const auto arrival = sim.deliver_to_consumer(at, pkt.name, pkt.hops);
    if (arrival == RequestTracker::Arrival::Untracked) {
      throw SimError("data delivered to a node that never requested it");
    }
  }
  if (actions.cs_gained_new_type) rehello(sim, at);
}

void MobccnProtocol::flush_interests(Sim& sim, NodeId at) {
  Node& node = nodes_[at];
  for (FlushedInterest& f : flush_held_interests(node.routing, node.fwd, sim.neighbors(at))) {
    sim.send(at, f.target, f.packet);
  }
}

void MobccnProtocol::rehello(Sim& sim, NodeId at) {
  // The CS gained a new content type mid-contact: re-advertise so current
  // neighbours learn about it without waiting for the next encounter.
  if (sim.neighbors(at).empty()) return;
  const Packet hello = build_hello(nodes_[at].routing);
  for (NodeId m : sim.neighbors(at)) sim.send(at, m, hello);
}

std::int64_t MobccnProtocol::total_cs_entries() const {
  std::int64_t total = 0;
  for (const Node& n : nodes_) total += static_cast<std::int64_t>(n.routing.cs.size());
  return total;
}

void MobccnProtocol::count_live_interests(std::map<InstanceId, std::int64_t>& copies) const {
  for (const Node& n : nodes_) {
    for (const auto& [name, pkt] : n.fwd.outbox.held()) {
      (void)name;
      copies[pkt.instance] += 1;
    }
  }
}

const ContentStore* MobccnProtocol::content_store(NodeId node) const {
  return &nodes_[node].routing.cs;
}

}  // namespace oppccn
