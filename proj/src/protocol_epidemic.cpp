#include "oppccn/protocols.hpp"

namespace oppccn {

// ---------------------------------------------------------------------------
// Ideal Epidemic

void IdealEpidemicProtocol::start(Sim& sim) {
  nodes_.assign(sim.inputs().n_nodes, Node{});
  for (const auto& [producer, names] : sim.inputs().placement.by_producer) {
    for (const ContentName& n : names) {
      nodes_[producer].cs.insert(n, cfg_.sizes.payload_bytes, 0);
    }
  }
}

bool IdealEpidemicProtocol::can_answer(const Sim& sim, NodeId at, const ContentName& n) const {
  if (!nodes_[at].cs.contains(n)) return false;
  return cfg_.caching || sim.is_producer(at);
}

void IdealEpidemicProtocol::sync_contents(Sim& sim, NodeId from, NodeId to) {
  for (const auto& [name, entry] : nodes_[from].cs.entries()) {
    if (nodes_[to].cs.contains(name)) continue;
    Packet d = make_data(name, entry.payload_bytes, 0);  // instance 0: stored-content sync
    d.hops = entry.hops;
    sim.send(from, to, d);
  }
}

void IdealEpidemicProtocol::offer_instances(Sim& sim, NodeId from, NodeId to) {
  for (const auto& [iid, pkt] : nodes_[from].datas) {
    if (nodes_[to].datas.count(iid) == 0) sim.send(from, to, pkt);
  }
  for (const auto& [iid, pkt] : nodes_[from].interests) {
    if (nodes_[to].interests.count(iid) == 0) sim.send(from, to, pkt);
  }
}

void IdealEpidemicProtocol::contact_up(Sim& sim, NodeId a, NodeId b) {
  if (cfg_.caching) {
    sync_contents(sim, a, b);
    sync_contents(sim, b, a);
  }
  offer_instances(sim, a, b);
  offer_instances(sim, b, a);
}

void IdealEpidemicProtocol::accept_content(Sim& sim, NodeId at, const ContentName& n,
                                           std::int32_t hops) {
  Node& node = nodes_[at];
  const bool inserted = node.cs.insert(n, cfg_.sizes.payload_bytes, hops);
  sim.deliver_to_consumer(at, n, hops);
  if (inserted && cfg_.caching) {
    for (NodeId m : sim.neighbors(at)) {
      if (nodes_[m].cs.contains(n)) continue;
      Packet d = make_data(n, cfg_.sizes.payload_bytes, 0);
      d.hops = hops;
      sim.send(at, m, d);
    }
  }
}

void IdealEpidemicProtocol::accept_data_instance(Sim& sim, NodeId at, const Packet& pkt) {
  Node& node = nodes_[at];
  if (node.datas.count(pkt.instance) != 0) return;
  node.datas.emplace(pkt.instance, pkt);
  if (cfg_.caching) {
    node.cs.insert(pkt.name, pkt.payload_bytes, pkt.hops);
  }
  const auto arrival = sim.deliver_to_consumer(at, pkt.name, pkt.hops);
  if (arrival == RequestTracker::Arrival::Delivered) {
    node.cs.insert(pkt.name, pkt.payload_bytes, pkt.hops);  // delivery implies possession
  }
  for (NodeId m : sim.neighbors(at)) {
    if (nodes_[m].datas.count(pkt.instance) == 0) sim.send(at, m, pkt);
  }
}

void IdealEpidemicProtocol::accept_interest_instance(Sim& sim, NodeId at, const Packet& pkt) {
  Node& node = nodes_[at];
  if (node.interests.count(pkt.instance) != 0) return;
  node.interests.emplace(pkt.instance, pkt);

  if (can_answer(sim, at, pkt.name) && node.replied.count(pkt.instance) == 0) {
    node.replied.insert(pkt.instance);
    Packet reply = make_data(pkt.name, node.cs.find(pkt.name)->payload_bytes,
                             sim.new_instance());
    node.datas.emplace(reply.instance, reply);
    for (NodeId m : sim.neighbors(at)) {
      if (nodes_[m].datas.count(reply.instance) == 0) sim.send(at, m, reply);
    }
  }
  for (NodeId m : sim.neighbors(at)) {
    if (nodes_[m].interests.count(pkt.instance) == 0) sim.send(at, m, pkt);
  }
}

void IdealEpidemicProtocol::request(Sim& sim, const RequestEvent& ev) {
  Node& node = nodes_[ev.consumer];
  if (node.cs.contains(ev.name)) {
    sim.deliver_to_consumer(ev.consumer, ev.name, 0);
    return;
  }
  for (const auto& [iid, pkt] : node.datas) {
    (void)iid;
    if (pkt.name == ev.name) {
      // Already carried by the flooding layer: possession, not a transfer.
      sim.deliver_to_consumer(ev.consumer, ev.name, 0);
      node.cs.insert(pkt.name, pkt.payload_bytes, pkt.hops);
      return;
    }
  }
  Packet interest = make_interest(ev.name, ev.consumer, sim.new_instance(), ev.rid);
  accept_interest_instance(sim, ev.consumer, interest);
}

void IdealEpidemicProtocol::receive(Sim& sim, NodeId at, NodeId from, const Packet& pkt) {
  (void)from;
  switch (pkt.kind) {
    case PacketKind::Data:
      if (pkt.instance == 0) {
        accept_content(sim, at, pkt.name, pkt.hops);
      } else {
        accept_data_instance(sim, at, pkt);
      }
      break;
    case PacketKind::Interest:
      accept_interest_instance(sim, at, pkt);
      break;
    case PacketKind::Hello:
      throw SimError("ideal epidemic exchanges no Hello packets");
  }
}

std::int64_t IdealEpidemicProtocol::total_cs_entries() const {
  std::int64_t total = 0;
  for (const Node& n : nodes_) total += static_cast<std::int64_t>(n.cs.size());
  return total;
}

const ContentStore* IdealEpidemicProtocol::content_store(NodeId node) const {
  return &nodes_[node].cs;
}

// ---------------------------------------------------------------------------
// Epidemic-CCN-1copy

void Epi1CopyProtocol::start(Sim& sim) {
  nodes_.assign(sim.inputs().n_nodes, Node{});
  for (const auto& [producer, names] : sim.inputs().placement.by_producer) {
    for (const ContentName& n : names) {
      nodes_[producer].cs.insert(n, cfg_.sizes.payload_bytes, 0);
    }
  }
}

void Epi1CopyProtocol::contact_up(Sim& sim, NodeId a, NodeId b) {
  for (Packet& d : nodes_[a].fwd.data_outbox.take(b)) sim.send(a, b, d);
  for (Packet& d : nodes_[b].fwd.data_outbox.take(a)) sim.send(b, a, d);
  offer_carried(sim, a, b);
  offer_carried(sim, b, a);
}

void Epi1CopyProtocol::offer_carried(Sim& sim, NodeId holder, NodeId neighbor) {
  const std::uint64_t cid = sim.contact_id(holder, neighbor);
  if (cid == 0) return;
  Node& node = nodes_[holder];
  std::vector<InstanceId> iids;
  iids.reserve(node.carried.size());
  for (const auto& [iid, c] : node.carried) {
    (void)c;
    iids.push_back(iid);
  }
  for (InstanceId iid : iids) {
    auto it = node.carried.find(iid);
    if (it == node.carried.end()) continue;
    Carried& c = it->second;
    if (!c.offered_contacts.insert(cid).second) continue;  // one coin per contact interval
    if (epi1copy_transfer(sim.coins().next_double(), cfg_.forward_prob)) {
      Packet pkt = c.pkt;
      node.carried.erase(it);
      sim.send(holder, neighbor, pkt);
    }
  }
}

void Epi1CopyProtocol::carry_and_offer(Sim& sim, NodeId at, const Packet& pkt) {
  auto [it, inserted] = nodes_[at].carried.emplace(pkt.instance, Carried{pkt, {}});
  (void)inserted;
  // Offer over every live contact, ascending neighbour id, until handed off.
  for (NodeId m : sim.neighbors(at)) {
    const std::uint64_t cid = sim.contact_id(at, m);
    auto cit = nodes_[at].carried.find(pkt.instance);
    if (cit == nodes_[at].carried.end()) return;  // already transferred
    if (!cit->second.offered_contacts.insert(cid).second) continue;
    if (epi1copy_transfer(sim.coins().next_double(), cfg_.forward_prob)) {
      Packet moving = cit->second.pkt;
      nodes_[at].carried.erase(cit);
      sim.send(at, m, moving);
      return;
    }
  }
}

void Epi1CopyProtocol::handle_interest(Sim& sim, NodeId at, NodeId from, const Packet& pkt) {
  Node& node = nodes_[at];
  if (node.cs.contains(pkt.name)) {
    if (from == at) {
      sim.deliver_to_consumer(at, pkt.name, 0);
    } else {
      Packet data = make_data(pkt.name, node.cs.find(pkt.name)->payload_bytes,
                              sim.new_instance());
      sim.send(at, from, data);
    }
    return;
  }
  const PitResult r = node.fwd.pit.register_interest(pkt.name, from, pkt);
  if (r == PitResult::NewEntry) {
    carry_and_offer(sim, at, pkt);
    return;
  }
  // A node that already saw an Interest for this content: without
  // retransmission the copy is absorbed into the breadcrumb state, with it
  // every Interest packet walks independently.
  if (cfg_.retransmission.enabled) {
    carry_and_offer(sim, at, pkt);
  }
}

void Epi1CopyProtocol::handle_data(Sim& sim, NodeId at, const Packet& pkt) {
  Node& node = nodes_[at];
  const DataActions actions =
      process_data(node.cs, node.fwd, pkt, at, sim.neighbors(at), cfg_.caching);
  if (actions.unsolicited) {
    if (sim.is_consumer(at)) sim.deliver_to_consumer(at, pkt.name, pkt.hops);
    return;
  }
  // The walk for this content ends here: the content has been found.
  for (auto it = node.carried.begin(); it != node.carried.end();) {
    if (it->second.pkt.name == pkt.name) {
      it = node.carried.erase(it);
    } else {
      ++it;
    }
  }
  for (NodeId face : actions.forward_now) sim.send(at, face, pkt);
  if (actions.delivered_locally) {
    const auto arrival = sim.deliver_to_consumer(at, pkt.name, pkt.hops);
    if (arrival == RequestTracker::Arrival::Untracked) {
      throw SimError("data delivered to a node that never requested it");
    }
  }
}

void Epi1CopyProtocol::request(Sim& sim, const RequestEvent& ev) {
  Packet interest = make_interest(ev.name, ev.consumer, sim.new_instance(), ev.rid);
  handle_interest(sim, ev.consumer, ev.consumer, interest);
}

void Epi1CopyProtocol::receive(Sim& sim, NodeId at, NodeId from, const Packet& pkt) {
  switch (pkt.kind) {
    case PacketKind::Interest:
      handle_interest(sim, at, from, pkt);
      break;
    case PacketKind::Data:
      handle_data(sim, at, pkt);
      break;
    case PacketKind::Hello:
      throw SimError("epidemic-ccn-1copy exchanges no Hello packets");
  }
}

std::int64_t Epi1CopyProtocol::total_cs_entries() const {
  std::int64_t total = 0;
  for (const Node& n : nodes_) total += static_cast<std::int64_t>(n.cs.size());
  return total;
}

void Epi1CopyProtocol::count_live_interests(std::map<InstanceId, std::int64_t>& copies) const {
  for (const Node& n : nodes_) {
    for (const auto& [iid, c] : n.carried) {
      (void)c;
      copies[iid] += 1;
    }
  }
}

const ContentStore* Epi1CopyProtocol::content_store(NodeId node) const {
  return &nodes_[node].cs;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Protocol> make_protocol(const ProtocolConfig& cfg) {
  switch (cfg.kind) {
    case ProtocolKind::Mobccn:
      return std::make_unique<MobccnProtocol>(cfg);
    case ProtocolKind::EpidemicIdeal:
      return std::make_unique<IdealEpidemicProtocol>(cfg);
    case ProtocolKind::Epi1Copy:
      return std::make_unique<Epi1CopyProtocol>(cfg);
  }
  throw std::invalid_argument("unknown protocol kind");
}

}  // namespace oppccn
