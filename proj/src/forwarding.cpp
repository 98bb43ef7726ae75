#include "oppccn/forwarding.hpp"

namespace oppccn {

bool PendingOutbox::put(const Packet& interest) {
  auto [it, inserted] = held_.emplace(interest.name, interest);
  (void)it;
  return inserted;
}

std::vector<Packet> DataOutbox::take(NodeId face) {
  auto it = held_.find(face);
  if (it == held_.end()) return {};
  std::vector<Packet> out = std::move(it->second);
  held_.erase(it);
  return out;
}

InterestDecision dispatch_interest(MobccnState& routing, ForwardingState& fwd,
                                   const Packet& interest,
                                   const std::set<NodeId>& current_neighbors) {
  // Never hand an Interest back down its own breadcrumb: every registered
  // face already has a PIT entry that would silently absorb it.
  std::vector<NodeId> exclude;
  if (const PitEntry* e = fwd.pit.find(interest.name)) exclude = e->faces;

  auto choice = best_forwarder(routing.fib, routing.cnu, interest.name.content_type,
                               current_neighbors, exclude);
  if (!choice) {
    if (best_forwarder(routing.fib, routing.cnu, interest.name.content_type,
                       current_neighbors)) {
      // Routing information exists but points only at breadcrumb faces:
      // wait for a better contact instead of dropping.
      fwd.outbox.put(interest);
      return {InterestOutcome::Held, kNoNode};
    }
    return {InterestOutcome::Dropped, kNoNode};
  }
  if (choice->in_contact) {
    return {InterestOutcome::Forwarded, choice->node};
  }
  fwd.outbox.put(interest);  // keeps the existing one if already held
  return {InterestOutcome::Held, kNoNode};
}

InterestDecision process_interest(MobccnState& routing, ForwardingState& fwd,
                                  const Packet& interest, NodeId from,
                                  const std::set<NodeId>& current_neighbors) {
  if (routing.cs.contains(interest.name)) {
    return {InterestOutcome::ReturnData, from};
  }
  const PitResult r = fwd.pit.register_interest(interest.name, from, interest);
  if (r == PitResult::FaceAdded) {
    return {InterestOutcome::Registered, kNoNode};
  }
  return dispatch_interest(routing, fwd, interest, current_neighbors);
}

std::optional<Packet> maybe_retransmit(const ForwardingState& fwd, const ContentName& n,
                                       const RetransmissionPolicy& policy) {
  if (!policy.enabled) return std::nullopt;
  const PitEntry* e = fwd.pit.find(n);
  if (e == nullptr) return std::nullopt;  // satisfied entries are removed
  if (e->arrivals % policy.threshold != 0) return std::nullopt;
  return e->first_interest;
}

DataActions process_data(ContentStore& cs, ForwardingState& fwd, const Packet& data,
                         NodeId self, const std::set<NodeId>& current_neighbors,
                         bool caching_enabled) {
  DataActions actions;
  PitEntry* e = fwd.pit.find(data.name);
  if (e == nullptr) {
    actions.unsolicited = true;
    return actions;
  }
  for (NodeId face : e->faces) {
    if (face == self) {
      actions.delivered_locally = true;
    } else if (current_neighbors.count(face) != 0) {
      actions.forward_now.push_back(face);
    } else {
      fwd.data_outbox.put(face, data);
    }
  }
  fwd.pit.erase(data.name);
  fwd.outbox.erase(data.name);  // the held Interest lost its purpose

  if (caching_enabled || actions.delivered_locally) {
    const bool had_type = cs.holds_type(data.name.content_type);
    if (cs.insert(data.name, data.payload_bytes, data.hops) && !had_type) {
      actions.cs_gained_new_type = true;
    }
  }
  return actions;
}

std::vector<FlushedInterest> flush_held_interests(MobccnState& routing, ForwardingState& fwd,
                                                  const std::set<NodeId>& current_neighbors) {
  std::vector<FlushedInterest> out;
  auto& held = fwd.outbox.held();
  for (auto it = held.begin(); it != held.end();) {
    std::vector<NodeId> exclude;
    if (const PitEntry* e = fwd.pit.find(it->first)) exclude = e->faces;
    auto choice = best_forwarder(routing.fib, routing.cnu, it->first.content_type,
                                 current_neighbors, exclude);
    if (choice && choice->in_contact) {
      out.push_back({it->second, choice->node});
      it = held.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

}  // namespace oppccn
