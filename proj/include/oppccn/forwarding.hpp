#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "oppccn/core.hpp"
#include "oppccn/routing.hpp"
#include "oppccn/tables.hpp"

namespace oppccn {

/// Interests waiting for a suitable contact. At most one held Interest per
/// content name per node.
class PendingOutbox {
 public:
  /// Returns false when an Interest for the name is already held.
  bool put(const Packet& interest);
  void erase(const ContentName& n) { held_.erase(n); }
  bool holds(const ContentName& n) const { return held_.count(n) != 0; }
  const std::map<ContentName, Packet>& held() const { return held_; }
  std::map<ContentName, Packet>& held() { return held_; }

 private:
  std::map<ContentName, Packet> held_;
};

/// Data copies owed to breadcrumb faces that are not currently in contact;
/// carried until the face is met again.
class DataOutbox {
 public:
  void put(NodeId face, const Packet& data) { held_[face].push_back(data); }
  /// Removes and returns all Data held for `face`, in arrival order.
  std::vector<Packet> take(NodeId face);
  const std::map<NodeId, std::vector<Packet>>& held() const { return held_; }

 private:
  std::map<NodeId, std::vector<Packet>> held_;
};

struct RetransmissionPolicy {
  bool enabled = true;
  std::int64_t threshold = 3;  // duplicate-arrival count triggering a retransmit
};

struct ForwardingState {
  Pit pit;
  PendingOutbox outbox;
  DataOutbox data_outbox;
};

enum class InterestOutcome { ReturnData, Registered, Forwarded, Held, Dropped };

struct InterestDecision {
  InterestOutcome outcome = InterestOutcome::Dropped;
  NodeId target = kNoNode;  // ReturnData: requester; Forwarded: chosen forwarder
};

/// Algorithm 2: processing of an Interest received from `from`. Mutates the
/// PIT and, for the Held outcome, the pending outbox. The caller performs
/// the sends implied by the returned decision.
InterestDecision process_interest(MobccnState& routing, ForwardingState& fwd,
                                  const Packet& interest, NodeId from,
                                  const std::set<NodeId>& current_neighbors);

/// Re-runs the forwarding decision (Algorithm 2 lines 9-18) for a packet
/// without touching the PIT. Used for retransmissions and held flushes.
InterestDecision dispatch_interest(MobccnState& routing, ForwardingState& fwd,
                                   const Packet& interest,
                                   const std::set<NodeId>& current_neighbors);

/// Retransmission rule: after a duplicate arrival, the first Interest is due
/// for re-dispatch when the arrival count reaches a multiple of the
/// threshold and the entry is still unsatisfied. The caller stamps the
/// returned packet as a fresh copy and runs it through dispatch_interest.
std::optional<Packet> maybe_retransmit(const ForwardingState& fwd, const ContentName& n,
                                       const RetransmissionPolicy& policy);

struct DataActions {
  bool unsolicited = false;        // no live PIT entry
  bool delivered_locally = false;  // the entry carried the node's own face
  bool cs_gained_new_type = false; // CS insert added the first chunk of a type
  std::vector<NodeId> forward_now; // faces currently in contact
};

/// Breadcrumb Data return: fan a received Data packet back to every
/// registered face, deferring faces that are out of contact. Satisfying the
/// PIT entry also cancels any held Interest for the name. The final
/// consumer always stores the content; intermediate caching is controlled
/// by `caching_enabled`.
DataActions process_data(ContentStore& cs, ForwardingState& fwd, const Packet& data,
                         NodeId self, const std::set<NodeId>& current_neighbors,
                         bool caching_enabled);

struct FlushedInterest {
  Packet packet;
  NodeId target = kNoNode;
};

/// Re-evaluates all held Interests; forwards those whose best forwarder is
/// now in contact and removes them from the outbox.
std::vector<FlushedInterest> flush_held_interests(MobccnState& routing, ForwardingState& fwd,
                                                  const std::set<NodeId>& current_neighbors);

}  // namespace oppccn
