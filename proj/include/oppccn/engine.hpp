#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "oppccn/core.hpp"
#include "oppccn/forwarding.hpp"
#include "oppccn/metrics.hpp"
#include "oppccn/mobility.hpp"
#include "oppccn/rng.hpp"
#include "oppccn/routing.hpp"
#include "oppccn/workload.hpp"

namespace oppccn {

/// Thrown when a run cannot continue (malformed trace, accounting bug,
/// runaway cascade).
class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProtocolKind { Mobccn, EpidemicIdeal, Epi1Copy };

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::Mobccn;
  std::string name = "mobccn";
  bool caching = true;
  RetransmissionPolicy retransmission{true, 3};
  double forward_prob = 0.5;
  UtilityParams utility;
  SizeModel sizes;
};

ProtocolConfig protocol_from_name(const std::string& name);

/// Everything one run consumes. Trace and workload are protocol-independent
/// so different protocols can be compared on identical inputs.
struct RunInputs {
  std::int32_t n_nodes = 0;
  std::int32_t n_communities = 1;
  double duration = 86400.0;
  ContactTrace trace;
  std::vector<RequestEvent> requests;
  Placement placement;
  Roles roles;
  std::uint64_t coin_seed = 1;
};

class Sim;

/// A protocol binds per-node state to the engine's events. All hooks run on
/// the engine's single logical thread.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual void start(Sim& sim) = 0;
  virtual void contact_up(Sim& sim, NodeId a, NodeId b) = 0;
  virtual void contact_down(Sim& sim, NodeId a, NodeId b) = 0;
  virtual void request(Sim& sim, const RequestEvent& ev) = 0;
  virtual void receive(Sim& sim, NodeId at, NodeId from, const Packet& pkt) = 0;
  virtual std::int64_t total_cs_entries() const = 0;

  /// At-rest Interest copies per instance, for the single-copy scan.
  virtual void count_live_interests(std::map<InstanceId, std::int64_t>& copies) const {
    (void)copies;
  }
  virtual const ContentStore* content_store(NodeId node) const {
    (void)node;
    return nullptr;
  }
};

std::unique_ptr<Protocol> make_protocol(const ProtocolConfig& cfg);

struct Transmission {
  double time = 0.0;
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  PacketKind kind = PacketKind::Interest;
  ContentName name{};
  InstanceId instance = 0;
  std::int32_t hops = 0;
};

/// Deterministic discrete-event executor: replays a contact trace and a
/// request workload against one protocol. Contacts have infinite bandwidth:
/// packets handed to a node are processed immediately and may trigger
/// further sends within the same instant, repeated to quiescence.
class Sim {
 public:
  Sim(const RunInputs& inputs, const ProtocolConfig& pcfg, Protocol& protocol);

  MetricsReport run();

  // Services available to protocols.
  double now() const { return now_; }
  const RunInputs& inputs() const { return *inputs_; }
  const ProtocolConfig& pcfg() const { return *pcfg_; }
  const std::set<NodeId>& neighbors(NodeId n) const { return neighbors_[n]; }
  bool in_contact(NodeId a, NodeId b) const { return neighbors_[a].count(b) != 0; }
  /// Unique id of the live contact interval between a and b (0 if down).
  std::uint64_t contact_id(NodeId a, NodeId b) const;
  bool is_producer(NodeId n) const { return producers_.count(n) != 0; }
  bool is_consumer(NodeId n) const { return consumers_.count(n) != 0; }

  InstanceId new_instance() { return ++instance_counter_; }
  RngStream& coins() { return coins_; }

  /// Copies the packet, increments its hop count, accounts bytes and queues
  /// the delivery for the cascade.
  void send(NodeId from, NodeId to, const Packet& pkt);
  /// Accounts a transmission whose processing the protocol performs itself
  /// (synchronous Hello exchange).
  void count_transmission(NodeId from, NodeId to, const Packet& pkt);

  /// Data for `name` reached `consumer` (transmission or local possession).
  RequestTracker::Arrival deliver_to_consumer(NodeId consumer, const ContentName& name,
                                              std::int32_t hops);
  bool consumer_has_outstanding(NodeId consumer, const ContentName& name) const {
    return tracker_.has_outstanding(consumer, name);
  }
  void count_dropped_interest() { report_.dropped_interests += 1; }

  void enable_txlog() { log_tx_ = true; }
  const std::vector<Transmission>& txlog() const { return txlog_; }

  /// Invoked after every event once the cascade has quiesced (invariant
  /// scans in tests).
  std::function<void(const Sim&)> post_event_hook;

  const Protocol& protocol() const { return *protocol_; }

 private:
  struct Delivery {
    NodeId from;
    NodeId to;
    Packet pkt;
  };

  void drain_cascade();

  const RunInputs* inputs_;
  const ProtocolConfig* pcfg_;
  Protocol* protocol_;
  double now_ = 0.0;
  std::vector<std::set<NodeId>> neighbors_;
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> contact_ids_;
  std::uint64_t contact_counter_ = 0;
  std::deque<Delivery> cascade_;
  InstanceId instance_counter_ = 0;
  RngStream coins_;
  RequestTracker tracker_;
  MetricsReport report_;
  std::set<NodeId> producers_;
  std::set<NodeId> consumers_;
  bool log_tx_ = false;
  std::vector<Transmission> txlog_;
};

/// Runs one protocol over pre-built inputs.
MetricsReport run_single(const RunInputs& inputs, const ProtocolConfig& pcfg);

}  // namespace oppccn
