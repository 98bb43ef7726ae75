#pragma once

#include <map>
#include <set>
#include <vector>

#include "oppccn/engine.hpp"

namespace oppccn {

/// MobCCN: utility-gradient Interest forwarding with CCN breadcrumb Data
/// return, optional Interest retransmission.
class MobccnProtocol : public Protocol {
 public:
  struct Node {
    MobccnState routing;
    ForwardingState fwd;
  };

  explicit MobccnProtocol(const ProtocolConfig& cfg) : cfg_(cfg) {}

  void start(Sim& sim) override;
  void contact_up(Sim& sim, NodeId a, NodeId b) override;
  void contact_down(Sim& sim, NodeId a, NodeId b) override;
  void request(Sim& sim, const RequestEvent& ev) override;
  void receive(Sim& sim, NodeId at, NodeId from, const Packet& pkt) override;
  std::int64_t total_cs_entries() const override;
  void count_live_interests(std::map<InstanceId, std::int64_t>& copies) const override;
  const ContentStore* content_store(NodeId node) const override;

  const Node& node(NodeId n) const { return nodes_[n]; }

 private:
  void handle_interest(Sim& sim, NodeId at, NodeId from, const Packet& pkt);
  void handle_data(Sim& sim, NodeId at, const Packet& pkt);
  void send_data_reply(Sim& sim, NodeId from, NodeId to, const ContentName& n);
  void flush_interests(Sim& sim, NodeId at);
  void rehello(Sim& sim, NodeId at);

  ProtocolConfig cfg_;
  std::vector<Node> nodes_;
};

/// Ideal Epidemic: Interest and Data packets are flooded; with caching on,
/// stored contents are synchronised on contact as well. Delay-optimal under
/// infinite bandwidth, maximally resource-hungry.
class IdealEpidemicProtocol : public Protocol {
 public:
  struct Node {
    ContentStore cs;
    std::map<InstanceId, Packet> interests;  // carried Interest instances
    std::map<InstanceId, Packet> datas;      // carried Data instances
    std::set<InstanceId> replied;            // instances answered here
  };

  explicit IdealEpidemicProtocol(const ProtocolConfig& cfg) : cfg_(cfg) {}

  void start(Sim& sim) override;
  void contact_up(Sim& sim, NodeId a, NodeId b) override;
  void contact_down(Sim& sim, NodeId a, NodeId b) override {}
  void request(Sim& sim, const RequestEvent& ev) override;
  void receive(Sim& sim, NodeId at, NodeId from, const Packet& pkt) override;
  std::int64_t total_cs_entries() const override;
  const ContentStore* content_store(NodeId node) const override;

  const Node& node(NodeId n) const { return nodes_[n]; }

 private:
  void accept_data_instance(Sim& sim, NodeId at, const Packet& pkt);
  void accept_interest_instance(Sim& sim, NodeId at, const Packet& pkt);
  void accept_content(Sim& sim, NodeId at, const ContentName& n, std::int32_t hops);
  void offer_instances(Sim& sim, NodeId from, NodeId to);
  void sync_contents(Sim& sim, NodeId from, NodeId to);
  bool can_answer(const Sim& sim, NodeId at, const ContentName& n) const;

  ProtocolConfig cfg_;
  std::vector<Node> nodes_;
};

/// Epidemic-CCN-1copy: Interests random-walk (one copy each, moved with
/// probability forward_prob per new contact), Data returns on breadcrumbs.
/// The noReTrans variant absorbs an Interest arriving at a node that
/// already has a PIT entry for the content.
class Epi1CopyProtocol : public Protocol {
 public:
  struct Carried {
    Packet pkt;
    std::set<std::uint64_t> offered_contacts;  // contact-interval ids already used
  };
  struct Node {
    ContentStore cs;
    ForwardingState fwd;
    std::map<InstanceId, Carried> carried;
  };

  explicit Epi1CopyProtocol(const ProtocolConfig& cfg) : cfg_(cfg) {}

  void start(Sim& sim) override;
  void contact_up(Sim& sim, NodeId a, NodeId b) override;
  void contact_down(Sim& sim, NodeId a, NodeId b) override {}
  void request(Sim& sim, const RequestEvent& ev) override;
  void receive(Sim& sim, NodeId at, NodeId from, const Packet& pkt) override;
  std::int64_t total_cs_entries() const override;
  void count_live_interests(std::map<InstanceId, std::int64_t>& copies) const override;
  const ContentStore* content_store(NodeId node) const override;

  const Node& node(NodeId n) const { return nodes_[n]; }

 private:
  void handle_interest(Sim& sim, NodeId at, NodeId from, const Packet& pkt);
  void handle_data(Sim& sim, NodeId at, const Packet& pkt);
  void carry_and_offer(Sim& sim, NodeId at, const Packet& pkt);
  void offer_carried(Sim& sim, NodeId holder, NodeId neighbor);

  ProtocolConfig cfg_;
  std::vector<Node> nodes_;
};

/// Decides whether an Epidemic-CCN-1copy holder hands its Interest to a
/// neighbour given one coin draw in [0,1): the transfer happens when the
/// draw is below forward_prob.
inline bool epi1copy_transfer(double coin_draw, double forward_prob) {
  return coin_draw < forward_prob;
}

}  // namespace oppccn
