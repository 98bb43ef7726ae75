#include "oppccn/engine.hpp"

#include <algorithm>

namespace oppccn {

namespace {

enum class EventKind { ContactDown = 0, ContactUp = 1, Request = 2, End = 3 };

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::End;
  NodeId a = kNoNode;
  NodeId b = kNoNode;
  std::size_t request_index = 0;

  friend bool operator<(const Event& x, const Event& y) {
    if (x.time != y.time) return x.time < y.time;
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

constexpr std::int64_t kCascadeBudget = 50'000'000;

}  // namespace

ProtocolConfig protocol_from_name(const std::string& name) {
  ProtocolConfig cfg;
  cfg.name = name;
  if (name == "mobccn") {
    cfg.kind = ProtocolKind::Mobccn;
    cfg.retransmission.enabled = true;
  } else if (name == "mobccn_noretrans") {
    cfg.kind = ProtocolKind::Mobccn;
    cfg.retransmission.enabled = false;
  } else if (name == "epidemic_ideal") {
    cfg.kind = ProtocolKind::EpidemicIdeal;
    cfg.retransmission.enabled = false;
  } else if (name == "epi1copy") {
    cfg.kind = ProtocolKind::Epi1Copy;
    cfg.retransmission.enabled = true;
  } else if (name == "epi1copy_noretrans") {
    cfg.kind = ProtocolKind::Epi1Copy;
    cfg.retransmission.enabled = false;
  } else {
    throw std::invalid_argument("unknown protocol: " + name);
  }
  return cfg;
}

Sim::Sim(const RunInputs& inputs, const ProtocolConfig& pcfg, Protocol& protocol)
    : inputs_(&inputs),
      pcfg_(&pcfg),
      protocol_(&protocol),
      neighbors_(inputs.n_nodes),
      coins_(inputs.coin_seed) {
  report_.protocol = pcfg.name;
  report_.caching = pcfg.caching;
  report_.retransmission = pcfg.retransmission.enabled;
  producers_.insert(inputs.roles.producers.begin(), inputs.roles.producers.end());
  consumers_.insert(inputs.roles.consumers.begin(), inputs.roles.consumers.end());
}

std::uint64_t Sim::contact_id(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  auto it = contact_ids_.find({a, b});
  return it == contact_ids_.end() ? 0 : it->second;
}

void Sim::send(NodeId from, NodeId to, const Packet& pkt) {
  Packet copy = pkt;
  copy.hops += 1;
  count_transmission(from, to, copy);
  cascade_.push_back({from, to, std::move(copy)});
}

void Sim::count_transmission(NodeId from, NodeId to, const Packet& pkt) {
  report_.record_transmission(pkt, pcfg_->sizes);
  if (log_tx_) {
    txlog_.push_back({now_, from, to, pkt.kind, pkt.name, pkt.instance, pkt.hops});
  }
}

RequestTracker::Arrival Sim::deliver_to_consumer(NodeId consumer, const ContentName& name,
                                                 std::int32_t hops) {
  return tracker_.on_data_at_consumer(consumer, name, hops, now_, report_);
}

void Sim::drain_cascade() {
  std::int64_t budget = kCascadeBudget;
  while (!cascade_.empty()) {
    if (--budget < 0) {
      throw SimError("cascade did not quiesce: runaway packet propagation at t=" +
                     std::to_string(now_));
    }
    Delivery d = std::move(cascade_.front());
    cascade_.pop_front();
    protocol_->receive(*this, d.to, d.from, d.pkt);
  }
}

MetricsReport Sim::run() {
  inputs_->trace.validate(inputs_->n_nodes);

  std::vector<Event> events;
  events.reserve(inputs_->trace.events.size() + inputs_->requests.size() + 1);
  for (const ContactEvent& e : inputs_->trace.events) {
    if (e.time > inputs_->duration) continue;
    events.push_back({e.time,
                      e.kind == ContactKind::Up ? EventKind::ContactUp : EventKind::ContactDown,
                      e.a, e.b, 0});
  }
  for (std::size_t i = 0; i < inputs_->requests.size(); ++i) {
    const RequestEvent& r = inputs_->requests[i];
    if (r.time < 0.0 || r.time > inputs_->duration) {
      throw SimError("request outside the simulated interval");
    }
    events.push_back({r.time, EventKind::Request, r.consumer, kNoNode, i});
  }
  events.push_back({inputs_->duration, EventKind::End, kNoNode, kNoNode, 0});
  std::stable_sort(events.begin(), events.end());

  report_.requests_total = static_cast<std::int64_t>(inputs_->requests.size());
  for (const RequestEvent& r : inputs_->requests) {
    if (r.home) {
      report_.requests_home += 1;
    } else {
      report_.requests_foreign += 1;
    }
  }
  report_.cs_initial = inputs_->placement.total_contents();

  protocol_->start(*this);
  drain_cascade();

  for (const Event& ev : events) {
    now_ = ev.time;
    switch (ev.kind) {
      case EventKind::ContactDown: {
        neighbors_[ev.a].erase(ev.b);
        neighbors_[ev.b].erase(ev.a);
        contact_ids_.erase({ev.a, ev.b});
        protocol_->contact_down(*this, ev.a, ev.b);
        break;
      }
      case EventKind::ContactUp: {
        neighbors_[ev.a].insert(ev.b);
        neighbors_[ev.b].insert(ev.a);
        contact_ids_[{ev.a, ev.b}] = ++contact_counter_;
        protocol_->contact_up(*this, ev.a, ev.b);
        break;
      }
      case EventKind::Request: {
        const RequestEvent& r = inputs_->requests[ev.request_index];
        tracker_.on_request(r.consumer, r.name, r.rid, r.time, r.home);
        protocol_->request(*this, r);
        break;
      }
      case EventKind::End:
        break;
    }
    drain_cascade();
    if (post_event_hook) post_event_hook(*this);
  }

  report_.cs_final = protocol_->total_cs_entries();
  const std::int64_t undelivered = tracker_.outstanding_total();
  if (report_.delivered + undelivered != report_.requests_total) {
    throw SimError("request conservation violated: delivered=" +
                   std::to_string(report_.delivered) + " undelivered=" +
                   std::to_string(undelivered) + " total=" +
                   std::to_string(report_.requests_total));
  }
  return report_;
}

MetricsReport run_single(const RunInputs& inputs, const ProtocolConfig& pcfg) {
  auto protocol = make_protocol(pcfg);
  Sim sim(inputs, pcfg, *protocol);
  return sim.run();
}

}  // namespace oppccn
