#include <doctest.h>

#include "oppccn/engine.hpp"
#include "oppccn/protocols.hpp"

using namespace oppccn;

TEST_SUITE_BEGIN("engine");

namespace {

// Hand-built inputs: one producer holding (0,0), one consumer, optional relays.
RunInputs chain_inputs(std::int32_t n_nodes, NodeId producer, NodeId consumer,
                       std::vector<ContactEvent> events, std::vector<RequestEvent> requests,
                       double duration) {
  RunInputs in;
  in.n_nodes = n_nodes;
  in.duration = duration;
  in.trace.events = std::move(events);
  in.placement.by_producer[producer].insert({0, 0});
  in.placement.owner[{0, 0}] = producer;
  in.roles.producers = {producer};
  in.roles.consumers = {consumer};
  for (auto& r : requests) r.home = true;
  in.requests = std::move(requests);
  in.coin_seed = 1;
  return in;
}

ProtocolConfig mobccn_cfg(bool retrans = true, bool caching = true) {
  ProtocolConfig cfg = protocol_from_name(retrans ? "mobccn" : "mobccn_noretrans");
  cfg.caching = caching;
  return cfg;
}

}  // namespace

TEST_CASE("degenerate topology: request during a contact with the producer") {
  // Producer 0 and consumer 1 are in contact when the request fires.
  RunInputs in = chain_inputs(
      2, 0, 1, {{10.0, 0, 1, ContactKind::Up}},
      {{50.0, 1, {0, 0}, 0, true}}, 100.0);
  const MetricsReport r = run_single(in, mobccn_cfg());
  CHECK(r.delivered == 1);
  CHECK(r.delivery_rate() == doctest::Approx(1.0));
  REQUIRE(r.delays_s.size() == 1);
  CHECK(r.delays_s[0] == 0.0);  // same-instant delivery
  CHECK(r.hops[0] == 1);
}

TEST_CASE("a forever-isolated consumer counts as undelivered and dropped") {
  RunInputs in = chain_inputs(2, 0, 1, {}, {{50.0, 1, {0, 0}, 0, true}}, 100.0);
  const MetricsReport r = run_single(in, mobccn_cfg());
  CHECK(r.delivered == 0);
  CHECK(r.requests_total == 1);
  CHECK(r.dropped_interests == 1);
  CHECK(r.delivery_rate() == 0.0);
}

TEST_CASE("three-node walkthrough: deferred forwarding and breadcrumb return") {
  // A=0 consumer, B=1 relay, C=2 producer of (0,0).
  // Hand trace: B meets C, then A meets B; A requests mid-contact; the
  // interest waits at B, reaches C at the next B-C contact, and the data
  // rides B back to A.
  std::vector<ContactEvent> events = {
      {100.0, 1, 2, ContactKind::Up},   {200.0, 1, 2, ContactKind::Down},
      {300.0, 0, 1, ContactKind::Up},   {500.0, 0, 1, ContactKind::Down},
      {600.0, 1, 2, ContactKind::Up},   {700.0, 1, 2, ContactKind::Down},
      {800.0, 0, 1, ContactKind::Up},   {900.0, 0, 1, ContactKind::Down},
  };
  RunInputs in = chain_inputs(3, 2, 0, events, {{400.0, 0, {0, 0}, 0, true}}, 1000.0);

  const ProtocolConfig cfg = mobccn_cfg();
  auto protocol = make_protocol(cfg);
  Sim sim(in, cfg, *protocol);
  sim.enable_txlog();
  const MetricsReport r = sim.run();

  CHECK(r.delivered == 1);
  REQUIRE(r.delays_s.size() == 1);
  CHECK(r.delays_s[0] == doctest::Approx(400.0));  // requested at 400, delivered at 800
  CHECK(r.hops[0] == 2);
  CHECK(r.duplicates == 0);

  // Exact packet path: Interest A->B then B->C; Data C->B then B->A.
  std::vector<std::pair<NodeId, NodeId>> interest_path;
  std::vector<std::pair<NodeId, NodeId>> data_path;
  for (const Transmission& t : sim.txlog()) {
    if (t.kind == PacketKind::Interest) interest_path.push_back({t.from, t.to});
    if (t.kind == PacketKind::Data) data_path.push_back({t.from, t.to});
  }
  const std::vector<std::pair<NodeId, NodeId>> want_interest = {{0, 1}, {1, 2}};
  const std::vector<std::pair<NodeId, NodeId>> want_data = {{2, 1}, {1, 0}};
  CHECK(interest_path == want_interest);
  CHECK(data_path == want_data);
}

TEST_CASE("five-node chain: data retraces the interest path in reverse") {
  // Gradient setup contacts: (3,4), (2,3), (1,2), (0,1); then the interest
  // climbs 0->1->2->3->4 across sequential contacts and the data returns.
  std::vector<ContactEvent> events = {
      {100.0, 3, 4, ContactKind::Up},  {150.0, 3, 4, ContactKind::Down},
      {200.0, 2, 3, ContactKind::Up},  {250.0, 2, 3, ContactKind::Down},
      {300.0, 1, 2, ContactKind::Up},  {350.0, 1, 2, ContactKind::Down},
      {400.0, 0, 1, ContactKind::Up},  {450.0, 0, 1, ContactKind::Down},
      // forward leg
      {1000.0, 0, 1, ContactKind::Up}, {1050.0, 0, 1, ContactKind::Down},
      {1100.0, 1, 2, ContactKind::Up}, {1150.0, 1, 2, ContactKind::Down},
      {1200.0, 2, 3, ContactKind::Up}, {1250.0, 2, 3, ContactKind::Down},
      {1300.0, 3, 4, ContactKind::Up}, {1350.0, 3, 4, ContactKind::Down},
      // return leg
      {1400.0, 2, 3, ContactKind::Up}, {1450.0, 2, 3, ContactKind::Down},
      {1500.0, 1, 2, ContactKind::Up}, {1550.0, 1, 2, ContactKind::Down},
      {1600.0, 0, 1, ContactKind::Up}, {1650.0, 0, 1, ContactKind::Down},
  };
  RunInputs in = chain_inputs(5, 4, 0, events, {{500.0, 0, {0, 0}, 0, true}}, 2000.0);

  const ProtocolConfig cfg = mobccn_cfg();
  auto protocol = make_protocol(cfg);
  Sim sim(in, cfg, *protocol);
  sim.enable_txlog();
  const MetricsReport r = sim.run();

  CHECK(r.delivered == 1);
  REQUIRE(r.hops.size() == 1);
  CHECK(r.hops[0] == 4);
  CHECK(r.delays_s[0] == doctest::Approx(1100.0));

  std::vector<std::pair<NodeId, NodeId>> interest_path;
  std::vector<std::pair<NodeId, NodeId>> data_path;
  for (const Transmission& t : sim.txlog()) {
    if (t.kind == PacketKind::Interest) interest_path.push_back({t.from, t.to});
    if (t.kind == PacketKind::Data) data_path.push_back({t.from, t.to});
  }
  const std::vector<std::pair<NodeId, NodeId>> want_interest = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  const std::vector<std::pair<NodeId, NodeId>> want_data = {{4, 3}, {3, 2}, {2, 1}, {1, 0}};
  CHECK(interest_path == want_interest);
  CHECK(data_path == want_data);

  // Breadcrumb reversal: the data path is the exact reverse of the interest path.
  for (std::size_t i = 0; i < interest_path.size(); ++i) {
    const auto& fwd = interest_path[i];
    const auto& back = data_path[data_path.size() - 1 - i];
    CHECK(fwd.first == back.second);
    CHECK(fwd.second == back.first);
  }
}

TEST_CASE("malformed traces abort the run with a diagnostic") {
  RunInputs in = chain_inputs(2, 0, 1, {{10.0, 0, 1, ContactKind::Down}}, {}, 100.0);
  CHECK_THROWS_AS(run_single(in, mobccn_cfg()), std::runtime_error);
}

TEST_CASE("single-copy invariant holds on a mobccn/noretrans run") {
  std::vector<ContactEvent> events = {
      {100.0, 1, 2, ContactKind::Up},  {200.0, 1, 2, ContactKind::Down},
      {300.0, 0, 1, ContactKind::Up},  {500.0, 0, 1, ContactKind::Down},
      {600.0, 1, 2, ContactKind::Up},  {700.0, 1, 2, ContactKind::Down},
      {800.0, 0, 1, ContactKind::Up},  {900.0, 0, 1, ContactKind::Down},
  };
  RunInputs in = chain_inputs(3, 2, 0, events, {{400.0, 0, {0, 0}, 0, true}}, 1000.0);
  const ProtocolConfig cfg = mobccn_cfg(false);
  auto protocol = make_protocol(cfg);
  Sim sim(in, cfg, *protocol);
  sim.post_event_hook = [&](const Sim& s) {
    std::map<InstanceId, std::int64_t> copies;
    s.protocol().count_live_interests(copies);
    for (const auto& [iid, count] : copies) {
      (void)iid;
      CHECK(count <= 1);
    }
  };
  const MetricsReport r = sim.run();
  CHECK(r.delivered == 1);
  CHECK(r.duplicates == 0);
}

TEST_CASE("identical inputs give identical reports and csv bytes") {
  std::vector<ContactEvent> events = {
      {100.0, 1, 2, ContactKind::Up},  {200.0, 1, 2, ContactKind::Down},
      {300.0, 0, 1, ContactKind::Up},  {500.0, 0, 1, ContactKind::Down},
      {600.0, 1, 2, ContactKind::Up},  {700.0, 1, 2, ContactKind::Down},
      {800.0, 0, 1, ContactKind::Up},
  };
  RunInputs in = chain_inputs(3, 2, 0, events, {{400.0, 0, {0, 0}, 0, true}}, 1000.0);
  const MetricsReport a = run_single(in, mobccn_cfg());
  const MetricsReport b = run_single(in, mobccn_cfg());
  CHECK(to_csv({a}) == to_csv({b}));
}

TEST_CASE("unknown protocol names are rejected") {
  CHECK_THROWS_AS(protocol_from_name("flooding9000"), std::invalid_argument);
}

TEST_SUITE_END();
