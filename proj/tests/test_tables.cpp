#include <doctest.h>

#include "oppccn/rng.hpp"
#include "oppccn/tables.hpp"

using namespace oppccn;

TEST_SUITE_BEGIN("tables");

TEST_CASE("cs_lookup finds exactly the stored name") {
  ContentStore cs;
  CHECK_FALSE(cs_lookup(cs, {1, 2}).has_value());

  cs.insert({1, 2}, 1024);
  auto hit = cs_lookup(cs, {1, 2});
  REQUIRE(hit.has_value());
  CHECK(hit->kind == PacketKind::Data);
  CHECK(hit->name == ContentName{1, 2});
  CHECK(hit->payload_bytes == 1024);

  CHECK_FALSE(cs_lookup(cs, {1, 3}).has_value());
}

TEST_CASE("content store insert is idempotent and tracks types") {
  ContentStore cs;
  CHECK(cs.insert({2, 0}, 1024));
  CHECK_FALSE(cs.insert({2, 0}, 1024));
  CHECK(cs.size() == 1);
  CHECK(cs.holds_type(2));
  CHECK_FALSE(cs.holds_type(1));
}

TEST_CASE("pit registration: new entry, extra face, duplicate face") {
  Pit pit;
  const ContentName n{4, 1};
  const Packet first = make_interest(n, 9, 100, 0);

  CHECK(pit.register_interest(n, 9, first) == PitResult::NewEntry);
  REQUIRE(pit.find(n) != nullptr);
  CHECK(pit.find(n)->faces == std::vector<NodeId>{9});
  CHECK(pit.find(n)->arrivals == 1);

  CHECK(pit.register_interest(n, 5, first) == PitResult::FaceAdded);
  CHECK(pit.find(n)->faces == std::vector<NodeId>{9, 5});
  CHECK(pit.find(n)->arrivals == 2);

  // Same face again: collapses, but the arrival still counts.
  CHECK(pit.register_interest(n, 9, first) == PitResult::FaceAdded);
  CHECK(pit.find(n)->faces == std::vector<NodeId>{9, 5});
  CHECK(pit.find(n)->arrivals == 3);
  CHECK(pit.find(n)->first_interest.instance == 100);
}

TEST_CASE("best forwarder prefers the highest utility over CNU and FIB") {
  Fib fib;
  CnuTable cnu;
  fib.update(0, 1, 0.2);
  fib.update(0, 2, 0.5);
  cnu.store(0, 1, 0.6);

  auto pick = best_forwarder(fib, cnu, 0, {1});
  REQUIRE(pick.has_value());
  CHECK(pick->node == 1);
  CHECK(pick->utility == doctest::Approx(0.6));
  CHECK(pick->in_contact);

  // No neighbours: the remembered FIB entry wins, flagged out of contact.
  auto remembered = best_forwarder(fib, cnu, 0, {});
  REQUIRE(remembered.has_value());
  CHECK(remembered->node == 2);
  CHECK(remembered->utility == doctest::Approx(0.5));
  CHECK_FALSE(remembered->in_contact);

  CHECK_FALSE(best_forwarder(fib, cnu, 7, {1}).has_value());
}

TEST_CASE("best forwarder ties break on the smaller node id") {
  Fib fib;
  fib.update(3, 8, 0.25);
  fib.update(3, 2, 0.25);
  fib.update(3, 5, 0.25);
  auto pick = best_forwarder(fib, CnuTable{}, 3, {});
  REQUIRE(pick.has_value());
  CHECK(pick->node == 2);
}

TEST_CASE("best forwarder is deterministic over random inputs") {
  RngStream rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Fib fib;
    CnuTable cnu;
    std::set<NodeId> neighbors;
    for (int i = 0; i < 10; ++i) {
      const auto node = static_cast<NodeId>(rng.uniform_index(6));
      const double u = rng.uniform(0.0, 1.0);
      if (rng.coin(0.5)) {
        fib.update(0, node, u);
      } else {
        cnu.store(0, node, u);
        neighbors.insert(node);
      }
    }
    const auto a = best_forwarder(fib, cnu, 0, neighbors);
    const auto b = best_forwarder(fib, cnu, 0, neighbors);
    REQUIRE(a.has_value());
    CHECK(a->node == b->node);
    CHECK(a->utility == b->utility);
    CHECK(a->in_contact == b->in_contact);
  }
}

TEST_CASE("cnu purge removes every entry of a departed neighbour") {
  CnuTable cnu;
  cnu.store(0, 4, 0.1);
  cnu.store(1, 4, 0.2);
  cnu.store(0, 5, 0.3);
  cnu.remove_neighbor(4);
  CHECK_FALSE(cnu.find(0, 4).has_value());
  CHECK_FALSE(cnu.find(1, 4).has_value());
  CHECK(cnu.find(0, 5).has_value());
  CHECK(cnu.references_only({5}));
}

TEST_CASE("table dumps are line oriented") {
  ContentStore cs;
  cs.insert({1, 2}, 1024);
  std::string out;
  cs.dump(out);
  CHECK(out == "CS\t(1,2)\t1024\n");
}

TEST_SUITE_END();
