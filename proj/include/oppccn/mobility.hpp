#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oppccn/core.hpp"
#include "oppccn/rng.hpp"

namespace oppccn {

struct MobilityConfig {
  double area_side = 1000.0;  // m
  std::int32_t n_nodes = 10;
  std::int32_t n_communities = 1;
  std::int32_t n_travellers = 0;  // one per community at most
  double tx_range = 20.0;         // m
  double speed_min = 1.0;         // m/s
  double speed_max = 1.86;        // m/s
  double duration = 86400.0;      // s
  double tick = 1.0;              // s
  double burn_in = 7200.0;        // s of discarded movement before t=0
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

enum class ContactKind { Up, Down };

struct ContactEvent {
  double time = 0.0;
  NodeId a = 0;  // a < b canonical ordering
  NodeId b = 0;
  ContactKind kind = ContactKind::Up;
};

struct ContactTrace {
  std::vector<ContactEvent> events;  // time-ordered

  /// Throws std::runtime_error on alternation or ordering violations.
  void validate(std::int32_t n_nodes) const;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// Node positions sampled per tick; positions[t][node].
using PositionTrace = std::vector<std::vector<Position>>;

/// Community of each node: nodes are split evenly into n_communities groups
/// in id order.
std::int32_t community_of(NodeId node, std::int32_t n_nodes, std::int32_t n_communities);

/// Travellers are the third node of each community (after the producer and
/// consumer slots); with fewer than three nodes per community the first free
/// one is used.
std::vector<NodeId> traveller_nodes(const MobilityConfig& cfg);

/// Community-based waypoint mobility. One community covers the whole area
/// (random waypoint); three communities live in distinct cells of a 2x2
/// grid, with one traveller per community alternating between home and
/// foreign cells.
PositionTrace generate_positions(const MobilityConfig& cfg);

/// Distance-threshold contact detection on per-tick positions.
ContactTrace contacts_from_positions(const PositionTrace& positions, double tx_range,
                                     double tick);

ContactTrace generate_trace(const MobilityConfig& cfg);

/// Trace file format: `# oppnet-trace v1` header, then
/// `time<TAB>a<TAB>b<TAB>UP|DOWN` lines, times with 3 decimals.
void write_trace(std::ostream& out, const ContactTrace& trace);
ContactTrace read_trace(std::istream& in);
void write_trace_file(const std::string& path, const ContactTrace& trace);
ContactTrace read_trace_file(const std::string& path);

}  // namespace oppccn
