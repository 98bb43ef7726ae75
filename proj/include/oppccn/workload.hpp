#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oppccn/core.hpp"
#include "oppccn/mobility.hpp"
#include "oppccn/rng.hpp"

namespace oppccn {

enum class RequestDistribution { Geometric, Exponential };

struct TrafficConfig {
  std::int32_t n_producers = 4;
  std::int32_t n_consumers = 1;
  std::int32_t n_content_types = 10;  // total for one community; per producer otherwise
  std::int32_t chunks_per_type = 25;
  std::int32_t requests_per_consumer = 50;
  RequestDistribution inter_request = RequestDistribution::Geometric;
  double request_mean_s = 10000.0;
  double home_fraction = 0.5;  // share of requests for the home community's content
  double warmup_end_s = 43200.0;
  double request_end_s = 79200.0;
  std::uint64_t seed = 1;

  void validate(const MobilityConfig& mobility) const;
};

/// producer/consumer roles. With one community, producers take the lowest
/// ids and consumers follow them. With several, each community contributes
/// its first node as producer and its second as consumer (the third is the
/// traveller slot).
struct Roles {
  std::vector<NodeId> producers;
  std::vector<NodeId> consumers;
};

Roles assign_roles(const TrafficConfig& traffic, const MobilityConfig& mobility);

/// Initial content placement, fixed at t=0.
struct Placement {
  std::map<NodeId, std::set<ContentName>> by_producer;
  std::map<ContentName, NodeId> owner;

  std::int64_t total_contents() const { return static_cast<std::int64_t>(owner.size()); }
  std::vector<ContentName> all_names() const;
};

/// One community: every chunk lands on a uniformly random producer.
/// Several communities: each producer holds its own n_content_types types
/// (of n_producers * n_content_types total), dealt uniformly at random.
Placement place_content(const TrafficConfig& traffic, const MobilityConfig& mobility,
                        RngStream& rng);

struct RequestEvent {
  double time = 0.0;
  NodeId consumer = kNoNode;
  ContentName name{};
  RequestId rid = 0;
  bool home = true;  // content owned by the consumer's community producer
};

/// Per consumer, requests_per_consumer events with times inside
/// [warmup_end_s, request_end_s]. Geometric mode draws each request time
/// independently as warmup + G(mean); exponential mode accumulates
/// truncated inter-request gaps. Names follow the home/foreign split when
/// there are several communities, otherwise they are uniform over all
/// content. Result is time-ordered with rids assigned in that order.
std::vector<RequestEvent> generate_requests(const TrafficConfig& traffic,
                                            const MobilityConfig& mobility,
                                            const Placement& placement, RngStream& rng);

/// Workload file: `time<TAB>consumer<TAB>type<TAB>chunk` lines. Home tags
/// are re-derived from the placement on load.
void write_workload(std::ostream& out, const std::vector<RequestEvent>& requests);
std::vector<RequestEvent> read_workload(std::istream& in, const TrafficConfig& traffic,
                                        const MobilityConfig& mobility,
                                        const Placement& placement);
void write_workload_file(const std::string& path, const std::vector<RequestEvent>& requests);
std::vector<RequestEvent> read_workload_file(const std::string& path,
                                             const TrafficConfig& traffic,
                                             const MobilityConfig& mobility,
                                             const Placement& placement);

}  // namespace oppccn
