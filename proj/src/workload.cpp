#include "oppccn/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oppccn {

void TrafficConfig::validate(const MobilityConfig& mobility) const {
  if (n_producers < 1) throw std::invalid_argument("traffic: n_producers must be >= 1");
  if (n_consumers < 0) throw std::invalid_argument("traffic: n_consumers must be >= 0");
  if (n_content_types < 1 || chunks_per_type < 1) {
    throw std::invalid_argument("traffic: content counts must be positive");
  }
  if (requests_per_consumer < 0) {
    throw std::invalid_argument("traffic: requests_per_consumer must be >= 0");
  }
  if (request_mean_s <= 0) throw std::invalid_argument("traffic: request_mean_s must be positive");
  if (home_fraction < 0.0 || home_fraction > 1.0) {
    throw std::invalid_argument("traffic: home_fraction must be in [0,1]");
  }
  if (!(warmup_end_s < request_end_s) || request_end_s > mobility.duration) {
    throw std::invalid_argument(
        "traffic: need warmup_end_s < request_end_s <= mobility duration");
  }
  if (n_producers + n_consumers > mobility.n_nodes) {
    throw std::invalid_argument("traffic: producers + consumers exceed node count");
  }
  if (mobility.n_communities > 1) {
    if (n_producers != mobility.n_communities || n_consumers > mobility.n_communities) {
      throw std::invalid_argument(
          "traffic: community scenarios need one producer per community and at most one "
          "consumer per community");
    }
    if (mobility.n_nodes / mobility.n_communities < 3) {
      throw std::invalid_argument("traffic: communities too small for distinct roles");
    }
  }
}

Roles assign_roles(const TrafficConfig& traffic, const MobilityConfig& mobility) {
  Roles roles;
  if (mobility.n_communities == 1) {
    for (std::int32_t i = 0; i < traffic.n_producers; ++i) roles.producers.push_back(i);
    for (std::int32_t i = 0; i < traffic.n_consumers; ++i) {
      roles.consumers.push_back(traffic.n_producers + i);
    }
    return roles;
  }
  const std::int32_t per = mobility.n_nodes / mobility.n_communities;
  for (std::int32_t c = 0; c < mobility.n_communities; ++c) {
    roles.producers.push_back(c * per);
    if (c < traffic.n_consumers) roles.consumers.push_back(c * per + 1);
  }
  return roles;
}

std::vector<ContentName> Placement::all_names() const {
  std::vector<ContentName> names;
  names.reserve(owner.size());
  for (const auto& [name, node] : owner) {
    (void)node;
    names.push_back(name);
  }
  return names;
}

Placement place_content(const TrafficConfig& traffic, const MobilityConfig& mobility,
                        RngStream& rng) {
  Placement placement;
  const Roles roles = assign_roles(traffic, mobility);

  if (mobility.n_communities == 1) {
    // Types are allocated whole: a uniformly random producer holds every
    // chunk of a type, so the type-level utility gradient has one attractor.
    for (std::int32_t t = 0; t < traffic.n_content_types; ++t) {
      const NodeId p = roles.producers[rng.uniform_index(roles.producers.size())];
      for (std::int32_t c = 0; c < traffic.chunks_per_type; ++c) {
        const ContentName name{t, c};
        placement.by_producer[p].insert(name);
        placement.owner[name] = p;
      }
    }
    return placement;
  }

  // Deal n_content_types whole types to each producer, uniformly at random.
  const std::int32_t total_types = traffic.n_producers * traffic.n_content_types;
  std::vector<std::int32_t> types(total_types);
  for (std::int32_t t = 0; t < total_types; ++t) types[t] = t;
  for (std::int32_t i = total_types - 1; i > 0; --i) {
    const auto j = static_cast<std::int32_t>(rng.uniform_index(i + 1));
    std::swap(types[i], types[j]);
  }
  for (std::int32_t k = 0; k < total_types; ++k) {
    const NodeId p = roles.producers[k % roles.producers.size()];
    for (std::int32_t c = 0; c < traffic.chunks_per_type; ++c) {
      const ContentName name{types[k], c};
      placement.by_producer[p].insert(name);
      placement.owner[name] = p;
    }
  }
  return placement;
}

namespace {

double draw_request_time(const TrafficConfig& traffic, RngStream& rng, double previous) {
  constexpr int kMaxResample = 100000;
  if (traffic.inter_request == RequestDistribution::Geometric) {
    // Request times cluster around warmup + mean; overflowing draws are
    // resampled into the window.
    for (int i = 0; i < kMaxResample; ++i) {
      const double t =
          traffic.warmup_end_s + static_cast<double>(rng.geometric(traffic.request_mean_s));
      if (t <= traffic.request_end_s) return t;
    }
    throw std::runtime_error(
        "workload: request does not fit the request window after resampling");
  }

  // Exponential inter-request gaps. Overflowing gaps are resampled; once the
  // remaining window gets small the resampled law is drawn exactly (inverse
  // CDF of the truncated exponential) instead of by rejection.
  const double remaining = traffic.request_end_s - previous;
  if (!(remaining > 0.0)) {
    throw std::runtime_error(
        "workload: request does not fit the request window after resampling");
  }
  for (int i = 0; i < 1000; ++i) {
    const double gap = rng.exponential(traffic.request_mean_s);
    if (gap <= remaining) return previous + gap;
  }
  const double mass = 1.0 - std::exp(-remaining / traffic.request_mean_s);
  const double gap = -traffic.request_mean_s * std::log(1.0 - rng.next_double() * mass);
  const double t = std::min(previous + gap, traffic.request_end_s);
  if (t < previous) {
    throw std::runtime_error(
        "workload: request does not fit the request window after resampling");
  }
  return t;
}

ContentName draw_name(const TrafficConfig& traffic, const MobilityConfig& mobility,
                      const Placement& placement, const std::vector<ContentName>& all_names,
                      std::int32_t home_community, RngStream& rng, bool* home) {
  if (mobility.n_communities == 1) {
    *home = true;
    return all_names[rng.uniform_index(all_names.size())];
  }
  const bool pick_home = rng.coin(traffic.home_fraction);
  std::vector<ContentName> eligible;
  for (const auto& [name, owner] : placement.owner) {
    const bool owner_home =
        community_of(owner, mobility.n_nodes, mobility.n_communities) == home_community;
    if (owner_home == pick_home) eligible.push_back(name);
  }
  *home = pick_home;
  return eligible[rng.uniform_index(eligible.size())];
}

}  // namespace

std::vector<RequestEvent> generate_requests(const TrafficConfig& traffic,
                                            const MobilityConfig& mobility,
                                            const Placement& placement, RngStream& rng) {
  const Roles roles = assign_roles(traffic, mobility);
  const std::vector<ContentName> all_names = placement.all_names();
  std::vector<RequestEvent> requests;

  for (NodeId consumer : roles.consumers) {
    const std::int32_t home_community =
        community_of(consumer, mobility.n_nodes, mobility.n_communities);
    double previous = traffic.warmup_end_s;
    for (std::int32_t k = 0; k < traffic.requests_per_consumer; ++k) {
      RequestEvent ev;
      ev.time = draw_request_time(traffic, rng, previous);
      previous = ev.time;
      ev.consumer = consumer;
      ev.name = draw_name(traffic, mobility, placement, all_names, home_community, rng, &ev.home);
      requests.push_back(ev);
    }
  }

  std::stable_sort(requests.begin(), requests.end(),
                   [](const RequestEvent& a, const RequestEvent& b) {
                     if (a.time != b.time) return a.time < b.time;
                     if (a.consumer != b.consumer) return a.consumer < b.consumer;
                     return a.name < b.name;
                   });
  for (std::size_t i = 0; i < requests.size(); ++i) requests[i].rid = i;
  return requests;
}

void write_workload(std::ostream& out, const std::vector<RequestEvent>& requests) {
  char buf[96];
  for (const RequestEvent& r : requests) {
    std::snprintf(buf, sizeof(buf), "%.3f\t%d\t%d\t%d\n", r.time, r.consumer,
                  r.name.content_type, r.name.chunk);
    out << buf;
  }
}

std::vector<RequestEvent> read_workload(std::istream& in, const TrafficConfig& traffic,
                                        const MobilityConfig& mobility,
                                        const Placement& placement) {
  (void)traffic;
  std::vector<RequestEvent> requests;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    RequestEvent r;
    if (!(ls >> r.time >> r.consumer >> r.name.content_type >> r.name.chunk)) {
      throw std::runtime_error("workload: malformed line: " + line);
    }
    auto it = placement.owner.find(r.name);
    if (it == placement.owner.end()) {
      throw std::runtime_error("workload: request for unplaced content " + r.name.str());
    }
    r.home = community_of(it->second, mobility.n_nodes, mobility.n_communities) ==
             community_of(r.consumer, mobility.n_nodes, mobility.n_communities);
    r.rid = requests.size();
    requests.push_back(r);
  }
  return requests;
}

void write_workload_file(const std::string& path, const std::vector<RequestEvent>& requests) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write workload file: " + path);
  write_workload(out, requests);
}

std::vector<RequestEvent> read_workload_file(const std::string& path,
                                             const TrafficConfig& traffic,
                                             const MobilityConfig& mobility,
                                             const Placement& placement) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read workload file: " + path);
  return read_workload(in, traffic, mobility, placement);
}

}  // namespace oppccn
