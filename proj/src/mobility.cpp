#include "oppccn/mobility.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace oppccn {

void MobilityConfig::validate() const {
  if (n_nodes < 1) throw std::invalid_argument("mobility: n_nodes must be >= 1");
  if (area_side <= 0) throw std::invalid_argument("mobility: area_side must be positive");
  if (n_communities != 1 && n_communities != 3) {
    throw std::invalid_argument("mobility: n_communities must be 1 or 3");
  }
  if (n_travellers != 0 && n_travellers != n_communities) {
    throw std::invalid_argument("mobility: n_travellers must be 0 or one per community");
  }
  if (n_communities == 1 && n_travellers != 0) {
    throw std::invalid_argument("mobility: travellers need multiple communities");
  }
  if (speed_min <= 0 || speed_max < speed_min) {
    throw std::invalid_argument("mobility: speed range invalid");
  }
  if (duration <= 0 || tick <= 0) throw std::invalid_argument("mobility: duration/tick invalid");
  if (tx_range <= 0) throw std::invalid_argument("mobility: tx_range must be positive");
  if (n_nodes % n_communities != 0) {
    throw std::invalid_argument("mobility: nodes must split evenly into communities");
  }
}

void ContactTrace::validate(std::int32_t n_nodes) const {
  std::map<std::pair<NodeId, NodeId>, bool> up;  // current contact state per pair
  double prev_time = 0.0;
  for (const ContactEvent& e : events) {
    if (e.time < prev_time) throw std::runtime_error("trace: times must be non-decreasing");
    prev_time = e.time;
    if (e.a >= e.b) throw std::runtime_error("trace: pair must be ordered a < b");
    if (e.a < 0 || e.b >= n_nodes) throw std::runtime_error("trace: node id out of range");
    bool& state = up[{e.a, e.b}];
    const bool want_up = e.kind == ContactKind::Up;
    if (state == want_up) throw std::runtime_error("trace: Up/Down alternation violated");
    state = want_up;
  }
}

std::int32_t community_of(NodeId node, std::int32_t n_nodes, std::int32_t n_communities) {
  const std::int32_t per = n_nodes / n_communities;
  return std::min(node / per, n_communities - 1);
}

std::vector<NodeId> traveller_nodes(const MobilityConfig& cfg) {
  std::vector<NodeId> out;
  if (cfg.n_travellers == 0) return out;
  const std::int32_t per = cfg.n_nodes / cfg.n_communities;
  for (std::int32_t c = 0; c < cfg.n_communities; ++c) {
    out.push_back(c * per + std::min<std::int32_t>(2, per - 1));
  }
  return out;
}

namespace {

struct Cell {
  double x0, y0, x1, y1;
};

// Home cells for three communities on a 2x2 grid of the area.
Cell community_cell(std::int32_t community, double side) {
  const double h = side / 2.0;
  switch (community) {
    case 0: return {0.0, 0.0, h, h};
    case 1: return {h, 0.0, side, h};
    default: return {0.0, h, h, side};
  }
}

Position random_point(RngStream& rng, const Cell& c) {
  return {rng.uniform(c.x0, c.x1), rng.uniform(c.y0, c.y1)};
}

struct Walker {
  Position pos;
  Position waypoint;
  double speed = 1.0;
};

}  // namespace

PositionTrace generate_positions(const MobilityConfig& cfg) {
  cfg.validate();
  RngStream rng(cfg.seed);

  const Cell whole{0.0, 0.0, cfg.area_side, cfg.area_side};
  std::vector<NodeId> travellers = traveller_nodes(cfg);
  auto is_traveller = [&](NodeId n) {
    for (NodeId t : travellers) {
      if (t == n) return true;
    }
    return false;
  };

  auto node_cell = [&](NodeId n) {
    if (cfg.n_communities == 1) return whole;
    return community_cell(community_of(n, cfg.n_nodes, cfg.n_communities), cfg.area_side);
  };

  auto next_cell = [&](NodeId n) {
    const std::int32_t home = cfg.n_communities == 1
                                  ? 0
                                  : community_of(n, cfg.n_nodes, cfg.n_communities);
    if (!is_traveller(n) || cfg.n_communities == 1) return node_cell(n);
    if (rng.coin(0.5)) return community_cell(home, cfg.area_side);
    // Foreign visit: pick one of the two other communities evenly.
    std::int32_t pick = static_cast<std::int32_t>(rng.uniform_index(2));
    std::int32_t foreign = 0;
    for (std::int32_t c = 0; c < cfg.n_communities; ++c) {
      if (c == home) continue;
      if (pick == 0) {
        foreign = c;
        break;
      }
      --pick;
    }
    return community_cell(foreign, cfg.area_side);
  };

  std::vector<Walker> walkers(cfg.n_nodes);
  for (NodeId n = 0; n < cfg.n_nodes; ++n) {
    walkers[n].pos = random_point(rng, node_cell(n));
    walkers[n].waypoint = random_point(rng, next_cell(n));
    walkers[n].speed = rng.uniform(cfg.speed_min, cfg.speed_max);
  }

  auto advance = [&](Walker& w, NodeId n, double dt) {
    double remaining = dt;
    while (remaining > 0.0) {
      const double dx = w.waypoint.x - w.pos.x;
      const double dy = w.waypoint.y - w.pos.y;
      const double dist = std::hypot(dx, dy);
      const double reach = w.speed * remaining;
      if (reach < dist) {
        w.pos.x += dx / dist * reach;
        w.pos.y += dy / dist * reach;
        return;
      }
      remaining -= dist / w.speed;
      w.pos = w.waypoint;
      w.waypoint = random_point(rng, next_cell(n));
      w.speed = rng.uniform(cfg.speed_min, cfg.speed_max);
    }
  };

  // Burn-in replaces an explicit stationary-regime initialisation.
  const std::int64_t burn_ticks = static_cast<std::int64_t>(cfg.burn_in / cfg.tick);
  for (std::int64_t t = 0; t < burn_ticks; ++t) {
    for (NodeId n = 0; n < cfg.n_nodes; ++n) advance(walkers[n], n, cfg.tick);
  }

  const std::int64_t ticks = static_cast<std::int64_t>(cfg.duration / cfg.tick);
  PositionTrace positions(ticks + 1, std::vector<Position>(cfg.n_nodes));
  for (NodeId n = 0; n < cfg.n_nodes; ++n) positions[0][n] = walkers[n].pos;
  for (std::int64_t t = 1; t <= ticks; ++t) {
    for (NodeId n = 0; n < cfg.n_nodes; ++n) {
      advance(walkers[n], n, cfg.tick);
      positions[t][n] = walkers[n].pos;
    }
  }
  return positions;
}

ContactTrace contacts_from_positions(const PositionTrace& positions, double tx_range,
                                     double tick) {
  ContactTrace trace;
  if (positions.empty()) return trace;
  const std::int32_t n = static_cast<std::int32_t>(positions.front().size());
  const double range_sq = tx_range * tx_range;
  std::vector<bool> in_contact(static_cast<std::size_t>(n) * n, false);

  for (std::size_t t = 0; t < positions.size(); ++t) {
    const double now = static_cast<double>(t) * tick;
    const std::vector<Position>& pos = positions[t];
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        const double dx = pos[a].x - pos[b].x;
        const double dy = pos[a].y - pos[b].y;
        const bool within = dx * dx + dy * dy <= range_sq;
        const std::size_t idx = static_cast<std::size_t>(a) * n + b;
        if (within != in_contact[idx]) {
          in_contact[idx] = within;
          trace.events.push_back({now, a, b, within ? ContactKind::Up : ContactKind::Down});
        }
      }
    }
  }
  return trace;
}

ContactTrace generate_trace(const MobilityConfig& cfg) {
  return contacts_from_positions(generate_positions(cfg), cfg.tx_range, cfg.tick);
}

void write_trace(std::ostream& out, const ContactTrace& trace) {
  out << "# oppnet-trace v1\n";
  char buf[96];
  for (const ContactEvent& e : trace.events) {
    std::snprintf(buf, sizeof(buf), "%.3f\t%d\t%d\t%s\n", e.time, e.a, e.b,
                  e.kind == ContactKind::Up ? "UP" : "DOWN");
    out << buf;
  }
}

ContactTrace read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# oppnet-trace v1") {
    throw std::runtime_error("trace: missing '# oppnet-trace v1' header");
  }
  ContactTrace trace;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double time;
    int a, b;
    std::string kind;
    if (!(ls >> time >> a >> b >> kind) || (kind != "UP" && kind != "DOWN")) {
      throw std::runtime_error("trace: malformed line: " + line);
    }
    trace.events.push_back({time, a, b, kind == "UP" ? ContactKind::Up : ContactKind::Down});
  }
  return trace;
}

void write_trace_file(const std::string& path, const ContactTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  write_trace(out, trace);
}

ContactTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trace file: " + path);
  return read_trace(in);
}

}  // namespace oppccn
