#include "oppccn/tables.hpp"

#include <algorithm>

namespace oppccn {

bool ContentStore::insert(const ContentName& n, std::int64_t payload_bytes, std::int32_t hops) {
  auto [it, inserted] = entries_.try_emplace(n, Entry{payload_bytes, hops});
  (void)it;
  return inserted;
}

bool ContentStore::holds_type(std::int32_t content_type) const {
  auto it = entries_.lower_bound(ContentName{content_type, 0});
  return it != entries_.end() && it->first.content_type == content_type;
}

const ContentStore::Entry* ContentStore::find(const ContentName& n) const {
  auto it = entries_.find(n);
  return it == entries_.end() ? nullptr : &it->second;
}

void ContentStore::dump(std::string& out) const {
  for (const auto& [name, e] : entries_) {
    out += "CS\t" + name.str() + "\t" + std::to_string(e.payload_bytes) + "\n";
  }
}

std::optional<Packet> cs_lookup(const ContentStore& cs, const ContentName& n) {
  const ContentStore::Entry* e = cs.find(n);
  if (e == nullptr) return std::nullopt;
  return make_data(n, e->payload_bytes, 0);
}

PitResult Pit::register_interest(const ContentName& n, NodeId from, const Packet& pkt) {
  auto it = entries_.find(n);
  if (it == entries_.end()) {
    PitEntry e;
    e.name = n;
    e.faces.push_back(from);
    e.first_interest = pkt;
    e.arrivals = 1;
    entries_.emplace(n, std::move(e));
    return PitResult::NewEntry;
  }
  PitEntry& e = it->second;
  e.arrivals += 1;
  if (std::find(e.faces.begin(), e.faces.end(), from) == e.faces.end()) {
    e.faces.push_back(from);
  }
  return PitResult::FaceAdded;
}

PitEntry* Pit::find(const ContentName& n) {
  auto it = entries_.find(n);
  return it == entries_.end() ? nullptr : &it->second;
}

const PitEntry* Pit::find(const ContentName& n) const {
  auto it = entries_.find(n);
  return it == entries_.end() ? nullptr : &it->second;
}

void Pit::dump(std::string& out) const {
  for (const auto& [name, e] : entries_) {
    std::string faces;
    for (NodeId f : e.faces) {
      if (!faces.empty()) faces += ",";
      faces += std::to_string(f);
    }
    out += "PIT\t" + name.str() + "\t" + faces + "\t" + std::to_string(e.arrivals) + "\n";
  }
}

void Fib::update(std::int32_t content_type, NodeId neighbor, double utility) {
  per_type_[content_type][neighbor] = utility;
}

const std::map<NodeId, double>* Fib::find_type(std::int32_t content_type) const {
  auto it = per_type_.find(content_type);
  return it == per_type_.end() ? nullptr : &it->second;
}

void Fib::dump(std::string& out) const {
  for (const auto& [type, faces] : per_type_) {
    for (const auto& [node, utility] : faces) {
      out += "FIB\t" + std::to_string(type) + "\t" + std::to_string(node) + "\t" +
             std::to_string(utility) + "\n";
    }
  }
}

void CnuTable::store(std::int32_t content_type, NodeId neighbor, double utility) {
  entries_[{content_type, neighbor}] = utility;
}

void CnuTable::remove_neighbor(NodeId neighbor) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->first.second == neighbor) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

std::optional<double> CnuTable::find(std::int32_t content_type, NodeId neighbor) const {
  auto it = entries_.find({content_type, neighbor});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool CnuTable::references_only(const std::set<NodeId>& neighbors) const {
  for (const auto& [key, utility] : entries_) {
    (void)utility;
    if (neighbors.count(key.second) == 0) return false;
  }
  return true;
}

void CnuTable::dump(std::string& out) const {
  for (const auto& [key, utility] : entries_) {
    out += "CNU\t" + std::to_string(key.first) + "\t" + std::to_string(key.second) + "\t" +
           std::to_string(utility) + "\n";
  }
}

std::optional<ForwarderChoice> best_forwarder(const Fib& fib, const CnuTable& cnu,
                                              std::int32_t content_type,
                                              const std::set<NodeId>& current_neighbors,
                                              const std::vector<NodeId>& exclude) {
  auto excluded = [&exclude](NodeId n) {
    return std::find(exclude.begin(), exclude.end(), n) != exclude.end();
  };
  // Candidate utility per node: max of the CNU value (current neighbours
  // only) and the FIB value.
  std::map<NodeId, double> candidates;
  for (const auto& [key, utility] : cnu.entries()) {
    if (key.first != content_type) continue;
    if (current_neighbors.count(key.second) == 0) continue;
    if (excluded(key.second)) continue;
    auto [it, inserted] = candidates.emplace(key.second, utility);
    if (!inserted) it->second = std::max(it->second, utility);
  }
  if (const auto* faces = fib.find_type(content_type)) {
    for (const auto& [node, utility] : *faces) {
      if (excluded(node)) continue;
      auto [it, inserted] = candidates.emplace(node, utility);
      if (!inserted) it->second = std::max(it->second, utility);
    }
  }
  if (candidates.empty()) return std::nullopt;

  ForwarderChoice best;
  bool first = true;
  for (const auto& [node, utility] : candidates) {  // ascending NodeId: ties keep the smaller
    if (first || utility > best.utility) {
      best.node = node;
      best.utility = utility;
      first = false;
    }
  }
  best.in_contact = current_neighbors.count(best.node) != 0;
  return best;
}

}  // namespace oppccn
