#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oppccn/core.hpp"

namespace oppccn {

/// Per-node data cache. Unlimited capacity; insert is idempotent.
class ContentStore {
 public:
  struct Entry {
    std::int64_t payload_bytes = 0;
    std::int32_t hops = 0;  // transmissions the stored copy experienced
  };

  /// Returns true when the name was not present before.
  bool insert(const ContentName& n, std::int64_t payload_bytes, std::int32_t hops = 0);

  bool contains(const ContentName& n) const { return entries_.count(n) != 0; }
  bool holds_type(std::int32_t content_type) const;
  const Entry* find(const ContentName& n) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<ContentName, Entry>& entries() const { return entries_; }

  void dump(std::string& out) const;

 private:
  std::map<ContentName, Entry> entries_;
};

/// cs_lookup: Some(Data) iff the name is present; the store is unchanged.
std::optional<Packet> cs_lookup(const ContentStore& cs, const ContentName& n);

enum class PitResult { NewEntry, FaceAdded };

struct PitEntry {
  ContentName name{};
  std::vector<NodeId> faces;  // insertion order, no duplicates
  Packet first_interest;
  std::int64_t arrivals = 0;
};

/// Pending Interest Table. Entries live until satisfied (no timeout); a
/// satisfied entry is removed immediately, so the table never holds one.
class Pit {
 public:
  /// Registers an Interest arrival from `from`. Creates the entry on first
  /// arrival; otherwise appends the face if absent. A duplicate face still
  /// increments the arrival counter.
  PitResult register_interest(const ContentName& n, NodeId from, const Packet& pkt);

  PitEntry* find(const ContentName& n);
  const PitEntry* find(const ContentName& n) const;
  void erase(const ContentName& n) { entries_.erase(n); }
  std::size_t size() const { return entries_.size(); }
  const std::map<ContentName, PitEntry>& entries() const { return entries_; }

  void dump(std::string& out) const;

 private:
  std::map<ContentName, PitEntry> entries_;
};

/// Forwarding Information Base: per content type, the utility of each
/// neighbour ever used as a face for that type.
class Fib {
 public:
  void update(std::int32_t content_type, NodeId neighbor, double utility);
  bool has_type(std::int32_t content_type) const { return per_type_.count(content_type) != 0; }
  const std::map<NodeId, double>* find_type(std::int32_t content_type) const;
  const std::map<std::int32_t, std::map<NodeId, double>>& entries() const { return per_type_; }

  void dump(std::string& out) const;

 private:
  std::map<std::int32_t, std::map<NodeId, double>> per_type_;
};

/// Current Neighbours Utilities: utilities advertised by nodes currently in
/// contact. All entries for a neighbour are purged when its contact ends.
class CnuTable {
 public:
  void store(std::int32_t content_type, NodeId neighbor, double utility);
  void remove_neighbor(NodeId neighbor);
  std::optional<double> find(std::int32_t content_type, NodeId neighbor) const;
  const std::map<std::pair<std::int32_t, NodeId>, double>& entries() const { return entries_; }

  /// True iff every neighbour referenced by an entry is in `neighbors`.
  bool references_only(const std::set<NodeId>& neighbors) const;

  void dump(std::string& out) const;

 private:
  std::map<std::pair<std::int32_t, NodeId>, double> entries_;
};

struct ForwarderChoice {
  NodeId node = kNoNode;
  double utility = 0.0;
  bool in_contact = false;
};

/// Picks the node with the highest utility for a content type over the CNU
/// entries of current neighbours and all FIB entries. A node listed in both
/// counts with the larger of the two values. Ties break on the smaller
/// NodeId so identical inputs always yield the same output. Nodes in
/// `exclude` (typically the faces an Interest arrived from) are not
/// candidates.
std::optional<ForwarderChoice> best_forwarder(const Fib& fib, const CnuTable& cnu,
                                              std::int32_t content_type,
                                              const std::set<NodeId>& current_neighbors,
                                              const std::vector<NodeId>& exclude = {});

}  // namespace oppccn
