#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

namespace oppccn {

/// Node identifier. Ids are dense 0..N-1 and stable for a whole run.
using NodeId = std::int32_t;

constexpr NodeId kNoNode = -1;

/// A retrievable content unit: one chunk of one content type.
/// Ordered lexicographically so that iteration over names is deterministic.
struct ContentName {
  std::int32_t content_type = 0;
  std::int32_t chunk = 0;

  friend bool operator==(const ContentName& a, const ContentName& b) {
    return a.content_type == b.content_type && a.chunk == b.chunk;
  }
  friend bool operator!=(const ContentName& a, const ContentName& b) { return !(a == b); }
  friend bool operator<(const ContentName& a, const ContentName& b) {
    return std::tie(a.content_type, a.chunk) < std::tie(b.content_type, b.chunk);
  }
  friend bool operator>(const ContentName& a, const ContentName& b) { return b < a; }
  friend bool operator<=(const ContentName& a, const ContentName& b) { return !(b < a); }
  friend bool operator>=(const ContentName& a, const ContentName& b) { return !(a < b); }

  std::string str() const;
};

/// Exact-match naming: no hierarchical prefixes in this protocol family.
inline bool name_matches(const ContentName& interest_name, const ContentName& data_name) {
  return interest_name == data_name;
}

/// One per-content-type entry of a Hello packet.
struct HelloRecord {
  std::int32_t content_type = 0;
  double advertised_utility = 0.0;  // 1/seconds, >= 0
  bool stored_locally = false;      // sender's CS holds at least one chunk of the type
};

enum class PacketKind { Hello, Interest, Data };

/// Monotonically increasing id of a physical packet copy. Every freshly
/// created Interest or Data gets its own instance; moving a packet between
/// nodes keeps the instance, duplicating it does not.
using InstanceId = std::uint64_t;

/// Identifies one request event issued by a consumer (for metrics attribution).
using RequestId = std::uint64_t;

constexpr RequestId kNoRequest = ~RequestId{0};

struct Packet {
  PacketKind kind = PacketKind::Interest;
  ContentName name{};                     // Interest/Data
  NodeId origin = kNoNode;                // Interest only: the consumer (metrics attribution)
  std::int64_t payload_bytes = 0;         // Data only
  std::vector<HelloRecord> hello_records; // Hello only

  // Engine bookkeeping, not part of the on-air size model.
  InstanceId instance = 0;
  RequestId request = kNoRequest;
  std::int32_t hops = 0;                  // inter-node transmissions experienced so far
};

/// Byte-size model for traffic accounting. The paper reports bytes but no
/// header formats, so sizes are configurable constants.
struct SizeModel {
  std::int64_t hello_base_bytes = 8;
  std::int64_t hello_record_bytes = 9;  // type 4B + utility 4B + flag 1B
  std::int64_t interest_bytes = 16;
  std::int64_t data_header_bytes = 16;
  std::int64_t payload_bytes = 1024;

  std::int64_t size_bytes(const Packet& p) const;
};

Packet make_hello(std::vector<HelloRecord> records);
Packet make_interest(const ContentName& n, NodeId origin, InstanceId instance, RequestId request);
Packet make_data(const ContentName& n, std::int64_t payload_bytes, InstanceId instance);

}  // namespace oppccn
