#include "oppccn/core.hpp"

namespace oppccn {

std::string ContentName::str() const {
  return "(" + std::to_string(content_type) + "," + std::to_string(chunk) + ")";
}

std::int64_t SizeModel::size_bytes(const Packet& p) const {
  switch (p.kind) {
    case PacketKind::Hello:
      return hello_base_bytes +
             hello_record_bytes * static_cast<std::int64_t>(p.hello_records.size());
    case PacketKind::Interest:
      return interest_bytes;
    case PacketKind::Data:
      return data_header_bytes + p.payload_bytes;
  }
  return 0;
}

Packet make_hello(std::vector<HelloRecord> records) {
  Packet p;
  p.kind = PacketKind::Hello;
  p.hello_records = std::move(records);
  return p;
}

Packet make_interest(const ContentName& n, NodeId origin, InstanceId instance, RequestId request) {
  Packet p;
  p.kind = PacketKind::Interest;
  p.name = n;
  p.origin = origin;
  p.instance = instance;
  p.request = request;
  return p;
}

Packet make_data(const ContentName& n, std::int64_t payload_bytes, InstanceId instance) {
  Packet p;
  p.kind = PacketKind::Data;
  p.name = n;
  p.payload_bytes = payload_bytes;
  p.instance = instance;
  return p;
}

}  // namespace oppccn
