#include "oppccn/routing.hpp"

namespace oppccn {

double direct_utility(double ict_pi, const UtilityParams& params) {
  if (ict_pi < 1.0 / params.u_cap) return params.u_cap;
  return 1.0 / ict_pi;
}

double indirect_utility(double u_qi, double ict_pq) {
  if (u_qi <= 0.0) return 0.0;
  return 1.0 / (1.0 / u_qi + ict_pq);
}

double overall_utility(double direct, const std::map<NodeId, double>& indirects) {
  double best = direct;
  for (const auto& [node, value] : indirects) {
    (void)node;
    best = std::max(best, value);
  }
  return best;
}

std::vector<std::int32_t> UtilityTable::known_types() const {
  std::vector<std::int32_t> types;
  for (const auto& [t, v] : own_) {
    if (v > 0.0) types.push_back(t);
  }
  return types;
}

Packet build_hello(const MobccnState& state) {
  std::set<std::int32_t> types;
  for (std::int32_t t : state.util.known_types()) types.insert(t);
  for (const auto& [name, entry] : state.cs.entries()) {
    (void)entry;
    types.insert(name.content_type);
  }
  std::vector<HelloRecord> records;
  records.reserve(types.size());
  for (std::int32_t t : types) {
    HelloRecord r;
    r.content_type = t;
    r.advertised_utility = state.util.own(t);
    r.stored_locally = state.cs.holds_type(t);
    records.push_back(r);
  }
  return make_hello(std::move(records));
}

void process_hello(MobccnState& state, const Packet& hello, NodeId from, double now,
                   const UtilityParams& params) {
  for (const HelloRecord& rec : hello.hello_records) {
    if (rec.advertised_utility < 0.0) {
      state.malformed_hello_records += 1;
      continue;
    }
    const std::int32_t i = rec.content_type;
    state.cnu.store(i, from, rec.advertised_utility);

    double value;
    if (rec.stored_locally) {
      // Meeting a holder of type i is an encounter with the type itself.
      state.type_ict.record(i, now, params);
      value = direct_utility(state.type_ict.mean_or(i, params.ict_init), params);
      state.util.set_direct(i, value);
    } else {
      value = indirect_utility(rec.advertised_utility,
                               state.peer_ict.mean_or(from, params.ict_init));
      state.util.fold_indirect(i, value);
    }
    state.fib.update(i, from, value);
  }
}

}  // namespace oppccn
