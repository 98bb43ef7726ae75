#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>

#include "oppccn/core.hpp"
#include "oppccn/tables.hpp"

namespace oppccn {

enum class IctEstimatorKind { Mean, Ewma };

/// How the advertised (overall) utility is computed: the literal maximum
/// over every value ever recorded, or a recomputation over the live FIB.
enum class OwnUtilityMode { History, Live };

struct UtilityParams {
  double u_cap = 1e6;  // 1/s, caps the ICT->0 singularity
  // Bootstrap ICT before the first observed gap. Deliberately pessimistic:
  // a first encounter must seed the FIB below the utility of nodes with
  // real contact statistics, or the max-over-history rule freezes the
  // inflated seed and flattens the gradient.
  double ict_init = 1e5;
  IctEstimatorKind estimator = IctEstimatorKind::Mean;
  double ewma_weight = 0.5;
};

/// Direct utility of a node for a content type (1/ICT, saturated at u_cap).
double direct_utility(double ict_pi, const UtilityParams& params);

/// Indirect utility for a content type through a neighbour advertising u_qi,
/// met with mean inter-contact time ict_pq. Zero advertised utility cannot
/// help, so the result is 0 in that case.
double indirect_utility(double u_qi, double ict_pq);

/// Overall utility: max of the direct utility and all indirect utilities.
double overall_utility(double direct, const std::map<NodeId, double>& indirects);

/// Running estimator of inter-contact times, keyed either by peer NodeId or
/// by content type. Updated on contact-begin sightings only; zero-length
/// gaps (simultaneous events) are ignored.
template <class Key>
class IctEstimator {
 public:
  struct Entry {
    double last_seen = 0.0;
    double mean = 0.0;
    std::int64_t samples = 0;
  };

  void record(const Key& key, double now, const UtilityParams& params) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      entries_.emplace(key, Entry{now, 0.0, 0});
      return;
    }
    Entry& e = it->second;
    const double gap = now - e.last_seen;
    e.last_seen = now;
    if (gap <= 0.0) return;
    if (params.estimator == IctEstimatorKind::Ewma) {
      e.mean = e.samples == 0 ? gap : params.ewma_weight * gap + (1.0 - params.ewma_weight) * e.mean;
    } else {
      e.mean += (gap - e.mean) / static_cast<double>(e.samples + 1);
    }
    e.samples += 1;
  }

  /// Mean inter-contact time, or `fallback` before the first observed gap.
  double mean_or(const Key& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end() || it->second.samples == 0) return fallback;
    return it->second.mean;
  }

  std::optional<Entry> find(const Key& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<Key, Entry> entries_;
};

/// Per content type: the current direct utility plus the overall utility as
/// the literal maximum over every direct and indirect value ever recorded,
/// which keeps the advertised value dominating all values handed to the FIB.
class UtilityTable {
 public:
  void set_direct(std::int32_t content_type, double value) {
    direct_[content_type] = value;
    fold_own(content_type, value);
  }
  void fold_indirect(std::int32_t content_type, double value) { fold_own(content_type, value); }

  double direct(std::int32_t content_type) const {
    auto it = direct_.find(content_type);
    return it == direct_.end() ? 0.0 : it->second;
  }
  double own(std::int32_t content_type) const {
    auto it = own_.find(content_type);
    return it == own_.end() ? 0.0 : it->second;
  }

  /// Types with any recorded utility, ascending.
  std::vector<std::int32_t> known_types() const;

 private:
  void fold_own(std::int32_t content_type, double value) {
    auto [it, inserted] = own_.emplace(content_type, value);
    if (!inserted) it->second = std::max(it->second, value);
  }

  std::map<std::int32_t, double> direct_;
  std::map<std::int32_t, double> own_;
};

/// Routing-side state of one MobCCN node: everything Hello construction and
/// processing touch.
struct MobccnState {
  ContentStore cs;
  Fib fib;
  CnuTable cnu;
  IctEstimator<NodeId> peer_ict;
  IctEstimator<std::int32_t> type_ict;
  UtilityTable util;
  std::int64_t malformed_hello_records = 0;
};

/// One record per content type the node has positive utility for or stores.
Packet build_hello(const MobccnState& state);

/// Algorithm 1: processing of a Hello received from `from` while in contact.
/// The pairwise ICT estimator must already reflect this contact-begin.
void process_hello(MobccnState& state, const Packet& hello, NodeId from, double now,
                   const UtilityParams& params);

}  // namespace oppccn
