#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oppccn/core.hpp"

namespace oppccn {

/// Percentage increase of cache utilization with respect to its initial
/// size: (c_final - c_initial) / c_initial * 100. Undefined for an empty
/// initial placement.
double cache_utilization(std::int64_t c_initial, std::int64_t c_final);

/// Performance indices of one run.
struct MetricsReport {
  std::int64_t run_index = 0;
  std::string protocol;
  bool caching = true;
  bool retransmission = true;

  std::int64_t requests_total = 0;
  std::int64_t requests_home = 0;
  std::int64_t requests_foreign = 0;
  std::int64_t delivered = 0;
  std::int64_t delivered_home = 0;
  std::int64_t delivered_foreign = 0;
  std::int64_t duplicates = 0;
  std::int64_t dropped_interests = 0;  // diagnostics, not a CSV column

  std::vector<double> delays_s;       // one per delivery
  std::vector<std::int32_t> hops;     // one per delivery
  std::map<RequestId, double> delivery_time_by_request;

  std::int64_t bytes_interest = 0;
  std::int64_t bytes_data = 0;
  std::int64_t bytes_control = 0;

  std::int64_t cs_initial = 0;
  std::int64_t cs_final = 0;

  double delivery_rate() const;
  std::optional<double> delivery_rate_home() const;
  std::optional<double> delivery_rate_foreign() const;
  std::optional<double> delay_mean_s() const;
  std::optional<double> delay_median_s() const;
  std::optional<double> hops_mean() const;
  double cache_utilization_pct() const { return cache_utilization(cs_initial, cs_final); }

  void record_delivery(double request_time, double delivery_time, std::int32_t hop_count,
                       bool home);
  void record_transmission(const Packet& p, const SizeModel& sizes);
};

/// Tracks outstanding requests per (consumer, name) so Data arrivals can be
/// attributed: the first arrival satisfies every outstanding request for the
/// name, later arrivals count as duplicates.
class RequestTracker {
 public:
  enum class Arrival { Delivered, Duplicate, Untracked };

  void on_request(NodeId consumer, const ContentName& n, RequestId rid, double time, bool home);

  /// Data for `n` reached `consumer` (by transmission or local possession).
  Arrival on_data_at_consumer(NodeId consumer, const ContentName& n, std::int32_t hop_count,
                              double now, MetricsReport& report);

  bool has_outstanding(NodeId consumer, const ContentName& n) const;
  bool ever_requested(NodeId consumer, const ContentName& n) const;
  std::int64_t outstanding_total() const;

 private:
  struct Pending {
    RequestId rid;
    double time;
    bool home;
  };
  std::map<std::pair<NodeId, ContentName>, std::vector<Pending>> outstanding_;
  std::map<std::pair<NodeId, ContentName>, std::int64_t> seen_;
};

/// Per-index mean and Student-t 95% confidence half-width across runs.
struct AggregateValue {
  std::optional<double> mean;
  std::optional<double> ci95;  // absent when fewer than two defined samples
};

struct AggregateReport {
  std::int64_t n_runs = 0;
  std::map<std::string, AggregateValue> values;  // keyed by CSV column name
};

AggregateReport aggregate(const std::vector<MetricsReport>& runs);

/// CSV emission: fixed columns, one row per run plus an AGG row carrying
/// means and *_ci95 companions.
std::string csv_header();
std::string csv_row(const MetricsReport& r);
std::string csv_aggregate_row(const std::vector<MetricsReport>& runs);
std::string to_csv(const std::vector<MetricsReport>& runs);

/// Student-t 0.975 quantile with the given degrees of freedom.
double student_t_975(std::int64_t dof);

}  // namespace oppccn
