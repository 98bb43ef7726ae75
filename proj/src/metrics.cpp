#include "oppccn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace oppccn {

double cache_utilization(std::int64_t c_initial, std::int64_t c_final) {
  if (c_initial <= 0) {
    throw std::invalid_argument("cache_utilization: initial content count must be positive");
  }
  return static_cast<double>(c_final - c_initial) / static_cast<double>(c_initial) * 100.0;
}

double MetricsReport::delivery_rate() const {
  if (requests_total == 0) return 0.0;
  return static_cast<double>(delivered) / static_cast<double>(requests_total);
}

std::optional<double> MetricsReport::delivery_rate_home() const {
  if (requests_home == 0) return std::nullopt;
  return static_cast<double>(delivered_home) / static_cast<double>(requests_home);
}

std::optional<double> MetricsReport::delivery_rate_foreign() const {
  if (requests_foreign == 0) return std::nullopt;
  return static_cast<double>(delivered_foreign) / static_cast<double>(requests_foreign);
}

std::optional<double> MetricsReport::delay_mean_s() const {
  if (delays_s.empty()) return std::nullopt;
  return std::accumulate(delays_s.begin(), delays_s.end(), 0.0) /
         static_cast<double>(delays_s.size());
}

std::optional<double> MetricsReport::delay_median_s() const {
  if (delays_s.empty()) return std::nullopt;
  std::vector<double> v = delays_s;
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  if (v.size() % 2 == 1) return v[k];
  return 0.5 * (v[k - 1] + v[k]);
}

std::optional<double> MetricsReport::hops_mean() const {
  if (hops.empty()) return std::nullopt;
  return std::accumulate(hops.begin(), hops.end(), 0.0) / static_cast<double>(hops.size());
}

void MetricsReport::record_delivery(double request_time, double delivery_time,
                                    std::int32_t hop_count, bool home) {
  if (delivery_time < request_time) {
    throw std::logic_error("record_delivery: delivery precedes its request");
  }
  delays_s.push_back(delivery_time - request_time);
  hops.push_back(hop_count);
  delivered += 1;
  if (home) {
    delivered_home += 1;
  } else {
    delivered_foreign += 1;
  }
}

void MetricsReport::record_transmission(const Packet& p, const SizeModel& sizes) {
  const std::int64_t bytes = sizes.size_bytes(p);
  switch (p.kind) {
    case PacketKind::Interest:
      bytes_interest += bytes;
      break;
    case PacketKind::Data:
      bytes_data += bytes;
      break;
    case PacketKind::Hello:
      bytes_control += bytes;
      break;
  }
}

void RequestTracker::on_request(NodeId consumer, const ContentName& n, RequestId rid,
                                double time, bool home) {
  outstanding_[{consumer, n}].push_back({rid, time, home});
  seen_[{consumer, n}] += 1;
}

RequestTracker::Arrival RequestTracker::on_data_at_consumer(NodeId consumer,
                                                            const ContentName& n,
                                                            std::int32_t hop_count, double now,
                                                            MetricsReport& report) {
  auto key = std::make_pair(consumer, n);
  auto it = outstanding_.find(key);
  if (it != outstanding_.end() && !it->second.empty()) {
    for (const Pending& p : it->second) {
      report.record_delivery(p.time, now, hop_count, p.home);
      report.delivery_time_by_request.emplace(p.rid, now);
    }
    outstanding_.erase(it);
    return Arrival::Delivered;
  }
  if (seen_.count(key) != 0) {
    report.duplicates += 1;
    return Arrival::Duplicate;
  }
  return Arrival::Untracked;
}

bool RequestTracker::has_outstanding(NodeId consumer, const ContentName& n) const {
  auto it = outstanding_.find({consumer, n});
  return it != outstanding_.end() && !it->second.empty();
}

bool RequestTracker::ever_requested(NodeId consumer, const ContentName& n) const {
  return seen_.count({consumer, n}) != 0;
}

std::int64_t RequestTracker::outstanding_total() const {
  std::int64_t total = 0;
  for (const auto& [key, v] : outstanding_) {
    (void)key;
    total += static_cast<std::int64_t>(v.size());
  }
  return total;
}

double student_t_975(std::int64_t dof) {
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

namespace {

const char* const kColumns[] = {
    "delivery_rate", "delivery_home", "delivery_foreign", "delay_mean_s", "delay_median_s",
    "bytes_interest", "bytes_data",   "bytes_control",    "hops_mean",    "duplicates",
    "cache_util_pct",
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::optional<double> column_value(const MetricsReport& r, const std::string& col) {
  if (col == "delivery_rate") return r.delivery_rate();
  if (col == "delivery_home") return r.delivery_rate_home();
  if (col == "delivery_foreign") return r.delivery_rate_foreign();
  if (col == "delay_mean_s") return r.delay_mean_s();
  if (col == "delay_median_s") return r.delay_median_s();
  if (col == "bytes_interest") return static_cast<double>(r.bytes_interest);
  if (col == "bytes_data") return static_cast<double>(r.bytes_data);
  if (col == "bytes_control") return static_cast<double>(r.bytes_control);
  if (col == "hops_mean") return r.hops_mean();
  if (col == "duplicates") return static_cast<double>(r.duplicates);
  if (col == "cache_util_pct") {
    if (r.cs_initial <= 0) return std::nullopt;  // no initial placement: undefined
    return r.cache_utilization_pct();
  }
  throw std::logic_error("unknown metrics column: " + col);
}

AggregateValue aggregate_column(const std::vector<MetricsReport>& runs, const std::string& col) {
  std::vector<double> xs;
  for (const MetricsReport& r : runs) {
    if (auto v = column_value(r, col)) xs.push_back(*v);
  }
  AggregateValue out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  out.mean = mean;
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    out.ci95 = student_t_975(static_cast<std::int64_t>(xs.size()) - 1) * sd / std::sqrt(n);
  }
  return out;
}

}  // namespace

AggregateReport aggregate(const std::vector<MetricsReport>& runs) {
  AggregateReport agg;
  agg.n_runs = static_cast<std::int64_t>(runs.size());
  for (const char* col : kColumns) {
    agg.values[col] = aggregate_column(runs, col);
  }
  return agg;
}

std::string csv_header() {
  std::string h = "run,protocol,cache,retrans";
  for (const char* col : kColumns) {
    h += ",";
    h += col;
  }
  for (const char* col : kColumns) {
    h += ",";
    h += col;
    h += "_ci95";
  }
  h += "\n";
  return h;
}

namespace {

std::string row_prefix(const std::string& run, const MetricsReport& r) {
  return run + "," + r.protocol + "," + (r.caching ? "on" : "off") + "," +
         (r.retransmission ? "on" : "off");
}

}  // namespace

std::string csv_row(const MetricsReport& r) {
  std::string row = row_prefix(std::to_string(r.run_index), r);
  for (const char* col : kColumns) {
    row += ",";
    const std::string name = col;
    if (name == "bytes_interest") {
      row += std::to_string(r.bytes_interest);
    } else if (name == "bytes_data") {
      row += std::to_string(r.bytes_data);
    } else if (name == "bytes_control") {
      row += std::to_string(r.bytes_control);
    } else if (name == "duplicates") {
      row += std::to_string(r.duplicates);
    } else {
      row += fmt_opt(column_value(r, name));
    }
  }
  for (const char* col : kColumns) {
    (void)col;
    row += ",";
  }
  row += "\n";
  return row;
}

std::string csv_aggregate_row(const std::vector<MetricsReport>& runs) {
  if (runs.empty()) return "";
  const AggregateReport agg = aggregate(runs);
  std::string row = row_prefix("AGG", runs.front());
  for (const char* col : kColumns) {
    row += ",";
    row += fmt_opt(agg.values.at(col).mean);
  }
  for (const char* col : kColumns) {
    row += ",";
    row += fmt_opt(agg.values.at(col).ci95);
  }
  row += "\n";
  return row;
}

std::string to_csv(const std::vector<MetricsReport>& runs) {
  std::string out = csv_header();
  for (const MetricsReport& r : runs) out += csv_row(r);
  out += csv_aggregate_row(runs);
  return out;
}

}  // namespace oppccn
