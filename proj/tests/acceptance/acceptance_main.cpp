// Acceptance suite: runs every documented acceptance property of the
// simulator over seeded runs of the bundled presets and prints one pass/fail
// line per criterion. Exits non-zero when any criterion fails.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "oppccn/config.hpp"
#include "oppccn/engine.hpp"
#include "oppccn/metrics.hpp"
#include "oppccn/protocols.hpp"
#include "oppccn/rng.hpp"

using namespace oppccn;

namespace {

constexpr int kSeeds = 10;

struct CriterionResult {
  int id;
  std::string label;
  bool pass;
  std::string detail;
};

std::vector<CriterionResult> g_results;

void report(int id, const std::string& label, bool pass, const std::string& detail) {
  g_results.push_back({id, label, pass, detail});
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 4u);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Shared run machinery

struct RunResult {
  MetricsReport report;
  std::int64_t single_copy_violations = 0;
};

RunResult run_with_checks(const RunInputs& inputs, const ProtocolConfig& pcfg,
                          bool scan_single_copy) {
  auto protocol = make_protocol(pcfg);
  Sim sim(inputs, pcfg, *protocol);
  RunResult out;
  if (scan_single_copy) {
    out.single_copy_violations = 0;
    sim.post_event_hook = [&](const Sim& s) {
      std::map<InstanceId, std::int64_t> copies;
      s.protocol().count_live_interests(copies);
      for (const auto& [iid, count] : copies) {
        (void)iid;
        if (count > 1) out.single_copy_violations += 1;
      }
    };
  }
  out.report = sim.run();
  return out;
}

// All runs of one protocol configuration across the seed set, on pinned
// per-seed traces so protocols are compared on identical inputs.
std::vector<RunResult> run_seeds(const ScenarioConfig& cfg,
                                 const std::vector<ContactTrace>& traces,
                                 bool scan_single_copy) {
  std::vector<RunResult> results(traces.size());
  const ProtocolConfig pcfg = cfg.protocol_config();
  parallel_for(traces.size(), [&](std::size_t s) {
    const RunInputs inputs =
        build_run_inputs(cfg, static_cast<std::int64_t>(s), &traces[s], nullptr);
    results[s] = run_with_checks(inputs, pcfg, scan_single_copy);
    results[s].report.run_index = static_cast<std::int64_t>(s);
  });
  return results;
}

std::vector<ContactTrace> make_traces(const ScenarioConfig& cfg) {
  std::vector<ContactTrace> traces(kSeeds);
  parallel_for(kSeeds, [&](std::size_t s) {
    MobilityConfig m = cfg.mobility;
    m.seed = substream_seed(cfg.base_seed, "mobility", s);
    traces[s] = generate_trace(m);
  });
  return traces;
}

// Ideal Epidemic delivery-time dominance accumulator (criterion 4).
struct Dominance {
  std::int64_t compared = 0;
  std::int64_t violations = 0;

  void fold(const MetricsReport& epidemic, const MetricsReport& other) {
    for (const auto& [rid, t_other] : other.delivery_time_by_request) {
      compared += 1;
      auto it = epidemic.delivery_time_by_request.find(rid);
      if (it == epidemic.delivery_time_by_request.end() || it->second > t_other) {
        violations += 1;
      }
    }
  }
};

std::int64_t total_bytes(const MetricsReport& r) {
  return r.bytes_interest + r.bytes_data + r.bytes_control;
}

// ---------------------------------------------------------------------------
// Criterion 10: closed-form formula suite

void criterion_formulas() {
  RngStream rng(2024);
  const UtilityParams params;
  std::int64_t checked = 0;
  double worst = 0.0;
  auto rel_err = [](double got, long double want) {
    const long double denom = std::max<long double>(std::fabs(want), 1e-300L);
    return static_cast<double>(std::fabs(static_cast<long double>(got) - want) / denom);
  };

  for (int i = 0; i < 200; ++i) {
    // Eq. 1: direct utility (above the saturation knee).
    const double ict = rng.uniform(1e-5, 1e5);
    worst = std::max(worst, rel_err(direct_utility(ict, params), 1.0L / static_cast<long double>(ict)));

    // Eq. 2 via the algebraically different route u/(1+u*t).
    const double u = rng.uniform(1e-6, 1e5);
    const double t = rng.uniform(0.0, 1e5);
    const long double want_ind = static_cast<long double>(u) /
                                 (1.0L + static_cast<long double>(u) * static_cast<long double>(t));
    worst = std::max(worst, rel_err(indirect_utility(u, t), want_ind));

    // Eq. 3: max over direct and indirect values.
    std::map<NodeId, double> indirects;
    long double want_max = rng.uniform(0.0, 1.0);
    const double direct = static_cast<double>(want_max);
    for (int j = 0; j < 5; ++j) {
      const double v = rng.uniform(0.0, 1.0);
      indirects[j] = v;
      want_max = std::max(want_max, static_cast<long double>(v));
    }
    worst = std::max(worst, rel_err(overall_utility(direct, indirects), want_max));

    // Eq. 4 via cf/ci - 1.
    const auto ci = static_cast<std::int64_t>(1 + rng.uniform_index(1000));
    const auto cf = ci + static_cast<std::int64_t>(rng.uniform_index(100000));
    const long double want_cu =
        (static_cast<long double>(cf) / static_cast<long double>(ci) - 1.0L) * 100.0L;
    worst = std::max(worst, rel_err(cache_utilization(ci, cf), want_cu));
    checked += 4;
  }
  report(10, "formula suite vs closed forms", worst <= 1e-12,
         std::to_string(checked) + " values, worst rel err " + fmt(worst));
}

// ---------------------------------------------------------------------------
// Criterion 11: breadcrumb oracle on the fixed walkthrough traces

RunInputs fixed_chain_inputs(std::int32_t n_nodes, NodeId producer, NodeId consumer,
                             std::vector<ContactEvent> events, double request_time,
                             double duration) {
  RunInputs in;
  in.n_nodes = n_nodes;
  in.duration = duration;
  in.trace.events = std::move(events);
  in.placement.by_producer[producer].insert({0, 0});
  in.placement.owner[{0, 0}] = producer;
  in.roles.producers = {producer};
  in.roles.consumers = {consumer};
  in.requests = {{request_time, consumer, {0, 0}, 0, true}};
  in.coin_seed = 1;
  return in;
}

void criterion_breadcrumbs() {
  using Path = std::vector<std::pair<NodeId, NodeId>>;
  bool pass = true;
  std::string detail;

  auto run_and_paths = [&](const RunInputs& in, Path& interest, Path& data,
                           MetricsReport& rep) {
    const ProtocolConfig cfg = protocol_from_name("mobccn");
    auto protocol = make_protocol(cfg);
    Sim sim(in, cfg, *protocol);
    sim.enable_txlog();
    rep = sim.run();
    for (const Transmission& t : sim.txlog()) {
      if (t.kind == PacketKind::Interest) interest.push_back({t.from, t.to});
      if (t.kind == PacketKind::Data) data.push_back({t.from, t.to});
    }
  };

  {
    // Three nodes: interest 0->1 (held) ->2, data 2->1->0, 2 hops, delay 400.
    std::vector<ContactEvent> ev = {
        {100, 1, 2, ContactKind::Up}, {200, 1, 2, ContactKind::Down},
        {300, 0, 1, ContactKind::Up}, {500, 0, 1, ContactKind::Down},
        {600, 1, 2, ContactKind::Up}, {700, 1, 2, ContactKind::Down},
        {800, 0, 1, ContactKind::Up}, {900, 0, 1, ContactKind::Down},
    };
    Path interest, data;
    MetricsReport rep;
    run_and_paths(fixed_chain_inputs(3, 2, 0, ev, 400.0, 1000.0), interest, data, rep);
    const Path want_i = {{0, 1}, {1, 2}};
    const Path want_d = {{2, 1}, {1, 0}};
    if (interest != want_i || data != want_d || rep.hops != std::vector<std::int32_t>{2} ||
        rep.delays_s != std::vector<double>{400.0}) {
      pass = false;
      detail += "3-node path mismatch; ";
    }
  }
  {
    // Five nodes: gradient then sequential contacts; 4 hops each way.
    std::vector<ContactEvent> ev = {
        {100, 3, 4, ContactKind::Up},  {150, 3, 4, ContactKind::Down},
        {200, 2, 3, ContactKind::Up},  {250, 2, 3, ContactKind::Down},
        {300, 1, 2, ContactKind::Up},  {350, 1, 2, ContactKind::Down},
        {400, 0, 1, ContactKind::Up},  {450, 0, 1, ContactKind::Down},
        {1000, 0, 1, ContactKind::Up}, {1050, 0, 1, ContactKind::Down},
        {1100, 1, 2, ContactKind::Up}, {1150, 1, 2, ContactKind::Down},
        {1200, 2, 3, ContactKind::Up}, {1250, 2, 3, ContactKind::Down},
        {1300, 3, 4, ContactKind::Up}, {1350, 3, 4, ContactKind::Down},
        {1400, 2, 3, ContactKind::Up}, {1450, 2, 3, ContactKind::Down},
        {1500, 1, 2, ContactKind::Up}, {1550, 1, 2, ContactKind::Down},
        {1600, 0, 1, ContactKind::Up}, {1650, 0, 1, ContactKind::Down},
    };
    Path interest, data;
    MetricsReport rep;
    run_and_paths(fixed_chain_inputs(5, 4, 0, ev, 500.0, 2000.0), interest, data, rep);
    const Path want_i = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    const Path want_d = {{4, 3}, {3, 2}, {2, 1}, {1, 0}};
    bool reversed = data.size() == interest.size();
    for (std::size_t i = 0; reversed && i < interest.size(); ++i) {
      const auto& f = interest[i];
      const auto& b = data[data.size() - 1 - i];
      reversed = f.first == b.second && f.second == b.first;
    }
    if (interest != want_i || data != want_d || !reversed ||
        rep.hops != std::vector<std::int32_t>{4}) {
      pass = false;
      detail += "5-node path mismatch; ";
    }
  }
  if (pass) detail = "3-node and 5-node data paths reverse the interest paths exactly";
  report(11, "breadcrumb oracle on fixed traces", pass, detail);
}

// ---------------------------------------------------------------------------
// Scenario A criteria (1, 2, 3, part of 4)

void scenario_a_criteria(Dominance& dominance) {
  ScenarioConfig base = load_config("scenario_a");
  const std::vector<ContactTrace> traces = make_traces(base);

  struct Cell {
    int consumers;
    int requests;
    double mob_delivery;
    double epi_delivery;
    double bytes_ratio;
  };
  std::vector<Cell> cells;

  for (int consumers : {1, 2, 5}) {
    for (int requests : {50, 100}) {
      ScenarioConfig cfg = base;
      cfg.traffic.n_consumers = consumers;
      cfg.traffic.requests_per_consumer = requests;
      cfg.caching = true;

      cfg.protocol = "mobccn";
      const auto mob = run_seeds(cfg, traces, false);
      cfg.protocol = "epidemic_ideal";
      const auto epi = run_seeds(cfg, traces, false);

      std::vector<double> mob_rates, epi_rates, mob_bytes, epi_bytes;
      for (int s = 0; s < kSeeds; ++s) {
        mob_rates.push_back(mob[s].report.delivery_rate());
        epi_rates.push_back(epi[s].report.delivery_rate());
        mob_bytes.push_back(static_cast<double>(total_bytes(mob[s].report)));
        epi_bytes.push_back(static_cast<double>(total_bytes(epi[s].report)));
        dominance.fold(epi[s].report, mob[s].report);
      }
      cells.push_back({consumers, requests, mean_of(mob_rates), mean_of(epi_rates),
                       mean_of(mob_bytes) / mean_of(epi_bytes)});
    }
  }

  bool c1 = true;
  double worst_delivery = 1.0;
  bool c2 = true;
  double worst_ratio = 0.0;
  for (const Cell& c : cells) {
    worst_delivery = std::min({worst_delivery, c.mob_delivery, c.epi_delivery});
    if (c.mob_delivery < 0.95 || c.epi_delivery < 0.95) c1 = false;
    worst_ratio = std::max(worst_ratio, c.bytes_ratio);
    if (c.bytes_ratio > 0.2) c2 = false;
  }
  report(1, "scenario A delivery >= 0.95 for all loads (mobccn & ideal epidemic)", c1,
         "worst mean delivery " + fmt(worst_delivery));
  report(2, "scenario A mobccn traffic <= 0.2 x ideal epidemic", c2,
         "worst bytes ratio " + fmt(worst_ratio));

  // Criterion 3 on the bundled default load, caching off so the epidemic
  // denominator reflects transfers rather than pre-cached hits.
  {
    ScenarioConfig cfg = base;
    cfg.caching = false;
    cfg.protocol = "mobccn";
    const auto mob = run_seeds(cfg, traces, false);
    cfg.protocol = "epidemic_ideal";
    const auto epi = run_seeds(cfg, traces, false);
    std::vector<double> mob_delays, epi_delays;
    for (int s = 0; s < kSeeds; ++s) {
      if (auto d = mob[s].report.delay_mean_s()) mob_delays.push_back(*d);
      if (auto d = epi[s].report.delay_mean_s()) epi_delays.push_back(*d);
      dominance.fold(epi[s].report, mob[s].report);
    }
    const double ratio = mean_of(mob_delays) / mean_of(epi_delays);
    report(3, "scenario A delay ratio mobccn/epidemic in [1,6]", ratio >= 1.0 && ratio <= 6.0,
           "ratio " + fmt(ratio) + " (mobccn " + fmt(mean_of(mob_delays)) + "s, epidemic " +
               fmt(mean_of(epi_delays)) + "s)");
  }
}

// ---------------------------------------------------------------------------
// Scenario B criteria (5, 6, 7, 8, 9, rest of 4)

void scenario_b_criteria(Dominance& dominance) {
  ScenarioConfig base = load_config("scenario_b");
  const std::vector<ContactTrace> traces = make_traces(base);

  const std::vector<std::string> protocols = {"epidemic_ideal", "mobccn_noretrans",
                                              "epi1copy_noretrans", "epi1copy"};
  // results[cache][protocol] = per-seed runs
  std::map<bool, std::map<std::string, std::vector<RunResult>>> results;
  for (bool caching : {true, false}) {
    for (const std::string& name : protocols) {
      ScenarioConfig cfg = base;
      cfg.caching = caching;
      cfg.protocol = name;
      const bool scan = name != "epidemic_ideal";  // replication is the point there
      results[caching][name] = run_seeds(cfg, traces, scan);
    }
  }

  // Criterion 4: epidemic delivery-time dominance, same cache mode.
  for (bool caching : {true, false}) {
    const auto& epi = results[caching]["epidemic_ideal"];
    for (const std::string& name : protocols) {
      if (name == "epidemic_ideal") continue;
      for (int s = 0; s < kSeeds; ++s) {
        dominance.fold(epi[s].report, results[caching][name][s].report);
      }
    }
  }

  // Criterion 5: single-copy scans.
  std::int64_t violations = 0;
  for (bool caching : {true, false}) {
    for (const std::string& name : {"mobccn_noretrans", "epi1copy_noretrans", "epi1copy"}) {
      for (const RunResult& r : results[caching][name]) violations += r.single_copy_violations;
    }
  }
  report(5, "single-copy invariant (global scan after every event)", violations == 0,
         violations == 0 ? "no duplicated live interest instance"
                         : std::to_string(violations) + " violations");

  // Criterion 6: zero duplicates without retransmission.
  std::int64_t dup = 0;
  for (bool caching : {true, false}) {
    for (const std::string& name : {"mobccn_noretrans", "epi1copy_noretrans"}) {
      for (const RunResult& r : results[caching][name]) dup += r.report.duplicates;
    }
  }
  report(6, "noReTrans variants deliver zero duplicate data", dup == 0,
         dup == 0 ? "duplicates = 0 in all runs" : std::to_string(dup) + " duplicates");

  // Criterion 7: delivery-rate ordering and the cache-off resilience bound.
  auto mean_delivery = [&](bool caching, const std::string& name) {
    std::vector<double> xs;
    for (const RunResult& r : results[caching][name]) xs.push_back(r.report.delivery_rate());
    return mean_of(xs);
  };
  bool c7 = true;
  std::string c7_detail;
  for (bool caching : {true, false}) {
    const double epi = mean_delivery(caching, "epidemic_ideal");
    const double mob = mean_delivery(caching, "mobccn_noretrans");
    const double e1 = mean_delivery(caching, "epi1copy_noretrans");
    if (!(epi >= mob && mob >= e1)) c7 = false;
    c7_detail += std::string(caching ? "cache" : "nocache") + ": epi " + fmt(epi) + " >= mob " +
                 fmt(mob) + " >= 1copy " + fmt(e1) + "; ";
  }
  const double mob_cache = mean_delivery(true, "mobccn_noretrans");
  const double mob_nocache = mean_delivery(false, "mobccn_noretrans");
  if (!(mob_nocache >= 0.9 * mob_cache)) c7 = false;
  c7_detail += "nocache/cache " + fmt(mob_nocache / mob_cache);
  report(7, "scenario B delivery ordering and cache-off resilience", c7, c7_detail);

  // Criterion 8: foreign-community delivery gap, per seed (caching on).
  int wins = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto mob = results[true]["mobccn_noretrans"][s].report.delivery_rate_foreign();
    const auto e1 = results[true]["epi1copy_noretrans"][s].report.delivery_rate_foreign();
    if (mob.value_or(0.0) > e1.value_or(0.0)) ++wins;
  }
  report(8, "scenario B foreign delivery: mobccn/noretrans beats epi1copy/noretrans", wins >= 8,
         std::to_string(wins) + "/10 seed wins");

  // Criterion 9: cache growth extremes with caching on.
  bool epi_max = true;
  double epi_min_util = 1e18;
  for (const RunResult& r : results[true]["epidemic_ideal"]) {
    const double u = r.report.cache_utilization_pct();
    epi_min_util = std::min(epi_min_util, u);
    if (u != 2900.0) epi_max = false;
  }
  std::vector<double> mob_utils;
  for (const RunResult& r : results[true]["mobccn_noretrans"]) {
    mob_utils.push_back(r.report.cache_utilization_pct());
  }
  const double mob_util = mean_of(mob_utils);
  report(9, "scenario B cache growth: epidemic hits 2900%, mobccn/noretrans < 600%",
         epi_max && mob_util < 600.0,
         "epidemic min " + fmt(epi_min_util) + "%, mobccn mean " + fmt(mob_util) + "%");
}

// ---------------------------------------------------------------------------
// Criterion 12: byte-identical CSV determinism

void criterion_determinism() {
  ScenarioConfig cfg = load_config("scenario_a");
  cfg.n_runs = 2;
  cfg.base_seed = 77;
  const std::string csv1 = to_csv(multi_run(cfg, 2));
  const std::string csv2 = to_csv(multi_run(cfg, 2));
  report(12, "identical config and seeds give byte-identical csv", csv1 == csv2,
         csv1 == csv2 ? std::to_string(csv1.size()) + " bytes compared equal"
                      : "outputs differ");
}

}  // namespace

int main() {
  std::printf("acceptance suite: %d seeded runs per configuration\n", kSeeds);
  try {
    criterion_formulas();
    criterion_breadcrumbs();

    Dominance dominance;
    scenario_a_criteria(dominance);
    scenario_b_criteria(dominance);
    report(4, "ideal epidemic per-request delivery-time lower bound",
           dominance.violations == 0 && dominance.compared > 0,
           std::to_string(dominance.compared) + " delivered requests compared, " +
               std::to_string(dominance.violations) + " violations");

    criterion_determinism();
  } catch (const std::exception& e) {
    std::printf("acceptance suite aborted: %s\n", e.what());
    return 2;
  }

  std::sort(g_results.begin(), g_results.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  bool all_pass = true;
  for (const CriterionResult& r : g_results) {
    std::printf("CRITERION %2d %s — %s (%s)\n", r.id, r.pass ? "PASS" : "FAIL", r.label.c_str(),
                r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  std::printf(all_pass ? "all criteria passed\n" : "some criteria FAILED\n");
  return all_pass ? 0 : 1;
}
