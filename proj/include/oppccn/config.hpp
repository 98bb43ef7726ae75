#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oppccn/engine.hpp"
#include "oppccn/mobility.hpp"
#include "oppccn/workload.hpp"

namespace oppccn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full description of an experiment: mobility, traffic, protocol switches
/// and run orchestration. Parsed from a flat key=value text format.
struct ScenarioConfig {
  MobilityConfig mobility;
  TrafficConfig traffic;
  std::string protocol = "mobccn";
  bool caching = true;
  bool retransmission_set = false;  // explicit override of the protocol default
  bool retransmission = true;
  std::int64_t retransmission_threshold = 3;
  double forward_prob = 0.5;
  UtilityParams utility;
  SizeModel sizes;
  std::int64_t n_runs = 1;
  std::uint64_t base_seed = 1;

  void validate() const;  // throws ConfigError naming the offending key
  ProtocolConfig protocol_config() const;
  std::string serialize() const;
};

/// Parses key=value lines ('#' starts a comment). Unknown keys and invalid
/// values are errors naming the key.
ScenarioConfig parse_config(const std::string& text);

/// Loads a config file; the names "scenario_a" and "scenario_b" resolve to
/// the bundled presets when no such file exists.
ScenarioConfig load_config(const std::string& path_or_preset);

/// Bundled presets reproducing the two reference scenarios.
const std::string& preset_scenario_a();
const std::string& preset_scenario_b();

/// Per-run input assembly: trace, placement and workload are derived from
/// named sub-streams of base_seed + run_index.
RunInputs build_run_inputs(const ScenarioConfig& cfg, std::int64_t run_index);

/// Same, but with a pinned trace and/or workload (replay mode).
RunInputs build_run_inputs(const ScenarioConfig& cfg, std::int64_t run_index,
                           const ContactTrace* pinned_trace,
                           const std::vector<RequestEvent>* pinned_requests);

/// Executes n_runs seeded runs (parallel workers allowed; results are merged
/// by run index). `threads` <= 0 picks the available parallelism, capped by
/// the OPPSIM_THREADS environment variable.
std::vector<MetricsReport> multi_run(const ScenarioConfig& cfg, int threads = 0);

}  // namespace oppccn
