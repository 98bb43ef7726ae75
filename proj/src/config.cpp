#include "oppccn/config.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace oppccn {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError("config: key '" + key + "' expects on/off, got '" + value + "'");
}

double parse_num(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  const double v = parse_num(key, value);
  const auto i = static_cast<std::int64_t>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
  }
  return i;
}

void apply_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  auto& m = cfg.mobility;
  auto& t = cfg.traffic;
  if (key == "area_side") m.area_side = parse_num(key, value);
  else if (key == "n_nodes") m.n_nodes = static_cast<std::int32_t>(parse_int(key, value));
  else if (key == "n_communities") m.n_communities = static_cast<std::int32_t>(parse_int(key, value));
  else if (key == "n_travellers") m.n_travellers = static_cast<std::int32_t>(parse_int(key, value));
  else if (key == "tx_range") m.tx_range = parse_num(key, value);
  else if (key == "speed_min") m.speed_min = parse_num(key, value);
  else if (key == "speed_max") m.speed_max = parse_num(key, value);
  else if (key == "duration") m.duration = parse_num(key, value);
  else if (key == "tick") m.tick = parse_num(key, value);
  else if (key == "burn_in") m.burn_in = parse_num(key, value);
  else if (key == "n_producers") t.n_producers = static_cast<std::int32_t>(parse_int(key, value));
  else if (key == "n_consumers") t.n_consumers = static_cast<std::int32_t>(parse_int(key, value));
  else if (key == "n_content_types") t.n_content_types = static_cast<std::int32_t>(parse_int(key, value));
  else if (key == "chunks_per_type") t.chunks_per_type = static_cast<std::int32_t>(parse_int(key, value));
  else if (key == "requests_per_consumer") t.requests_per_consumer = static_cast<std::int32_t>(parse_int(key, value));
  else if (key == "request_distribution") {
    if (value == "geometric") t.inter_request = RequestDistribution::Geometric;
    else if (value == "exponential") t.inter_request = RequestDistribution::Exponential;
    else throw ConfigError("config: key 'request_distribution' expects geometric|exponential");
  }
  else if (key == "request_mean_s") t.request_mean_s = parse_num(key, value);
  else if (key == "home_fraction") t.home_fraction = parse_num(key, value);
  else if (key == "warmup_end_s") t.warmup_end_s = parse_num(key, value);
  else if (key == "request_end_s") t.request_end_s = parse_num(key, value);
  else if (key == "protocol") cfg.protocol = value;
  else if (key == "caching") cfg.caching = parse_bool(key, value);
  else if (key == "retransmission") {
    cfg.retransmission_set = true;
    cfg.retransmission = parse_bool(key, value);
  }
  else if (key == "retransmission_threshold") cfg.retransmission_threshold = parse_int(key, value);
  else if (key == "forward_prob") cfg.forward_prob = parse_num(key, value);
  else if (key == "u_cap") cfg.utility.u_cap = parse_num(key, value);
  else if (key == "ict_init") cfg.utility.ict_init = parse_num(key, value);
  else if (key == "ict_estimator") {
    if (value == "mean") cfg.utility.estimator = IctEstimatorKind::Mean;
    else if (value == "ewma") cfg.utility.estimator = IctEstimatorKind::Ewma;
    else throw ConfigError("config: key 'ict_estimator' expects mean|ewma");
  }
  else if (key == "ewma_weight") cfg.utility.ewma_weight = parse_num(key, value);
  else if (key == "hello_base_bytes") cfg.sizes.hello_base_bytes = parse_int(key, value);
  else if (key == "hello_record_bytes") cfg.sizes.hello_record_bytes = parse_int(key, value);
  else if (key == "interest_bytes") cfg.sizes.interest_bytes = parse_int(key, value);
  else if (key == "data_header_bytes") cfg.sizes.data_header_bytes = parse_int(key, value);
  else if (key == "payload_bytes") cfg.sizes.payload_bytes = parse_int(key, value);
  else if (key == "n_runs") cfg.n_runs = parse_int(key, value);
  else if (key == "base_seed") cfg.base_seed = static_cast<std::uint64_t>(parse_int(key, value));
  else throw ConfigError("config: unknown key '" + key + "'");
}

}  // namespace

void ScenarioConfig::validate() const {
  try {
    mobility.validate();
    traffic.validate(mobility);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  protocol_config();  // rejects unknown protocol names
  if (retransmission_threshold < 2) {
    throw ConfigError("config: key 'retransmission_threshold' must be >= 2");
  }
  if (forward_prob <= 0.0 || forward_prob > 1.0) {
    throw ConfigError("config: key 'forward_prob' must be in (0,1]");
  }
  if (n_runs < 1) throw ConfigError("config: key 'n_runs' must be >= 1");
  if (utility.u_cap <= 0) throw ConfigError("config: key 'u_cap' must be positive");
  if (utility.ict_init <= 0) throw ConfigError("config: key 'ict_init' must be positive");
  if (utility.ewma_weight <= 0 || utility.ewma_weight > 1) {
    throw ConfigError("config: key 'ewma_weight' must be in (0,1]");
  }
}

ProtocolConfig ScenarioConfig::protocol_config() const {
  ProtocolConfig p;
  try {
    p = protocol_from_name(protocol);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  p.caching = caching;
  if (retransmission_set) p.retransmission.enabled = retransmission;
  p.retransmission.threshold = retransmission_threshold;
  p.forward_prob = forward_prob;
  p.utility = utility;
  p.sizes = sizes;
  return p;
}

std::string ScenarioConfig::serialize() const {
  std::ostringstream out;
  out << "area_side=" << fmt_num(mobility.area_side) << "\n";
  out << "n_nodes=" << mobility.n_nodes << "\n";
  out << "n_communities=" << mobility.n_communities << "\n";
  out << "n_travellers=" << mobility.n_travellers << "\n";
  out << "tx_range=" << fmt_num(mobility.tx_range) << "\n";
  out << "speed_min=" << fmt_num(mobility.speed_min) << "\n";
  out << "speed_max=" << fmt_num(mobility.speed_max) << "\n";
  out << "duration=" << fmt_num(mobility.duration) << "\n";
  out << "tick=" << fmt_num(mobility.tick) << "\n";
  out << "burn_in=" << fmt_num(mobility.burn_in) << "\n";
  out << "n_producers=" << traffic.n_producers << "\n";
  out << "n_consumers=" << traffic.n_consumers << "\n";
  out << "n_content_types=" << traffic.n_content_types << "\n";
  out << "chunks_per_type=" << traffic.chunks_per_type << "\n";
  out << "requests_per_consumer=" << traffic.requests_per_consumer << "\n";
  out << "request_distribution="
      << (traffic.inter_request == RequestDistribution::Geometric ? "geometric" : "exponential")
      << "\n";
  out << "request_mean_s=" << fmt_num(traffic.request_mean_s) << "\n";
  out << "home_fraction=" << fmt_num(traffic.home_fraction) << "\n";
  out << "warmup_end_s=" << fmt_num(traffic.warmup_end_s) << "\n";
  out << "request_end_s=" << fmt_num(traffic.request_end_s) << "\n";
  out << "protocol=" << protocol << "\n";
  out << "caching=" << (caching ? "on" : "off") << "\n";
  if (retransmission_set) {
    out << "retransmission=" << (retransmission ? "on" : "off") << "\n";
  }
  out << "retransmission_threshold=" << retransmission_threshold << "\n";
  out << "forward_prob=" << fmt_num(forward_prob) << "\n";
  out << "u_cap=" << fmt_num(utility.u_cap) << "\n";
  out << "ict_init=" << fmt_num(utility.ict_init) << "\n";
  out << "ict_estimator="
      << (utility.estimator == IctEstimatorKind::Mean ? "mean" : "ewma") << "\n";
  out << "ewma_weight=" << fmt_num(utility.ewma_weight) << "\n";
  out << "hello_base_bytes=" << sizes.hello_base_bytes << "\n";
  out << "hello_record_bytes=" << sizes.hello_record_bytes << "\n";
  out << "interest_bytes=" << sizes.interest_bytes << "\n";
  out << "data_header_bytes=" << sizes.data_header_bytes << "\n";
  out << "payload_bytes=" << sizes.payload_bytes << "\n";
  out << "n_runs=" << n_runs << "\n";
  out << "base_seed=" << base_seed << "\n";
  return out.str();
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    // trim
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    line = line.substr(start);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value: '" +
                        line + "'");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && is_space(key.back())) key.pop_back();
    std::size_t vstart = 0;
    while (vstart < value.size() && is_space(value[vstart])) ++vstart;
    value = value.substr(vstart);
    apply_key(cfg, key, value);
  }
  return cfg;
}

const std::string& preset_scenario_a() {
  static const std::string text =
      "# Scenario A: one community, sparse random-waypoint contacts\n"
      "area_side=1000\n"
      "n_nodes=10\n"
      "n_communities=1\n"
      "n_travellers=0\n"
      "tx_range=20\n"
      "speed_min=1\n"
      "speed_max=1.86\n"
      "duration=86400\n"
      "tick=1\n"
      "n_producers=4\n"
      "n_consumers=1\n"
      "n_content_types=10\n"
      "chunks_per_type=25\n"
      "requests_per_consumer=50\n"
      "request_distribution=geometric\n"
      "request_mean_s=10000\n"
      "warmup_end_s=43200\n"
      "request_end_s=79200\n"
      "protocol=mobccn\n"
      "caching=on\n"
      "n_runs=10\n"
      "base_seed=1\n";
  return text;
}

const std::string& preset_scenario_b() {
  static const std::string text =
      "# Scenario B: three communities bridged by one traveller each\n"
      "area_side=1000\n"
      "n_nodes=30\n"
      "n_communities=3\n"
      "n_travellers=3\n"
      "tx_range=5\n"
      "speed_min=1\n"
      "speed_max=1.86\n"
      "duration=86400\n"
      "tick=1\n"
      "n_producers=3\n"
      "n_consumers=3\n"
      "n_content_types=4\n"  // per producer: 12 types, 60 contents in total
      "chunks_per_type=5\n"
      "requests_per_consumer=40\n"
      "request_distribution=exponential\n"
      "request_mean_s=1000\n"
      "home_fraction=0.5\n"
      "warmup_end_s=43200\n"
      "request_end_s=79200\n"
      "protocol=mobccn\n"
      "caching=on\n"
      "n_runs=10\n"
      "base_seed=1\n";
  return text;
}

ScenarioConfig load_config(const std::string& path_or_preset) {
  std::ifstream in(path_or_preset);
  std::string text;
  if (in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else if (path_or_preset == "scenario_a") {
    text = preset_scenario_a();
  } else if (path_or_preset == "scenario_b") {
    text = preset_scenario_b();
  } else {
    throw ConfigError("config: cannot open '" + path_or_preset + "'");
  }
  ScenarioConfig cfg = parse_config(text);
  cfg.validate();
  return cfg;
}

RunInputs build_run_inputs(const ScenarioConfig& cfg, std::int64_t run_index) {
  return build_run_inputs(cfg, run_index, nullptr, nullptr);
}

RunInputs build_run_inputs(const ScenarioConfig& cfg, std::int64_t run_index,
                           const ContactTrace* pinned_trace,
                           const std::vector<RequestEvent>* pinned_requests) {
  RunInputs in;
  in.n_nodes = cfg.mobility.n_nodes;
  in.n_communities = cfg.mobility.n_communities;
  in.duration = cfg.mobility.duration;

  if (pinned_trace != nullptr) {
    in.trace = *pinned_trace;
  } else {
    MobilityConfig m = cfg.mobility;
    m.seed = substream_seed(cfg.base_seed, "mobility", static_cast<std::uint64_t>(run_index));
    in.trace = generate_trace(m);
  }

  RngStream workload_rng(
      substream_seed(cfg.base_seed, "workload", static_cast<std::uint64_t>(run_index)));
  in.placement = place_content(cfg.traffic, cfg.mobility, workload_rng);
  in.roles = assign_roles(cfg.traffic, cfg.mobility);
  if (pinned_requests != nullptr) {
    in.requests = *pinned_requests;
  } else {
    in.requests = generate_requests(cfg.traffic, cfg.mobility, in.placement, workload_rng);
  }
  in.coin_seed = substream_seed(cfg.base_seed, "coins", static_cast<std::uint64_t>(run_index));
  return in;
}

namespace {

int effective_threads(int requested, std::int64_t n_runs) {
  int threads = requested;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("OPPSIM_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) threads = std::min(threads, cap);
    }
  }
  threads = std::max(1, threads);
  return static_cast<int>(std::min<std::int64_t>(threads, n_runs));
}

}  // namespace

std::vector<MetricsReport> multi_run(const ScenarioConfig& cfg, int threads) {
  cfg.validate();
  const ProtocolConfig pcfg = cfg.protocol_config();
  std::vector<MetricsReport> reports(cfg.n_runs);
  const int workers = effective_threads(threads, cfg.n_runs);

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<std::int64_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= cfg.n_runs) return;
      try {
        const RunInputs inputs = build_run_inputs(cfg, i);
        MetricsReport r = run_single(inputs, pcfg);
        r.run_index = i;
        reports[i] = std::move(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return reports;
}

}  // namespace oppccn
