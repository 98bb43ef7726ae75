#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oppccn/config.hpp"
#include "oppccn/engine.hpp"
#include "oppccn/metrics.hpp"
#include "oppccn/mobility.hpp"
#include "oppccn/protocols.hpp"
#include "oppccn/workload.hpp"

namespace {

using nlohmann::json;
using namespace oppccn;

struct CommonOpts {
  std::string config_path;
  std::string protocol;
  std::string cache;
  std::string retrans;
  std::vector<std::string> overrides;
};

void apply_common(ScenarioConfig& cfg, const CommonOpts& opts) {
  if (!opts.protocol.empty()) cfg.protocol = opts.protocol;
  if (!opts.cache.empty()) {
    if (opts.cache != "on" && opts.cache != "off") {
      throw ConfigError("config: --cache expects on|off");
    }
    cfg.caching = opts.cache == "on";
  }
  if (!opts.retrans.empty()) {
    if (opts.retrans != "on" && opts.retrans != "off") {
      throw ConfigError("config: --retrans expects on|off");
    }
    cfg.retransmission_set = true;
    cfg.retransmission = opts.retrans == "on";
  }
  for (const std::string& kv : opts.overrides) {
    const std::string with_newline = kv + "\n";
    ScenarioConfig patch = cfg;
    // Reuse the file parser for single key=value overrides.
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    std::string merged = cfg.serialize() + with_newline;
    patch = parse_config(merged);
    cfg = patch;
  }
  cfg.validate();
}

json run_row_json(const MetricsReport& r) {
  json row;
  row["run"] = r.run_index;
  row["delivery_rate"] = r.delivery_rate();
  if (auto v = r.delivery_rate_home()) row["delivery_home"] = *v;
  if (auto v = r.delivery_rate_foreign()) row["delivery_foreign"] = *v;
  if (auto v = r.delay_mean_s()) row["delay_mean_s"] = *v;
  if (auto v = r.delay_median_s()) row["delay_median_s"] = *v;
  row["bytes_interest"] = r.bytes_interest;
  row["bytes_data"] = r.bytes_data;
  row["bytes_control"] = r.bytes_control;
  if (auto v = r.hops_mean()) row["hops_mean"] = *v;
  row["duplicates"] = r.duplicates;
  row["cache_util_pct"] = r.cache_utilization_pct();
  row["dropped_interests"] = r.dropped_interests;
  row["requests"] = r.requests_total;
  row["delivered"] = r.delivered;
  return row;
}

void write_outputs(const std::string& out_dir, const ScenarioConfig& cfg,
                   const std::vector<MetricsReport>& reports) {
  std::filesystem::create_directories(out_dir);
  const std::string csv_path = out_dir + "/results.csv";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path);
    csv << to_csv(reports);
  }
  json summary;
  summary["protocol"] = cfg.protocol;
  summary["caching"] = cfg.caching;
  summary["retransmission"] = cfg.protocol_config().retransmission.enabled;
  summary["n_runs"] = reports.size();
  summary["base_seed"] = cfg.base_seed;
  json runs = json::array();
  for (const MetricsReport& r : reports) runs.push_back(run_row_json(r));
  summary["runs"] = runs;
  const AggregateReport agg = aggregate(reports);
  json jagg;
  for (const auto& [name, v] : agg.values) {
    if (v.mean) jagg[name]["mean"] = *v.mean;
    if (v.ci95) jagg[name]["ci95"] = *v.ci95;
  }
  summary["aggregate"] = jagg;
  const std::string json_path = out_dir + "/summary.json";
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw std::runtime_error("cannot write " + json_path);
  js << summary.dump(2) << "\n";
  std::cout << "wrote " << csv_path << " and " << json_path << "\n";
}

void write_txlog(const std::string& path, const Sim& sim) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[160];
  for (const Transmission& t : sim.txlog()) {
    const char* kind = t.kind == PacketKind::Hello      ? "HELLO"
                       : t.kind == PacketKind::Interest ? "INTEREST"
                                                        : "DATA";
    std::snprintf(buf, sizeof(buf), "%.3f\t%d\t%d\t%s\t%d\t%d\t%llu\t%d\n", t.time, t.from,
                  t.to, kind, t.name.content_type, t.name.chunk,
                  static_cast<unsigned long long>(t.instance), t.hops);
    out << buf;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opportunistic content-centric network simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string out_dir = ".";
  std::string out_file;
  std::string trace_file;
  std::string workload_file;
  std::string txlog_file;
  std::int64_t runs_override = -1;
  std::int64_t seed_override = -1;
  std::int64_t run_index = 0;
  int threads = 0;

  auto add_config_opts = [&](CLI::App* cmd, bool with_protocol) {
    cmd->add_option("--config", opts.config_path, "config file or preset name")->required();
    cmd->add_option("--set", opts.overrides, "override a config key (key=value)");
    if (with_protocol) {
      cmd->add_option("--protocol", opts.protocol,
                      "mobccn|mobccn_noretrans|epidemic_ideal|epi1copy|epi1copy_noretrans");
      cmd->add_option("--cache", opts.cache, "on|off");
      cmd->add_option("--retrans", opts.retrans, "on|off");
    }
  };

  CLI::App* cmd_run = app.add_subcommand("run", "generate inputs and simulate");
  add_config_opts(cmd_run, true);
  cmd_run->add_option("--runs", runs_override, "number of seeded runs");
  cmd_run->add_option("--seed", seed_override, "base seed");
  cmd_run->add_option("--out", out_dir, "output directory");
  cmd_run->add_option("--threads", threads, "parallel runs (default: hardware)");

  CLI::App* cmd_trace = app.add_subcommand("gen-trace", "write the contact trace of one run");
  add_config_opts(cmd_trace, false);
  cmd_trace->add_option("--out", out_file, "trace file")->required();
  cmd_trace->add_option("--seed", seed_override, "base seed");
  cmd_trace->add_option("--run", run_index, "run index (default 0)");

  CLI::App* cmd_workload =
      app.add_subcommand("gen-workload", "write the request workload of one run");
  add_config_opts(cmd_workload, false);
  cmd_workload->add_option("--out", out_file, "workload file")->required();
  cmd_workload->add_option("--seed", seed_override, "base seed");
  cmd_workload->add_option("--run", run_index, "run index (default 0)");

  CLI::App* cmd_replay = app.add_subcommand("replay", "simulate on a pinned trace/workload");
  add_config_opts(cmd_replay, true);
  cmd_replay->add_option("--trace", trace_file, "trace file")->required();
  cmd_replay->add_option("--workload", workload_file, "workload file");
  cmd_replay->add_option("--seed", seed_override, "base seed");
  cmd_replay->add_option("--run", run_index, "run index (default 0)");
  cmd_replay->add_option("--out", out_dir, "output directory");
  cmd_replay->add_option("--txlog", txlog_file, "per-transmission debug log");

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig cfg = load_config(opts.config_path);
    if (seed_override >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed_override);
    if (runs_override >= 0) cfg.n_runs = runs_override;
    apply_common(cfg, opts);

    if (cmd_run->parsed()) {
      const std::vector<MetricsReport> reports = multi_run(cfg, threads);
      write_outputs(out_dir, cfg, reports);
      return 0;
    }
    if (cmd_trace->parsed()) {
      MobilityConfig m = cfg.mobility;
      m.seed = substream_seed(cfg.base_seed, "mobility", static_cast<std::uint64_t>(run_index));
      write_trace_file(out_file, generate_trace(m));
      std::cout << "wrote " << out_file << "\n";
      return 0;
    }
    if (cmd_workload->parsed()) {
      const RunInputs in = build_run_inputs(cfg, run_index);
      write_workload_file(out_file, in.requests);
      std::cout << "wrote " << out_file << "\n";
      return 0;
    }
    if (cmd_replay->parsed()) {
      const ContactTrace trace = read_trace_file(trace_file);
      RunInputs inputs;
      if (!workload_file.empty()) {
        // Placement comes from the seed either way; requests are pinned.
        RunInputs seeded = build_run_inputs(cfg, run_index, &trace, nullptr);
        const std::vector<RequestEvent> requests =
            read_workload_file(workload_file, cfg.traffic, cfg.mobility, seeded.placement);
        inputs = build_run_inputs(cfg, run_index, &trace, &requests);
      } else {
        inputs = build_run_inputs(cfg, run_index, &trace, nullptr);
      }
      const ProtocolConfig pcfg = cfg.protocol_config();
      auto protocol = make_protocol(pcfg);
      Sim sim(inputs, pcfg, *protocol);
      if (!txlog_file.empty()) sim.enable_txlog();
      MetricsReport report = sim.run();
      report.run_index = run_index;
      if (!txlog_file.empty()) write_txlog(txlog_file, sim);
      write_outputs(out_dir, cfg, {report});
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
