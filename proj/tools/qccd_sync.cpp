// qccd_sync: compile, sweep and oracle-check front end.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qccd/qccd.hpp"

namespace {

struct Options {
  qccd::RunConfig cfg;
  std::string mapping = "gather";
  std::string gates = "FM";
  std::string baseline = "none";
  std::string out;
  std::string events_csv;
  std::string snapshot;
};

void add_run_options(CLI::App* app, Options& o) {
  auto& c = o.cfg;
  auto* circuit = app->add_option("--circuit", c.circuit_path, "OpenQASM 2.0 file");
  auto* gen = app->add_option("--gen", c.generator, "generator spec name:size[:key=value,...]");
  circuit->excludes(gen);
  app->add_option("--topology", c.topology, "family (L4, G2x3:17, S4) or JSON config file")
      ->capture_default_str();
  app->add_option("--capacity", c.capacity, "trap capacity override (0 keeps the family default)");
  app->add_option("--mapping", o.mapping, "even | gather | sta")->capture_default_str();
  app->add_option("--gates", o.gates, "FM | PM | AM1 | AM2")->capture_default_str();
  app->add_option("--delta", c.scheduler.delta, "decay increment")->capture_default_str();
  app->add_option("--inner-weight", c.weights.inner_weight)->capture_default_str();
  app->add_option("--shuttle-weight", c.weights.shuttle_base)->capture_default_str();
  app->add_option("--threshold", c.weights.threshold)->capture_default_str();
  app->add_option("--m", c.scheduler.m, "intermediate slots allowed in distance paths")->capture_default_str();
  app->add_option("--alpha", c.mapping.alpha)->capture_default_str();
  app->add_option("--beta", c.mapping.beta)->capture_default_str();
  app->add_option("--lookahead", c.mapping.lookahead_k)->capture_default_str();
  app->add_option("--a0", c.cost.a0)->capture_default_str();
  app->add_option("--swap-multiplier", c.cost.swap_gate_multiplier, "two-qubit gates per SWAP")
      ->capture_default_str();
  app->add_option("--baseline", o.baseline, "none | perfect-shuttle | perfect-swap | ideal")
      ->capture_default_str();
  app->add_option("--seed", c.seed)->capture_default_str();
}

void finish_config(Options& o) {
  o.cfg.mapping.strategy = qccd::parse_mapping_strategy(o.mapping);
  o.cfg.cost.gate_family = qccd::parse_gate_family(o.gates);
  o.cfg.baseline = qccd::parse_ideal_mode(o.baseline);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw qccd::InvalidArgument("cannot write '" + path + "'");
  f << text;
}

// Initial and final machine state; the final one is obtained by replaying
// the schedule's interchanges with the run's heating parameters.
nlohmann::json snapshot_json(const qccd::RunResult& r, const qccd::RunConfig& cfg) {
  qccd::DeviceGraph graph(r.topology, cfg.weights);
  auto state = qccd::MachineState::from_mapping(graph, r.initial_slots);
  nlohmann::json j;
  j["initial"] = state.snapshot();
  const qccd::HeatParams heat{cfg.cost.k1, cfg.cost.k2, cfg.cost.heat_destination_fraction};
  for (const auto& e : r.schedule.events) {
    if (e.kind != qccd::EventKind::GateExec) state.apply_generic_swap(e.u, e.v, heat);
  }
  j["final"] = state.snapshot();
  return j;
}

int cmd_compile(Options& o) {
  finish_config(o);
  const qccd::RunResult r = qccd::run_compile(o.cfg);
  const std::string json = qccd::metrics_json(r, o.cfg.cost).dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << json;
  } else {
    write_file(o.out, json);
  }
  if (!o.events_csv.empty()) write_file(o.events_csv, qccd::events_csv(r.metrics));
  if (!o.snapshot.empty()) write_file(o.snapshot, snapshot_json(r, o.cfg).dump(2) + "\n");
  if (r.metrics.am1_clamped > 0) {
    std::cerr << "warning: " << r.metrics.am1_clamped << " AM1 gates at distance 0 were clamped\n";
  }
  std::cerr << qccd::summary_line(r) << "\n";
  return 0;
}

int cmd_sweep(Options& o, const std::string& axis_name, const std::vector<std::string>& values) {
  finish_config(o);
  const auto axis = qccd::parse_sweep_axis(axis_name);
  auto [csv, failed] = qccd::run_sweep(o.cfg, axis, values);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_file(o.out, csv);
  }
  std::cerr << values.size() - static_cast<std::size_t>(failed) << "/" << values.size() << " runs succeeded\n";
  return !values.empty() && failed == static_cast<int>(values.size()) ? 1 : 0;
}

int cmd_oracle_check(int n, std::uint64_t seed, const qccd::OracleLimits& limits, const std::string& out) {
  const auto records = qccd::run_oracle_check(n, seed, limits);
  for (const auto& r : records) {
    if (r.status == "skipped") std::cerr << "warning: seed " << r.seed << " skipped: " << r.note << "\n";
  }
  const std::string csv = qccd::gap_csv(records);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
  }
  const auto s = qccd::summarize(records);
  std::cerr << "instances=" << s.instances << " compared=" << s.compared << " equal=" << s.equal
            << " within_1.5x=" << s.within_1_5 << " mean_ratio=" << qccd::fmt(s.mean_ratio, 6)
            << " max_ratio=" << qccd::fmt(s.max_ratio, 6) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuttle and SWAP co-scheduling for QCCD trapped-ion devices"};
  app.require_subcommand(1);

  Options compile_opts;
  auto* compile = app.add_subcommand("compile", "map, schedule and evaluate one circuit");
  add_run_options(compile, compile_opts);
  compile->add_option("--out", compile_opts.out, "metrics JSON (stdout if omitted)");
  compile->add_option("--events-csv", compile_opts.events_csv, "per-event timeline CSV");
  compile->add_option("--snapshot", compile_opts.snapshot, "initial/final machine state JSON");

  Options sweep_opts;
  std::string axis;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "one compile per axis value, aggregated as CSV");
  add_run_options(sweep, sweep_opts);
  sweep->add_option("--axis", axis, "topology | capacity | gates | mapping | delta | weight-ratio")->required();
  sweep->add_option("--values", values, "comma separated axis values")->required()->delimiter(',');
  sweep->add_option("--out", sweep_opts.out, "CSV (stdout if omitted)");

  int n = 100;
  std::uint64_t seed = 1;
  std::string oracle_out;
  qccd::OracleLimits limits;
  auto* oracle = app.add_subcommand("oracle-check", "heuristic vs exhaustive optimum on tiny instances");
  oracle->add_option("-n,--instances", n)->capture_default_str();
  oracle->add_option("--seed", seed, "instance i uses seed + i")->capture_default_str();
  oracle->add_option("--max-depth", limits.max_depth)->capture_default_str();
  oracle->add_option("--max-nodes", limits.max_nodes)->capture_default_str();
  oracle->add_option("--max-gates", limits.max_gates)->capture_default_str();
  oracle->add_option("--out", oracle_out, "gap CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compile->parsed()) return cmd_compile(compile_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, axis, values);
    if (oracle->parsed()) return cmd_oracle_check(n, seed, limits, oracle_out);
  } catch (const qccd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
