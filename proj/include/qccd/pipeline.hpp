#pragma once

// End-to-end runs: load circuit and device, place, schedule, evaluate.
// Shared by the command-line tool and the acceptance harness.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qccd/benchmarks.hpp"
#include "qccd/cost_model.hpp"
#include "qccd/device_graph.hpp"
#include "qccd/mapping.hpp"
#include "qccd/oracle.hpp"
#include "qccd/qasm.hpp"
#include "qccd/scheduler.hpp"
#include "qccd/topology.hpp"

namespace qccd {

struct RunConfig {
  std::string circuit_path;  // OpenQASM file; takes precedence over `generator`
  std::string generator;     // name:size[:key=value,...]
  std::string topology = "G2x2";  // family spec or JSON file
  int capacity = 0;               // 0: family default
  MappingParams mapping;
  SchedulerParams scheduler;
  WeightParams weights;
  CostParams cost;
  IdealMode baseline = IdealMode::None;
  std::uint64_t seed = 0;
};

struct RunResult {
  Circuit circuit;
  Topology topology;
  std::vector<int> initial_slots;
  Schedule schedule;
  Metrics metrics;
  double compile_ms = 0;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Circuit load_circuit(const RunConfig& cfg) {
  if (!cfg.circuit_path.empty()) {
    return parse_qasm(read_file(cfg.circuit_path),
                      std::filesystem::path(cfg.circuit_path).stem().string());
  }
  if (!cfg.generator.empty()) return gen_benchmark(parse_generator_spec(cfg.generator));
  throw InvalidArgument("no circuit given (use a QASM file or a generator spec)");
}

inline Topology load_topology(const std::string& spec, int capacity) {
  const bool file = spec.size() > 5 && spec.substr(spec.size() - 5) == ".json";
  if (!file) return parse_topology_spec(spec, capacity);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(spec));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("topology file '" + spec + "': " + e.what());
  }
  return topology_from_json(j, capacity);
}

inline RunResult run_compile(const RunConfig& cfg) {
  cfg.scheduler.validate();
  cfg.cost.validate();
  RunResult r;
  r.circuit = load_circuit(cfg);
  r.topology = load_topology(cfg.topology, cfg.capacity);
  DeviceGraph graph(r.topology, cfg.weights);
  SchedulerParams sp = cfg.scheduler;
  sp.heat = {cfg.cost.k1, cfg.cost.k2, cfg.cost.heat_destination_fraction};

  r.initial_slots = initial_mapping(r.circuit, graph, cfg.mapping);
  MachineState state = MachineState::from_mapping(graph, r.initial_slots);
  Scheduler scheduler(r.circuit, graph, sp);
  const auto t0 = std::chrono::steady_clock::now();
  r.schedule = scheduler.run(state);
  const auto t1 = std::chrono::steady_clock::now();
  r.compile_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.metrics = evaluate(r.schedule, cfg.cost, cfg.baseline);
  return r;
}

/// Counts two-qubit operations as executed: circuit gates plus SWAP gates
/// expanded by the multiplier.
inline int executed_two_qubit_gates(const RunResult& r, const CostParams& cost) {
  return r.schedule.counts.two_qubit_gates + r.schedule.counts.swap_gates * cost.swap_gate_multiplier;
}

inline nlohmann::json metrics_json(const RunResult& r, const CostParams& cost) {
  nlohmann::json j;
  j["shuttles"] = r.schedule.counts.shuttles;
  j["swap_gates"] = r.schedule.counts.swap_gates;
  j["space_shifts"] = r.schedule.counts.space_shifts;
  j["two_qubit_gates"] = executed_two_qubit_gates(r, cost);
  j["makespan_us"] = r.metrics.makespan_us;
  j["success_rate"] = r.metrics.success_rate;
  j["compile_ms"] = r.compile_ms;
  return j;
}

inline std::string fmt(double v, int precision = 17) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

inline std::string events_csv(const Metrics& m) {
  std::ostringstream out;
  out << "kind,start_us,duration_us,trap,fidelity\n";
  for (const auto& e : m.timeline) {
    out << to_string(e.kind) << ',' << fmt(e.start_us) << ',' << fmt(e.duration_us) << ',' << e.trap << ','
        << fmt(e.fidelity) << '\n';
  }
  return out.str();
}

inline std::string summary_line(const RunResult& r) {
  std::ostringstream s;
  s << r.circuit.name() << " on " << r.topology.name << ": shuttles=" << r.schedule.counts.shuttles
    << " swaps=" << r.schedule.counts.swap_gates << " shifts=" << r.schedule.counts.space_shifts
    << " makespan_us=" << fmt(r.metrics.makespan_us, 8) << " success=" << fmt(r.metrics.success_rate, 8)
    << " compile_ms=" << fmt(r.compile_ms, 4);
  return s.str();
}

/// Worker count: hardware concurrency, capped by QCCD_SYNC_THREADS.
inline unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QCCD_SYNC_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

/// Runs fn(0..jobs-1) on a small pool; results land in index order.
template <class Result>
std::vector<Result> parallel_map(std::size_t jobs, const std::function<Result(std::size_t)>& fn) {
  std::vector<Result> out(jobs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs;) out[i] = fn(i);
  };
  const unsigned n = worker_count(jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

enum class SweepAxis { Topology, Capacity, GateFamily, Mapping, Delta, WeightRatio };

inline SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "topology") return SweepAxis::Topology;
  if (s == "capacity") return SweepAxis::Capacity;
  if (s == "gates" || s == "gate-family") return SweepAxis::GateFamily;
  if (s == "mapping") return SweepAxis::Mapping;
  if (s == "delta") return SweepAxis::Delta;
  if (s == "weight-ratio") return SweepAxis::WeightRatio;
  throw InvalidArgument("unknown sweep axis '" + std::string(s) +
                        "' (topology|capacity|gates|mapping|delta|weight-ratio)");
}

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Topology: return "topology";
    case SweepAxis::Capacity: return "capacity";
    case SweepAxis::GateFamily: return "gates";
    case SweepAxis::Mapping: return "mapping";
    case SweepAxis::Delta: return "delta";
    case SweepAxis::WeightRatio: return "weight-ratio";
  }
  return "?";
}

/// `base` with one axis set to `value`. A weight ratio r keeps inner_weight
/// and sets shuttle_base = r * inner_weight, threshold = shuttle_base / 2.
inline RunConfig apply_axis(RunConfig cfg, SweepAxis axis, const std::string& value) {
  auto number = [&] {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size()) throw InvalidArgument("bad numeric sweep value '" + value + "'");
    return v;
  };
  switch (axis) {
    case SweepAxis::Topology: cfg.topology = value; break;
    case SweepAxis::Capacity: cfg.capacity = static_cast<int>(number()); break;
    case SweepAxis::GateFamily: cfg.cost.gate_family = parse_gate_family(value); break;
    case SweepAxis::Mapping: cfg.mapping.strategy = parse_mapping_strategy(value); break;
    case SweepAxis::Delta: cfg.scheduler.delta = number(); break;
    case SweepAxis::WeightRatio:
      cfg.weights.shuttle_base = cfg.weights.inner_weight * number();
      cfg.weights.threshold = cfg.weights.shuttle_base / 2;
      break;
  }
  return cfg;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline constexpr const char* kSweepHeader =
    "axis,value,status,shuttles,swap_gates,space_shifts,two_qubit_gates,makespan_us,success_rate,"
    "compile_ms,circuit,topology,capacity,mapping,gates,delta,inner_weight,shuttle_weight,threshold,m,"
    "alpha,beta,lookahead,a0,swap_multiplier,baseline,seed,error";

struct SweepRow {
  bool ok = false;
  std::string line;
};

inline SweepRow sweep_row(const RunConfig& base, SweepAxis axis, const std::string& value) {
  std::ostringstream out;
  RunConfig cfg = base;
  std::string error;
  RunResult r;
  bool ok = false;
  try {
    cfg = apply_axis(base, axis, value);
    r = run_compile(cfg);
    ok = true;
  } catch (const std::exception& e) {
    error = e.what();
  }
  out << to_string(axis) << ',' << csv_quote(value) << ',' << (ok ? "ok" : "error") << ',';
  if (ok) {
    out << r.schedule.counts.shuttles << ',' << r.schedule.counts.swap_gates << ','
        << r.schedule.counts.space_shifts << ',' << executed_two_qubit_gates(r, cfg.cost) << ','
        << fmt(r.metrics.makespan_us) << ',' << fmt(r.metrics.success_rate) << ',' << fmt(r.compile_ms, 6)
        << ',';
  } else {
    out << ",,,,,,,";
  }
  out << csv_quote(cfg.circuit_path.empty() ? cfg.generator : cfg.circuit_path) << ','
      << csv_quote(cfg.topology) << ',' << cfg.capacity << ',' << to_string(cfg.mapping.strategy) << ','
      << to_string(cfg.cost.gate_family) << ',' << fmt(cfg.scheduler.delta) << ','
      << fmt(cfg.weights.inner_weight) << ',' << fmt(cfg.weights.shuttle_base) << ','
      << fmt(cfg.weights.threshold) << ',' << cfg.scheduler.m << ',' << fmt(cfg.mapping.alpha) << ','
      << fmt(cfg.mapping.beta) << ',' << cfg.mapping.lookahead_k << ',' << fmt(cfg.cost.a0) << ','
      << cfg.cost.swap_gate_multiplier << ',' << to_string(cfg.baseline) << ',' << cfg.seed << ','
      << csv_quote(error) << '\n';
  return {ok, out.str()};
}

/// One compile per value; rows in value order. Returns the CSV and the
/// number of failed runs.
inline std::pair<std::string, int> run_sweep(const RunConfig& base, SweepAxis axis,
                                             const std::vector<std::string>& values) {
  auto rows = parallel_map<SweepRow>(values.size(),
                                     [&](std::size_t i) { return sweep_row(base, axis, values[i]); });
  std::string csv = std::string(kSweepHeader) + '\n';
  int failed = 0;
  for (const auto& r : rows) {
    csv += r.line;
    failed += r.ok ? 0 : 1;
  }
  return {csv, failed};
}

struct GapRecord {
  std::uint64_t seed = 0;
  int traps = 0;
  int capacity = 0;
  int qubits = 0;
  int gates = 0;
  std::string status;  // ok | heuristic-failed | infeasible | skipped
  std::int64_t optimal = 0;
  std::int64_t heuristic = 0;
  double ratio = 0;
  bool heuristic_valid = false;
  std::string note;
};

/// Heuristic vs exhaustive optimum on one random tiny instance.
inline GapRecord gap_instance(std::uint64_t seed, const OracleLimits& limits,
                              const TinyInstanceSpec& spec = {}, const SchedulerParams& params = {}) {
  GapRecord g;
  g.seed = seed;
  TinyInstance inst = random_tiny_instance(seed, spec);
  g.traps = inst.topology.trap_count();
  g.capacity = inst.topology.max_capacity();
  g.qubits = inst.circuit.n_qubits();
  g.gates = static_cast<int>(inst.circuit.size());
  DeviceGraph graph(inst.topology, {});
  MachineState state = MachineState::from_mapping(graph, inst.slots);
  OracleResult opt;
  try {
    opt = exact_schedule(inst.circuit, state, limits);
  } catch (const LimitError& e) {
    g.status = "skipped";
    g.note = e.what();
    return g;
  }
  if (!opt.feasible) {
    g.status = "infeasible";
    return g;
  }
  g.optimal = opt.cost;
  try {
    Schedule s = schedule(inst.circuit, graph, state, params);
    g.heuristic = quantized_cost(graph, s);
    g.heuristic_valid = true;
  } catch (const ScheduleError& e) {
    g.status = "heuristic-failed";
    g.note = e.what();
    g.ratio = std::numeric_limits<double>::infinity();
    return g;
  }
  g.status = "ok";
  if (g.optimal == 0) {
    g.ratio = g.heuristic == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    g.ratio = static_cast<double>(g.heuristic) / static_cast<double>(g.optimal);
  }
  return g;
}

struct GapSummary {
  int instances = 0;
  int compared = 0;  // status ok or heuristic-failed
  int equal = 0;
  int within_1_5 = 0;
  double mean_ratio = 0;
  double max_ratio = 0;
};

inline GapSummary summarize(const std::vector<GapRecord>& records) {
  GapSummary s;
  s.instances = static_cast<int>(records.size());
  double sum = 0;
  int finite = 0;
  for (const auto& r : records) {
    if (r.status != "ok" && r.status != "heuristic-failed") continue;
    ++s.compared;
    if (r.status == "ok" && r.heuristic == r.optimal) ++s.equal;
    if (r.ratio <= 1.5) ++s.within_1_5;
    if (std::isfinite(r.ratio)) {
      sum += r.ratio;
      ++finite;
    }
    s.max_ratio = std::max(s.max_ratio, r.ratio);
  }
  s.mean_ratio = finite ? sum / finite : 0;
  return s;
}

/// Instance i uses seed `seed + i`.
inline std::vector<GapRecord> run_oracle_check(int n, std::uint64_t seed, const OracleLimits& limits,
                                               const TinyInstanceSpec& spec = {},
                                               const SchedulerParams& params = {}) {
  return parallel_map<GapRecord>(static_cast<std::size_t>(std::max(n, 0)), [&](std::size_t i) {
    return gap_instance(seed + i, limits, spec, params);
  });
}

inline std::string gap_csv(const std::vector<GapRecord>& records, const WeightParams& w = {}) {
  auto units = [&](std::int64_t q) { return fmt(static_cast<double>(q) * w.inner_weight / 1024.0); };
  std::ostringstream out;
  out << "seed,traps,capacity,qubits,gates,status,optimal_cost,heuristic_cost,ratio,note\n";
  for (const auto& r : records) {
    out << r.seed << ',' << r.traps << ',' << r.capacity << ',' << r.qubits << ',' << r.gates << ','
        << r.status << ',' << units(r.optimal) << ',' << units(r.heuristic) << ',' << fmt(r.ratio) << ','
        << csv_quote(r.note) << '\n';
  }
  return out.str();
}

}  // namespace qccd
