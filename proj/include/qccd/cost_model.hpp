#pragma once

// Timing and fidelity evaluation of a recorded schedule.
//
// Events are list-scheduled on trap and junction resources in event-list
// order. Fidelity of a two-qubit operation is
//   F = 1 - gamma * tau - A * (2 * nbar + 1),   A = a0 * N / ln N,
// with tau in seconds and nbar the motional quanta of the executing trap.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qccd/errors.hpp"
#include "qccd/schedule.hpp"

namespace qccd {

enum class GateFamily { FM, PM, AM1, AM2 };

inline std::string_view to_string(GateFamily f) {
  switch (f) {
    case GateFamily::FM: return "FM";
    case GateFamily::PM: return "PM";
    case GateFamily::AM1: return "AM1";
    case GateFamily::AM2: return "AM2";
  }
  return "?";
}

inline GateFamily parse_gate_family(std::string_view s) {
  if (s == "FM" || s == "fm") return GateFamily::FM;
  if (s == "PM" || s == "pm") return GateFamily::PM;
  if (s == "AM1" || s == "am1") return GateFamily::AM1;
  if (s == "AM2" || s == "am2") return GateFamily::AM2;
  throw InvalidArgument("unknown gate family '" + std::string(s) + "' (FM|PM|AM1|AM2)");
}

/// Which inserted operations are treated as free.
enum class IdealMode { None, PerfectShuttle, PerfectSwap, Ideal };

inline std::string_view to_string(IdealMode m) {
  switch (m) {
    case IdealMode::None: return "none";
    case IdealMode::PerfectShuttle: return "perfect-shuttle";
    case IdealMode::PerfectSwap: return "perfect-swap";
    case IdealMode::Ideal: return "ideal";
  }
  return "?";
}

inline IdealMode parse_ideal_mode(std::string_view s) {
  if (s == "none") return IdealMode::None;
  if (s == "perfect-shuttle") return IdealMode::PerfectShuttle;
  if (s == "perfect-swap") return IdealMode::PerfectSwap;
  if (s == "ideal") return IdealMode::Ideal;
  throw InvalidArgument("unknown baseline '" + std::string(s) +
                        "' (none|perfect-shuttle|perfect-swap|ideal)");
}

struct CostParams {
  GateFamily gate_family = GateFamily::FM;
  double gamma = 1.0;  // background heating, quanta per second
  double k1 = 0.1;
  double k2 = 0.01;
  double heat_destination_fraction = 1.0;
  double a0 = 1e-4;
  double single_qubit_fidelity = 0.999999;
  double single_qubit_duration = 10;
  double move_us = 5;
  double split_us = 80;
  double merge_us = 80;
  double junction_base_us = 40;
  double junction_per_path_us = 20;
  double space_shift_us = 5;
  int swap_gate_multiplier = 1;

  void validate() const {
    for (double t : {single_qubit_duration, move_us, split_us, merge_us, junction_base_us,
                     junction_per_path_us, space_shift_us}) {
      if (!(t >= 0)) throw InvalidArgument("operation times must be >= 0");
    }
    if (!(single_qubit_fidelity > 0 && single_qubit_fidelity <= 1)) {
      throw InvalidArgument("single_qubit_fidelity must be in (0, 1]");
    }
    if (gamma < 0 || k1 < 0 || k2 < 0 || a0 < 0) {
      throw InvalidArgument("gamma, k1, k2 and a0 must be >= 0");
    }
    if (heat_destination_fraction < 0 || heat_destination_fraction > 1) {
      throw InvalidArgument("heat destination fraction must be in [0, 1]");
    }
    if (swap_gate_multiplier < 1) throw InvalidArgument("swap gate multiplier must be >= 1");
  }
};

/// Two-qubit gate time in microseconds. `chain` is the ion count of the
/// executing trap, `d` the ions strictly between the pair. AM1 is undefined
/// below d = 1; d = 0 is clamped to the d = 1 value and flagged.
inline double gate_duration(GateFamily family, int chain, int d, bool* clamped = nullptr) {
  if (d < 0) throw InvalidArgument("ion distance must be >= 0");
  if (clamped) *clamped = false;
  switch (family) {
    case GateFamily::FM: return std::max(13.33 * chain - 54.0, 100.0);
    case GateFamily::PM: return 5.0 * d + 160.0;
    case GateFamily::AM1:
      if (d == 0) {
        if (clamped) *clamped = true;
        return 78.0;
      }
      return 100.0 * d - 22.0;
    case GateFamily::AM2: return 38.0 * d + 10.0;
  }
  throw InvalidArgument("unknown gate family");
}

inline double junction_crossing_us(int degree, const CostParams& p = {}) {
  return p.junction_base_us + p.junction_per_path_us * degree;
}

inline double shuttle_duration(int segments, std::span<const int> junction_degrees,
                               const CostParams& p = {}) {
  if (segments < 1) throw InvalidArgument("shuttle needs at least one segment");
  double t = p.split_us + segments * p.move_us + p.merge_us;
  for (int deg : junction_degrees) t += junction_crossing_us(deg, p);
  return t;
}

inline double gate_fidelity(double tau_us, int chain, double nbar, const CostParams& p) {
  if (chain < 2) throw InvalidArgument("gate fidelity needs a chain of at least 2 ions");
  if (tau_us < 0) throw InvalidArgument("gate time must be >= 0");
  const double n = static_cast<double>(chain);
  const double a = p.a0 * n / std::log(n);
  const double f = 1.0 - p.gamma * tau_us * 1e-6 - a * (2.0 * nbar + 1.0);
  return std::clamp(f, 0.0, 1.0);
}

struct TimedEvent {
  EventKind kind = EventKind::GateExec;
  double start_us = 0;
  double duration_us = 0;
  int trap = -1;
  double fidelity = 1.0;  // 1 for events with no fidelity factor
};

struct Metrics {
  double makespan_us = 0;
  double success_rate = 1.0;
  int am1_clamped = 0;
  std::vector<double> final_heat;
  std::vector<TimedEvent> timeline;
};

/// List-schedules `schedule` and multiplies the fidelity factors.
///
/// Each event waits for every resource it uses: gates, swap gates and space
/// shifts use their trap; shuttles use source trap, destination trap and the
/// junctions crossed. Because a trap's events are serialized in list order,
/// the heat seen by a gate is exactly the heat of earlier-listed shuttles
/// touching that trap, independent of the timing relaxation in `mode`.
inline Metrics evaluate(const Schedule& schedule, const CostParams& params,
                        IdealMode mode = IdealMode::None) {
  params.validate();
  const bool free_shuttle = mode == IdealMode::PerfectShuttle || mode == IdealMode::Ideal;
  const bool free_swap = mode == IdealMode::PerfectSwap || mode == IdealMode::Ideal;

  Metrics m;
  std::vector<double> trap_ready(static_cast<std::size_t>(schedule.trap_count), 0.0);
  std::vector<double> junction_ready(static_cast<std::size_t>(schedule.junction_count), 0.0);
  m.final_heat.assign(static_cast<std::size_t>(schedule.trap_count), 0.0);
  auto& nbar = m.final_heat;
  m.timeline.reserve(schedule.events.size());

  int one_qubit = 0;
  for (const Event& e : schedule.events) {
    TimedEvent te;
    te.kind = e.kind;
    te.trap = e.trap;
    auto& ready = trap_ready.at(static_cast<std::size_t>(e.trap));
    switch (e.kind) {
      case EventKind::GateExec: {
        if (!e.two_qubit) {
          te.duration_us = params.single_qubit_duration;
          te.fidelity = params.single_qubit_fidelity;
          ++one_qubit;
        } else {
          bool clamped = false;
          te.duration_us = gate_duration(params.gate_family, e.chain_length, e.ion_distance, &clamped);
          m.am1_clamped += clamped ? 1 : 0;
          te.fidelity = gate_fidelity(te.duration_us, e.chain_length, nbar[e.trap], params);
          m.success_rate *= te.fidelity;
        }
        te.start_us = ready;
        break;
      }
      case EventKind::SwapGate: {
        if (!free_swap) {
          bool clamped = false;
          const double tau = gate_duration(params.gate_family, e.chain_length, e.ion_distance, &clamped);
          m.am1_clamped += clamped ? params.swap_gate_multiplier : 0;
          const double f = gate_fidelity(tau, e.chain_length, nbar[e.trap], params);
          te.duration_us = tau * params.swap_gate_multiplier;
          te.fidelity = 1.0;
          for (int i = 0; i < params.swap_gate_multiplier; ++i) {
            te.fidelity *= f;
            m.success_rate *= f;
          }
        }
        te.start_us = ready;
        break;
      }
      case EventKind::SpaceShift:
        te.duration_us = free_swap ? 0.0 : params.space_shift_us;
        te.start_us = ready;
        break;
      case EventKind::Shuttle: {
        te.duration_us = free_shuttle ? 0.0 : shuttle_duration(e.segments, e.junction_degrees, params);
        auto& src = trap_ready.at(static_cast<std::size_t>(e.source_trap));
        te.start_us = std::max(ready, src);
        for (int j : e.junctions) te.start_us = std::max(te.start_us, junction_ready.at(static_cast<std::size_t>(j)));
        const double end = te.start_us + te.duration_us;
        src = end;
        for (int j : e.junctions) junction_ready[static_cast<std::size_t>(j)] = end;
        if (!free_shuttle) {
          const double split = params.k1 * params.heat_destination_fraction;
          nbar[e.trap] += split + params.k2 * e.segments;
          nbar[e.source_trap] += params.k1 - split;
        }
        break;
      }
    }
    if (te.start_us < 0 || te.duration_us < 0) throw ScheduleError("negative event time");
    ready = te.start_us + te.duration_us;
    m.makespan_us = std::max(m.makespan_us, ready);
    m.timeline.push_back(te);
  }
  m.success_rate *= std::pow(params.single_qubit_fidelity, one_qubit);
  m.success_rate = std::clamp(m.success_rate, 0.0, 1.0);
  return m;
}

/// Re-evaluation under a relaxed cost model; an upper bound on the
/// achievable success rate of the same event sequence.
inline Metrics ideal_bounds(const Schedule& schedule, IdealMode mode, const CostParams& params) {
  return evaluate(schedule, params, mode);
}

}  // namespace qccd
