#include <gtest/gtest.h>

#include <cmath>

#include "qccd/benchmarks.hpp"
#include "qccd/cost_model.hpp"
#include "qccd/mapping.hpp"
#include "qccd/scheduler.hpp"

using namespace qccd;

namespace {

Event gate_event(int trap, int chain, int d, bool two = true) {
  Event e;
  e.kind = EventKind::GateExec;
  e.gate = 0;
  e.two_qubit = two;
  e.trap = trap;
  e.chain_length = chain;
  e.ion_distance = d;
  return e;
}

Event shuttle_event(int from, int to, int segments, std::vector<int> junctions, std::vector<int> degrees) {
  Event e;
  e.kind = EventKind::Shuttle;
  e.source_trap = from;
  e.trap = to;
  e.segments = segments;
  e.junctions = std::move(junctions);
  e.junction_degrees = std::move(degrees);
  return e;
}

Schedule make_schedule(int traps, int junctions, std::vector<Event> events) {
  Schedule s;
  s.trap_count = traps;
  s.junction_count = junctions;
  s.events = std::move(events);
  return s;
}

}  // namespace

TEST(GateDuration, PointValues) {
  EXPECT_EQ(gate_duration(GateFamily::FM, 4, 0), 100.0);
  EXPECT_NEAR(gate_duration(GateFamily::FM, 16, 0), 159.28, 1e-9);
  EXPECT_EQ(gate_duration(GateFamily::PM, 10, 3), 175.0);
  EXPECT_EQ(gate_duration(GateFamily::AM2, 10, 0), 10.0);
  EXPECT_EQ(gate_duration(GateFamily::AM1, 10, 2), 178.0);
  EXPECT_THROW(gate_duration(GateFamily::PM, 4, -1), InvalidArgument);
}

TEST(GateDuration, Am1ClampsAtZeroDistance) {
  bool clamped = false;
  EXPECT_EQ(gate_duration(GateFamily::AM1, 5, 0, &clamped), 78.0);
  EXPECT_TRUE(clamped);
  gate_duration(GateFamily::AM1, 5, 1, &clamped);
  EXPECT_FALSE(clamped);
}

TEST(GateDuration, Monotone) {
  for (int x = 2; x < 60; ++x) {
    EXPECT_LE(gate_duration(GateFamily::FM, x, 0), gate_duration(GateFamily::FM, x + 1, 0));
    for (auto f : {GateFamily::PM, GateFamily::AM1, GateFamily::AM2}) {
      EXPECT_LE(gate_duration(f, 64, x - 2), gate_duration(f, 64, x - 1));
    }
  }
}

TEST(ShuttleDuration, PointValues) {
  EXPECT_EQ(shuttle_duration(1, std::vector<int>{}), 165.0);
  EXPECT_EQ(shuttle_duration(2, std::vector<int>{3}), 270.0);
  EXPECT_EQ(shuttle_duration(3, std::vector<int>{4, 4}), 415.0);
  EXPECT_EQ(junction_crossing_us(3), 100.0);
  EXPECT_THROW(shuttle_duration(0, std::vector<int>{}), InvalidArgument);
}

// Reference values evaluated with 30-digit arithmetic outside this code base.
TEST(GateFidelity, FrozenReferenceValues) {
  CostParams p;
  EXPECT_NEAR(gate_fidelity(159.28, 16, 0.12, p), 0.999125143259719074149949477358, 1e-15);
  EXPECT_NEAR(gate_fidelity(0, 2, 0, p), 0.999711460991822207318528015064, 1e-15);
  CostParams no_heat = p;
  no_heat.a0 = 0;
  EXPECT_NEAR(gate_fidelity(100, 7, 3.0, no_heat), 0.9999, 1e-15);
  EXPECT_NEAR(gate_fidelity(100, 30, 0.0, no_heat), 0.9999, 1e-15);
}

TEST(GateFidelity, ClampAndContract) {
  CostParams p;
  p.a0 = 10;
  EXPECT_EQ(gate_fidelity(100, 16, 5, p), 0.0);
  EXPECT_THROW(gate_fidelity(100, 1, 0, CostParams{}), InvalidArgument);
  EXPECT_THROW(gate_fidelity(-1, 4, 0, CostParams{}), InvalidArgument);
}

TEST(GateFidelity, MonotoneOnGrid) {
  CostParams p;
  for (int N : {2, 5, 16, 22}) {
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double tau = 50.0 * i, nbar = 0.3 * j;
        const double f = gate_fidelity(tau, N, nbar, p);
        EXPECT_LE(gate_fidelity(tau + 50, N, nbar, p), f);
        EXPECT_LE(gate_fidelity(tau, N, nbar + 0.3, p), f);
      }
    }
  }
}

TEST(Evaluate, SingleGate) {
  CostParams p;
  p.a0 = 0;
  Metrics m = evaluate(make_schedule(1, 0, {gate_event(0, 4, 0)}), p);
  EXPECT_DOUBLE_EQ(m.makespan_us, 100.0);
  EXPECT_NEAR(m.success_rate, 0.9999, 1e-15);
}

TEST(Evaluate, DisjointTrapsRunInParallel) {
  CostParams p;
  Metrics m = evaluate(make_schedule(2, 0, {gate_event(0, 4, 0), gate_event(1, 16, 0)}), p);
  EXPECT_NEAR(m.makespan_us, 159.28, 1e-9);
  EXPECT_EQ(m.timeline[1].start_us, 0.0);

  Metrics serial = evaluate(make_schedule(2, 0, {gate_event(0, 4, 0), gate_event(0, 16, 0)}), p);
  EXPECT_NEAR(serial.makespan_us, 100 + 159.28, 1e-9);
}

TEST(Evaluate, GateAfterShuttleSeesHeat) {
  CostParams p;
  auto s = make_schedule(2, 1, {shuttle_event(0, 1, 2, {0}, {2}), gate_event(1, 4, 0)});
  Metrics m = evaluate(s, p);
  EXPECT_DOUBLE_EQ(m.timeline[0].duration_us, 80 + 10 + 80 + 80);
  EXPECT_DOUBLE_EQ(m.timeline[1].start_us, 250.0);
  EXPECT_DOUBLE_EQ(m.makespan_us, 350.0);
  EXPECT_NEAR(m.final_heat[1], 0.12, 1e-15);
  EXPECT_NEAR(m.success_rate, 0.999542211629859537074974738679, 1e-15);
}

TEST(Evaluate, JunctionIsAResource) {
  CostParams p;
  // Two shuttles between disjoint trap pairs sharing junction 0 serialize.
  auto s = make_schedule(4, 1, {shuttle_event(0, 1, 2, {0}, {4}), shuttle_event(2, 3, 2, {0}, {4})});
  Metrics m = evaluate(s, p);
  EXPECT_DOUBLE_EQ(m.timeline[1].start_us, m.timeline[0].duration_us);
}

TEST(Evaluate, OnlyOneQubitGatesWithoutNoise) {
  CostParams p;
  p.a0 = 0;
  p.gamma = 0;
  std::vector<Event> ev;
  for (int i = 0; i < 5; ++i) ev.push_back(gate_event(0, 3, 0, i % 2 == 0));
  Metrics m = evaluate(make_schedule(1, 0, ev), p);
  EXPECT_DOUBLE_EQ(m.success_rate, std::pow(p.single_qubit_fidelity, 2));
}

TEST(Evaluate, SwapMultiplierAndClampCount) {
  CostParams p;
  p.gate_family = GateFamily::AM1;
  Event sw;
  sw.kind = EventKind::SwapGate;
  sw.trap = 0;
  sw.chain_length = 6;
  sw.ion_distance = 0;
  Metrics one = evaluate(make_schedule(1, 0, {sw}), p);
  p.swap_gate_multiplier = 3;
  Metrics three = evaluate(make_schedule(1, 0, {sw}), p);
  EXPECT_DOUBLE_EQ(three.makespan_us, 3 * one.makespan_us);
  EXPECT_NEAR(three.success_rate, std::pow(one.success_rate, 3), 1e-15);
  EXPECT_EQ(three.am1_clamped, 3);
}

TEST(Evaluate, IdealModesOrdering) {
  for (const char* gen : {"qft:10", "cuccaro_adder:3"}) {
    Circuit c = gen_benchmark(parse_generator_spec(gen));
    DeviceGraph g(parse_topology_spec("G2x2:4"));
    MappingParams mp;
    mp.strategy = MappingStrategy::EvenDivided;
    Schedule s = schedule(c, g, initial_state(c, g, mp));
    ASSERT_GT(s.counts.shuttles, 0);
    CostParams p;
    const double none = evaluate(s, p).success_rate;
    const double ps = evaluate(s, p, IdealMode::PerfectShuttle).success_rate;
    const double pw = evaluate(s, p, IdealMode::PerfectSwap).success_rate;
    const double ideal = evaluate(s, p, IdealMode::Ideal).success_rate;
    EXPECT_GE(ideal, ps);
    EXPECT_GE(ps, none);
    EXPECT_GE(ideal, pw);
    EXPECT_GE(pw, none);
    EXPECT_GT(ps, none);
    EXPECT_LE(evaluate(s, p, IdealMode::PerfectShuttle).makespan_us, evaluate(s, p).makespan_us);
  }
}

TEST(Evaluate, SerialMakespanIsSumOfDurations) {
  CostParams p;
  std::vector<Event> ev = {gate_event(0, 4, 0), gate_event(0, 20, 0), gate_event(0, 4, 0, false)};
  Metrics m = evaluate(make_schedule(1, 0, ev), p);
  double sum = 0;
  for (const auto& t : m.timeline) sum += t.duration_us;
  EXPECT_DOUBLE_EQ(m.makespan_us, sum);
}

TEST(CostParams, Validation) {
  CostParams p;
  p.split_us = -1;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.single_qubit_fidelity = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.swap_gate_multiplier = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  EXPECT_EQ(parse_gate_family("AM2"), GateFamily::AM2);
  EXPECT_EQ(parse_ideal_mode("perfect-swap"), IdealMode::PerfectSwap);
  EXPECT_THROW(parse_ideal_mode("perfect"), InvalidArgument);
}
