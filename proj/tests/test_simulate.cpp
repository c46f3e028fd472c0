#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "flownet/error.hpp"
#include "flownet/simulate.hpp"
#include "helpers.hpp"

using namespace flownet;
using testutil::make_graph;
using testutil::vec;

namespace {

struct SingleLink {
  FlowGraph graph = make_graph({"a", "b"}, {{0, 1}});
  LeontiefOperator op = LeontiefOperator::build(Mat::Zero(1, 1));
  FlowField field = FlowField(graph, {SaturatingExp{1.0}});
  InflowSignal inflow;
  SingleLink() { inflow.links = {LinkSignal::constant(0.5)}; }
};

struct Junction {
  FlowGraph graph =
      make_graph({"n1", "n2", "n3", "n4", "c"}, {{0, 4}, {1, 4}, {2, 4}, {3, 4}});
  LeontiefOperator op = LeontiefOperator::build(Mat::Zero(4, 4));
  FlowField field;
  Junction()
      : field(graph, {PhaseProportional{0.1, {0, 2}}, PhaseProportional{0.1, {1, 3}},
                      PhaseProportional{0.1, {0, 2}}, PhaseProportional{0.1, {1, 3}}}) {}
  InflowSignal inflow(double lambda1) const {
    InflowSignal in;
    in.links = {LinkSignal::constant(lambda1), LinkSignal::constant(0.0),
                LinkSignal::constant(0.0), LinkSignal::constant(0.0)};
    return in;
  }
};

bool monitors_pass(const Trajectory& traj) {
  bool all = !traj.monitors.empty();
  for (const auto& m : traj.monitors) all &= m.pass();
  return all;
}

}  // namespace

TEST_CASE("outflow resolution on the phased junction") {
  Junction j;
  Vec x = vec({0.0, 0.0, 1.0, 0.0});
  Vec f = j.field.eval(x);

  SUBCASE("empty links with nothing arriving release nothing") {
    Vec z = resolve_outflow(x, f, Vec::Zero(4), Mat::Zero(4, 4));
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    CHECK(z[2] == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
    CHECK(z[3] == 0.0);
  }

  SUBCASE("an empty link passes through what arrives, capped by its flow offer") {
    Vec z = resolve_outflow(x, f, vec({0.5, 0.0, 0.0, 0.0}), Mat::Zero(4, 4));
    CHECK(z[0] == doctest::Approx(0.5).epsilon(1e-12));  // below the offer 1/1.1
    CHECK(z[2] == doctest::Approx(1.0 / 1.1).epsilon(1e-12));

    Vec capped = resolve_outflow(x, f, vec({2.0, 0.0, 0.0, 0.0}), Mat::Zero(4, 4));
    CHECK(capped[0] == doctest::Approx(1.0 / 1.1).epsilon(1e-12));  // offer binds
  }
}

TEST_CASE("outflow resolution chains through routed empty links") {
  // e1 feeds e2; both empty; flow offers exceed what arrives, so the inflow
  // passes through both links.
  Mat routing = Mat::Zero(2, 2);
  routing(0, 1) = 1.0;
  Vec x = Vec::Zero(2);
  Vec offers = vec({0.9, 0.8});

  Vec z = resolve_outflow(x, offers, vec({0.5, 0.0}), routing);
  CHECK(z[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(0.5).epsilon(1e-12));

  Vec capped = resolve_outflow(x, offers, vec({2.0, 0.0}), routing);
  CHECK(capped[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(capped[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("single saturating link relaxes to its equilibrium") {
  SingleLink s;
  SimConfig config;
  config.horizon = 20.0;
  Trajectory traj = simulate(s.op, s.field, s.inflow, Vec::Zero(1), config);

  // Equilibrium of dx/dt = 0.5 - (1 - exp(-x)) is ln 2.
  double final_state = traj.states(traj.sample_count() - 1, 0);
  CHECK(std::abs(final_state - std::log(2.0)) < 1e-4);
  CHECK(traj.verdict == SimVerdict::Bounded);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(monitors_pass(traj));

  // The saturating field is bounded, so the capacity-weighted bound monitor
  // must be present alongside the other three.
  REQUIRE(traj.monitors.size() == 5);
  CHECK(traj.monitors[0].name == "transformed-mass-bound[uniform]");
  CHECK(traj.monitors[1].name == "transformed-mass-bound[capacity]");
  CHECK(traj.monitors[2].name == "per-link-growth-bound");
  CHECK(traj.monitors[3].name == "complementarity");
  CHECK(traj.monitors[4].name == "mass-balance");

  // The conservation ledger is recorded at every stored sample and stays at
  // rounding level when nothing was clamped.
  REQUIRE(traj.mass_drift.size() == traj.times.size());
  CHECK(traj.mass_drift.front() == 0.0);
  for (double d : traj.mass_drift) CHECK(std::abs(d) < 1e-10);
  CHECK(traj.monitors[4].worst < 1e-10);
  CHECK(traj.monitors[4].samples_checked == traj.sample_count());
}

TEST_CASE("mass-balance monitor flags drift and skips ledgerless trajectories") {
  SingleLink s;
  SimConfig config;
  config.horizon = 5.0;
  Trajectory traj = simulate(s.op, s.field, s.inflow, Vec::Zero(1), config);

  // A trajectory without a ledger (e.g. read back from disk) is not checkable.
  Trajectory stripped = traj;
  stripped.mass_drift.clear();
  MonitorSummary vacuous = monitor_mass_balance(stripped);
  CHECK(vacuous.samples_checked == 0);
  CHECK(vacuous.violations == 0);

  // Injected drift is reported per unit elapsed time: 5e-6 of spurious mass
  // at t=5 is 1e-6 per unit time, right at tolerance; 10x that must trip it.
  Trajectory tampered = traj;
  std::fill(tampered.mass_drift.begin(), tampered.mass_drift.end(), 5e-5);
  MonitorSummary tripped = monitor_mass_balance(tampered);
  CHECK(tripped.violations > 0);
  CHECK(tripped.worst == doctest::Approx(5e-5).epsilon(1e-9));
  REQUIRE(!tripped.events.empty());
  CHECK(tripped.events.front().time <= 1.0);
}

TEST_CASE("unbounded fields drop the capacity-weighted monitor") {
  SingleLink s;
  FlowField linear(s.graph, {LinearFlow{1.0}});
  SimConfig config;
  config.horizon = 5.0;
  Trajectory traj = simulate(s.op, linear, s.inflow, Vec::Zero(1), config);
  REQUIRE(traj.monitors.size() == 4);
  CHECK(traj.monitors[0].name == "transformed-mass-bound[uniform]");
  CHECK(traj.monitors[1].name == "per-link-growth-bound");
  CHECK(monitors_pass(traj));
}

TEST_CASE("store_every keeps the grid plus the final step") {
  SingleLink s;
  SimConfig config;
  config.dt = 0.1;
  config.horizon = 1.0;
  config.store_every = 3;
  config.run_monitors = false;
  Trajectory traj = simulate(s.op, s.field, s.inflow, Vec::Zero(1), config);
  REQUIRE(traj.sample_count() == 5);
  CHECK(traj.times[0] == doctest::Approx(0.0));
  CHECK(traj.times[1] == doctest::Approx(0.3));
  CHECK(traj.times[2] == doctest::Approx(0.6));
  CHECK(traj.times[3] == doctest::Approx(0.9));
  CHECK(traj.times[4] == doctest::Approx(1.0));
  CHECK(traj.monitors.empty());
}

TEST_CASE("overloaded junction diverges with empty phases staying empty") {
  Junction j;
  SimConfig config;
  config.horizon = 60.0;
  config.mode = SimMode::Inclusion;
  config.store_every = 10;
  Trajectory traj = simulate(j.op, j.field, j.inflow(1.9), Vec::Zero(4), config);

  CHECK(traj.verdict == SimVerdict::Diverging);
  // Only e1 receives inflow; its phase partner e3 and the other phase stay
  // exactly empty under inclusion semantics.
  CHECK(traj.states.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(traj.states.col(2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(traj.states.col(3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(traj.states.minCoeff() >= 0.0);
  CHECK(monitors_pass(traj));
}

TEST_CASE("lightly loaded junction settles") {
  Junction j;
  SimConfig config;
  config.horizon = 30.0;
  config.mode = SimMode::Inclusion;
  config.store_every = 10;
  Trajectory traj = simulate(j.op, j.field, j.inflow(0.5), Vec::Zero(4), config);
  CHECK(traj.verdict == SimVerdict::Bounded);
  // Equilibrium of dx/dt = 0.5 - x/(x + 0.1) is x = 0.1.
  CHECK(traj.states(traj.sample_count() - 1, 0) == doctest::Approx(0.1).epsilon(1e-3));
  CHECK(monitors_pass(traj));
}

TEST_CASE("smooth mode refuses fields that leak from empty links") {
  Junction j;
  SimConfig config;
  config.mode = SimMode::Smooth;
  CHECK_THROWS_KIND(simulate(j.op, j.field, j.inflow(0.5), Vec::Zero(4), config),
                    ErrorKind::Structural);
}

TEST_CASE("precondition checks") {
  SingleLink s;
  SimConfig config;

  SUBCASE("negative initial state") {
    CHECK_THROWS_KIND(simulate(s.op, s.field, s.inflow, vec({-0.5}), config),
                      ErrorKind::Domain);
  }
  SUBCASE("initial state length") {
    CHECK_THROWS_KIND(simulate(s.op, s.field, s.inflow, Vec::Zero(2), config),
                      ErrorKind::Structural);
  }
  SUBCASE("inflow length") {
    InflowSignal wide;
    wide.links = {LinkSignal::constant(0.1), LinkSignal::constant(0.1)};
    CHECK_THROWS_KIND(simulate(s.op, s.field, wide, Vec::Zero(1), config),
                      ErrorKind::Structural);
  }
  SUBCASE("dt above horizon") {
    config.dt = 2.0;
    config.horizon = 1.0;
    CHECK_THROWS_KIND(simulate(s.op, s.field, s.inflow, Vec::Zero(1), config),
                      ErrorKind::Domain);
  }
  SUBCASE("store_every below 1") {
    config.store_every = 0;
    CHECK_THROWS_KIND(simulate(s.op, s.field, s.inflow, Vec::Zero(1), config),
                      ErrorKind::Domain);
  }
}

TEST_CASE("series classification") {
  SimConfig config;  // multiplier 40, trend tolerance 0.05

  SUBCASE("too short to call") {
    CHECK(classify_series({1.0, 2.0, 3.0}, config) == SimVerdict::HorizonReached);
  }
  SUBCASE("flat series is bounded") {
    std::vector<double> flat(100, 10.0);
    CHECK(classify_series(flat, config) == SimVerdict::Bounded);
  }
  SUBCASE("steady growth past the limit is diverging") {
    std::vector<double> ramp;
    for (int k = 0; k < 100; ++k) ramp.push_back(static_cast<double>(k));
    CHECK(classify_series(ramp, config) == SimVerdict::Diverging);
  }
  SUBCASE("growth that has not yet crossed the limit stays undecided") {
    std::vector<double> slow;
    for (int k = 0; k < 100; ++k) slow.push_back(0.1 * k);
    CHECK(classify_series(slow, config) == SimVerdict::HorizonReached);
  }
  SUBCASE("decay from a large start is bounded") {
    std::vector<double> decay;
    for (int k = 0; k < 100; ++k) decay.push_back(100.0 * std::exp(-0.1 * k));
    CHECK(classify_series(decay, config) == SimVerdict::Bounded);
  }
}

TEST_CASE("fourth-order convergence on a coarse pair") {
  // Full order study lives in the acceptance suite; this guards the
  // integrator against silent order loss.
  SingleLink s;
  auto final_state = [&](double dt) {
    SimConfig config;
    config.dt = dt;
    config.horizon = 16.0;
    config.run_monitors = false;
    config.store_every = 1 << 20;  // first and last sample only
    Trajectory traj = simulate(s.op, s.field, s.inflow, Vec::Zero(1), config);
    return traj.states(traj.sample_count() - 1, 0);
  };
  double reference = final_state(0.02 / 64.0);
  double err_coarse = std::abs(final_state(0.16) - reference);
  double err_fine = std::abs(final_state(0.08) - reference);
  double ratio = err_coarse / err_fine;
  CHECK(ratio > 10.0);
  CHECK(ratio < 24.0);
}
