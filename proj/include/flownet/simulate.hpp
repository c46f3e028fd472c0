#pragma once

#include <string>
#include <vector>

#include "flownet/certificates.hpp"
#include "flownet/flows.hpp"
#include "flownet/inflow.hpp"
#include "flownet/leontief.hpp"
#include "flownet/types.hpp"

namespace flownet {

enum class SimMode { Smooth, Inclusion };
enum class SimVerdict { Bounded, Diverging, HorizonReached };

const char* to_string(SimMode m);
const char* to_string(SimVerdict v);

struct SimConfig {
  double dt = 1e-3;
  double horizon = 100.0;
  SimMode mode = SimMode::Smooth;
  int store_every = 1;         // keep every k-th step (the last step is always kept)
  double zero_threshold = 1e-9;   // a link at or below this counts as empty
  double clamp_tolerance = 1e-9;  // negative excursions beyond this fail the run
  double divergence_multiplier = 40.0;
  double trend_tolerance = 0.05;
  bool run_monitors = true;
  int resolve_max_iterations = 500;
  double resolve_tolerance = 1e-12;
};

struct MonitorEvent {
  double time = 0.0;
  double amount = 0.0;  // how far past the bound/tolerance
};

struct MonitorSummary {
  std::string name;
  int samples_checked = 0;
  int violations = 0;
  double worst = 0.0;  // most positive residual seen (negative means slack everywhere)
  double tolerance = 0.0;
  std::vector<MonitorEvent> events;  // first violations, capped
  bool pass() const { return violations == 0; }
};

struct Trajectory {
  std::vector<double> times;
  Mat states;    // one row per stored sample
  Mat outflows;  // resolved z at the same samples
  std::vector<double> v_uniform;   // transformed total mass, uniform weights
  std::vector<double> v_capacity;  // capacity weights (0 on unbounded links)
  // Conservation ledger: sum(x(t)) - sum(x(0)) minus the integrator's own
  // quadrature of (total inflow - flow leaving the network), recorded at each
  // stored sample. Stays at rounding level unless clamping injected mass.
  // Empty on trajectories read back from CSV.
  std::vector<double> mass_drift;
  SimVerdict verdict = SimVerdict::HorizonReached;
  std::vector<MonitorSummary> monitors;

  int sample_count() const { return static_cast<int>(times.size()); }
  int link_count() const { return static_cast<int>(states.cols()); }
};

// Outflow selection under inclusion semantics: links holding mass release
// f_i; empty links release what arrives, capped by f_i. Computed as the
// smallest fixed point of z_i = min(f_i, lambda_i + (R^T z)_i) over the
// empty set, which exists and is reached by monotone iteration because the
// routing is substochastic.
Vec resolve_outflow(const Vec& x, const Vec& flow, const Vec& lambda_now, const Mat& routing,
                    double zero_threshold = 1e-9, int max_iterations = 500, double tol = 1e-12);

// Fixed-step 4th-order Runge-Kutta on dx/dt = lambda(t) - (I - R^T) z with
// z = f(x) (smooth) or the resolved inclusion outflow. Stage states are
// clamped at zero for evaluation; accepted states may dip below zero only
// within clamp_tolerance (then they are snapped to zero), anything worse
// throws Error(Numeric). Smooth mode requires a field whose flow vanishes
// exactly on empty links.
Trajectory simulate(const LeontiefOperator& op, const FlowField& field,
                    const InflowSignal& inflow, const Vec& x0, const SimConfig& config);

// Boundedness call on a scalar series: compares the peak and final value
// against multiplier * max(initial, 1) and the late-window trend. Returns
// HorizonReached when the evidence is mixed.
SimVerdict classify_series(const std::vector<double>& values, const SimConfig& config);

// Runtime guarantees checked sample by sample. Each returns a summary with
// the violation count and the worst residual; they never throw on violations.
MonitorSummary monitor_transformed_mass_bound(const Trajectory& traj, const LeontiefOperator& op,
                                              const InflowSignal& inflow,
                                              const LyapunovWeights& weights, double tol = 1e-6);
MonitorSummary monitor_per_link_bound(const Trajectory& traj, const LeontiefOperator& op,
                                      const InflowSignal& inflow, double tol = 1e-6);
MonitorSummary monitor_complementarity(const Trajectory& traj, const FlowField& field,
                                       double tol = 1e-6);

// Conservation check on the integrator's mass ledger: the residual at each
// sample is |mass_drift| divided by the elapsed time (floored at one time
// unit), so the tolerance reads as admissible drift per unit time. A pointwise
// finite-difference comparison cannot do this job: its truncation error grows
// with the third derivative of the total mass and exceeds any useful tolerance
// on stiff startup transients even when the integrator conserves mass to
// rounding. Trajectories without a ledger (CSV read-back) report zero samples.
MonitorSummary monitor_mass_balance(const Trajectory& traj, double tol = 1e-6);

}  // namespace flownet
