#include "flownet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "flownet/error.hpp"

namespace flownet {

const char* to_string(SimMode m) {
  return m == SimMode::Smooth ? "smooth" : "inclusion";
}

const char* to_string(SimVerdict v) {
  switch (v) {
    case SimVerdict::Bounded: return "bounded";
    case SimVerdict::Diverging: return "diverging";
    case SimVerdict::HorizonReached: return "horizon-reached";
  }
  return "unknown";
}

Vec resolve_outflow(const Vec& x, const Vec& flow, const Vec& lambda_now, const Mat& routing,
                    double zero_threshold, int max_iterations, double tol) {
  const int m = static_cast<int>(x.size());
  if (flow.size() != m || lambda_now.size() != m || routing.rows() != m || routing.cols() != m)
    throw Error(ErrorKind::Structural, "outflow resolution inputs disagree on the link count");

  std::vector<int> empty;
  for (int i = 0; i < m; ++i)
    if (x[i] <= zero_threshold) empty.push_back(i);

  Vec z = flow;
  if (empty.empty()) return z;
  for (int i : empty) z[i] = 0.0;

  // Monotone iteration from below: each pass can only raise the empty-link
  // entries toward the fixed point, and the occupied entries never move.
  for (int pass = 0; pass < max_iterations; ++pass) {
    double change = 0.0;
    Vec routed = routing.transpose() * z;
    for (int i : empty) {
      double candidate = std::min(flow[i], lambda_now[i] + routed[i]);
      change = std::max(change, std::abs(candidate - z[i]));
      z[i] = candidate;
    }
    if (change < tol) return z;
  }
  std::ostringstream msg;
  msg << "outflow fixed point did not settle within " << max_iterations << " passes";
  throw Error(ErrorKind::Numeric, msg.str());
}

SimVerdict classify_series(const std::vector<double>& values, const SimConfig& config) {
  if (values.size() < 8) return SimVerdict::HorizonReached;
  double initial = values.front();
  double limit = config.divergence_multiplier * std::max(initial, 1.0);
  double peak = *std::max_element(values.begin(), values.end());

  size_t quarter = std::max<size_t>(4, values.size() / 4);
  size_t start = values.size() - quarter;
  size_t mid = start + quarter / 2;
  auto mean = [&](size_t lo, size_t hi) {
    return std::accumulate(values.begin() + lo, values.begin() + hi, 0.0) / (hi - lo);
  };
  double early = mean(start, mid);
  double late = mean(mid, values.size());
  double trend = late - early;
  double window_mean = mean(start, values.size());

  if (values.back() > limit && trend > 0.0) return SimVerdict::Diverging;
  if (peak <= limit && trend <= config.trend_tolerance * (1.0 + window_mean))
    return SimVerdict::Bounded;
  return SimVerdict::HorizonReached;
}

namespace {

void check_finite(const Vec& x, double t) {
  for (int i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      std::ostringstream msg;
      msg << "state became non-finite at t=" << t << " (link index " << i
          << "); the step size is too coarse for this stiffness or the dynamics diverge";
      throw Error(ErrorKind::Numeric, msg.str());
    }
  }
}

}  // namespace

Trajectory simulate(const LeontiefOperator& op, const FlowField& field,
                    const InflowSignal& inflow, const Vec& x0, const SimConfig& config) {
  const int m = field.size();
  if (op.size() != m || inflow.size() != m)
    throw Error(ErrorKind::Structural,
                "routing, flow field, and inflow must agree on the link count");
  if (x0.size() != m)
    throw Error(ErrorKind::Structural, "initial state length does not match the link count");
  for (int i = 0; i < m; ++i)
    if (!(x0[i] >= 0.0))
      throw Error(ErrorKind::Domain, "initial state must be nonnegative");
  if (!(config.dt > 0.0) || !(config.horizon > 0.0) || config.dt > config.horizon)
    throw Error(ErrorKind::Domain, "need 0 < dt <= horizon");
  if (config.store_every < 1)
    throw Error(ErrorKind::Domain, "store_every must be at least 1");
  if (config.mode == SimMode::Smooth && !field.flow_vanishes_iff_empty())
    throw Error(ErrorKind::Structural,
                "this flow field can release mass from empty links; run it in inclusion mode");

  const Mat& routing = op.routing();
  const Mat outflow_map = Mat::Identity(m, m) - routing.transpose();
  const long steps = std::lround(config.horizon / config.dt);
  const double dt = config.dt;

  auto outflow_at = [&](const Vec& state, double t) -> Vec {
    Vec f = field.eval(state);
    if (config.mode == SimMode::Inclusion)
      return resolve_outflow(state, f, inflow.value(t), routing, config.zero_threshold,
                             config.resolve_max_iterations, config.resolve_tolerance);
    return f;
  };
  auto derivative = [&](const Vec& state, double t) -> Vec {
    Vec clamped = state.cwiseMax(0.0);
    return inflow.value(t) - outflow_map * outflow_at(clamped, t);
  };

  Trajectory traj;
  const long stored_upper = steps / config.store_every + 2;
  traj.times.reserve(stored_upper);
  traj.v_uniform.reserve(stored_upper);
  traj.v_capacity.reserve(stored_upper);
  traj.mass_drift.reserve(stored_upper);
  std::vector<Vec> states, outflows;
  states.reserve(stored_upper);
  outflows.reserve(stored_upper);

  const Vec g_uniform = op.weighted_column_sums(Vec::Ones(m));
  const Vec g_capacity = op.weighted_column_sums(LyapunovWeights::capacity(field.capacities()).w);

  Vec x = x0;
  const double mass0 = x0.sum();
  double ledger = 0.0;  // integrator's own quadrature of net mass change
  for (long k = 0;; ++k) {
    double t = k * dt;
    if (k % config.store_every == 0 || k == steps) {
      traj.times.push_back(t);
      states.push_back(x);
      outflows.push_back(outflow_at(x, t));
      traj.v_uniform.push_back(g_uniform.dot(x));
      traj.v_capacity.push_back(g_capacity.dot(x));
      traj.mass_drift.push_back(x.sum() - mass0 - ledger);
    }
    if (k == steps) break;

    Vec d1 = derivative(x, t);
    Vec d2 = derivative(x + 0.5 * dt * d1, t + 0.5 * dt);
    Vec d3 = derivative(x + 0.5 * dt * d2, t + 0.5 * dt);
    Vec d4 = derivative(x + dt * d3, t + dt);
    Vec delta = dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
    x += delta;
    ledger += delta.sum();

    check_finite(x, t + dt);
    for (int i = 0; i < m; ++i) {
      if (x[i] < 0.0) {
        if (x[i] < -config.clamp_tolerance) {
          std::ostringstream msg;
          msg << "integration failure: link '" << field.graph().links[i].name << "' reached "
              << x[i] << " at t=" << t + dt << ", beyond the clamp tolerance "
              << config.clamp_tolerance << "; reduce dt or switch to inclusion mode";
          throw Error(ErrorKind::Numeric, msg.str());
        }
        x[i] = 0.0;
      }
    }
  }

  const int n_samples = static_cast<int>(traj.times.size());
  traj.states.resize(n_samples, m);
  traj.outflows.resize(n_samples, m);
  for (int s = 0; s < n_samples; ++s) {
    traj.states.row(s) = states[s].transpose();
    traj.outflows.row(s) = outflows[s].transpose();
  }

  traj.verdict = classify_series(traj.v_uniform, config);

  if (config.run_monitors) {
    traj.monitors.push_back(monitor_transformed_mass_bound(
        traj, op, inflow, LyapunovWeights::uniform(m)));
    if (field.bounded())
      traj.monitors.push_back(monitor_transformed_mass_bound(
          traj, op, inflow, LyapunovWeights::capacity(field.capacities())));
    traj.monitors.push_back(monitor_per_link_bound(traj, op, inflow));
    traj.monitors.push_back(monitor_complementarity(traj, field));
    traj.monitors.push_back(monitor_mass_balance(traj));
  }
  return traj;
}

namespace {

constexpr size_t kMaxEvents = 50;

void record(MonitorSummary& summary, double t, double amount) {
  ++summary.violations;
  if (summary.events.size() < kMaxEvents) summary.events.push_back({t, amount});
}

}  // namespace

MonitorSummary monitor_transformed_mass_bound(const Trajectory& traj, const LeontiefOperator& op,
                                              const InflowSignal& inflow,
                                              const LyapunovWeights& weights, double tol) {
  MonitorSummary summary;
  summary.name = "transformed-mass-bound[" + weights.label + "]";
  summary.tolerance = tol;
  const Vec g = op.weighted_column_sums(weights.w);
  const double v0 = g.dot(traj.states.row(0));
  for (int s = 0; s < traj.sample_count(); ++s) {
    double bound = v0 + g.dot(inflow.integral(traj.times[s]));
    double excess = g.dot(traj.states.row(s)) - bound;
    summary.worst = std::max(summary.worst, excess);
    ++summary.samples_checked;
    if (excess > tol * (1.0 + std::abs(bound))) record(summary, traj.times[s], excess);
  }
  return summary;
}

MonitorSummary monitor_per_link_bound(const Trajectory& traj, const LeontiefOperator& op,
                                      const InflowSignal& inflow, double tol) {
  MonitorSummary summary;
  summary.name = "per-link-growth-bound";
  summary.tolerance = tol;
  const Vec offset = op.solve(traj.states.row(0).transpose());
  for (int s = 0; s < traj.sample_count(); ++s) {
    Vec bound = op.solve(inflow.integral(traj.times[s])) + offset;
    ++summary.samples_checked;
    double worst_here = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < traj.link_count(); ++i) {
      double excess = traj.states(s, i) - bound[i];
      worst_here = std::max(worst_here, excess);
      if (excess > tol * (1.0 + std::abs(bound[i]))) {
        record(summary, traj.times[s], excess);
        break;  // one event per sample is enough
      }
    }
    summary.worst = std::max(summary.worst, worst_here);
  }
  return summary;
}

MonitorSummary monitor_complementarity(const Trajectory& traj, const FlowField& field,
                                       double tol) {
  MonitorSummary summary;
  summary.name = "complementarity";
  summary.tolerance = tol;
  for (int s = 0; s < traj.sample_count(); ++s) {
    Vec x = traj.states.row(s).transpose();
    Vec f = field.eval(x);
    double residual = 0.0;
    for (int i = 0; i < traj.link_count(); ++i)
      residual = std::max(residual, std::abs(x[i] * (traj.outflows(s, i) - f[i])));
    summary.worst = std::max(summary.worst, residual);
    ++summary.samples_checked;
    if (residual > tol) record(summary, traj.times[s], residual);
  }
  return summary;
}

MonitorSummary monitor_mass_balance(const Trajectory& traj, double tol) {
  MonitorSummary summary;
  summary.name = "mass-balance";
  summary.tolerance = tol;
  if (traj.mass_drift.size() != traj.times.size() || traj.times.empty()) return summary;
  const double t0 = traj.times.front();
  for (int s = 0; s < traj.sample_count(); ++s) {
    double elapsed = std::max(traj.times[s] - t0, 1.0);
    double residual = std::abs(traj.mass_drift[s]) / elapsed;
    summary.worst = std::max(summary.worst, residual);
    ++summary.samples_checked;
    if (residual > tol) record(summary, traj.times[s], residual);
  }
  return summary;
}

}  // namespace flownet
