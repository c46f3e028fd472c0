#include "flownet/multicommodity.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "flownet/error.hpp"
#include "flownet/graph.hpp"

namespace flownet {

namespace {

std::vector<LeontiefOperator> build_operators(const FlowField& field,
                                              const std::vector<CommoditySpec>& commodities) {
  if (commodities.empty())
    throw Error(ErrorKind::Structural, "at least one commodity is required");
  std::set<std::string> ids;
  std::vector<LeontiefOperator> ops;
  for (const CommoditySpec& c : commodities) {
    if (c.id.empty() || !ids.insert(c.id).second)
      throw Error(ErrorKind::Validation, "commodity ids must be nonempty and unique");
    ValidationReport report = validate_network(field.graph(), c.routing);
    if (!report.valid())
      throw Error(ErrorKind::Validation,
                  "commodity '" + c.id + "' routing is invalid:\n" + report.to_text());
    if (c.inflow.size() != field.size())
      throw Error(ErrorKind::Structural,
                  "commodity '" + c.id + "' inflow length does not match the link count");
    ops.push_back(LeontiefOperator::build(c.routing));
  }
  return ops;
}

}  // namespace

MCTrajectory mc_simulate(const FlowField& field, const std::vector<CommoditySpec>& commodities,
                         const SimConfig& config) {
  const int m = field.size();
  const int K = static_cast<int>(commodities.size());
  std::vector<LeontiefOperator> ops = build_operators(field, commodities);
  for (const CommoditySpec& c : commodities) {
    if (c.initial_state.size() != m)
      throw Error(ErrorKind::Structural,
                  "commodity '" + c.id + "' initial state length does not match the link count");
    for (int i = 0; i < m; ++i)
      if (!(c.initial_state[i] >= 0.0))
        throw Error(ErrorKind::Domain, "initial state must be nonnegative");
  }
  if (!field.bounded())
    throw Error(ErrorKind::Structural,
                "commodity splitting needs a finite capacity on every link");
  if (!field.flow_vanishes_iff_empty() || config.mode == SimMode::Inclusion)
    throw Error(ErrorKind::Structural,
                "commodity dynamics are only defined for smooth fields (flow vanishing "
                "exactly on empty links)");
  if (!(config.dt > 0.0) || !(config.horizon > 0.0) || config.dt > config.horizon)
    throw Error(ErrorKind::Domain, "need 0 < dt <= horizon");
  if (config.store_every < 1)
    throw Error(ErrorKind::Domain, "store_every must be at least 1");

  std::vector<Mat> outflow_maps;
  for (const CommoditySpec& c : commodities)
    outflow_maps.push_back(Mat::Identity(m, m) - c.routing.transpose());

  // Stacked state y: commodity k occupies [k*m, (k+1)*m).
  auto outflows_at = [&](const Vec& y, std::vector<Vec>& z) {
    Vec aggregate = Vec::Zero(m);
    for (int k = 0; k < K; ++k) aggregate += y.segment(k * m, m).cwiseMax(0.0);
    Vec f = field.eval(aggregate);
    for (int k = 0; k < K; ++k) {
      z[k].resize(m);
      for (int i = 0; i < m; ++i) {
        double share = aggregate[i] > config.zero_threshold
                           ? std::max(y[k * m + i], 0.0) / aggregate[i]
                           : 0.0;
        z[k][i] = share * f[i];
      }
    }
  };
  std::vector<Vec> z_stage(K);
  auto derivative = [&](const Vec& y, double t) -> Vec {
    Vec dy(K * m);
    outflows_at(y, z_stage);
    for (int k = 0; k < K; ++k)
      dy.segment(k * m, m) = commodities[k].inflow.value(t) - outflow_maps[k] * z_stage[k];
    return dy;
  };

  MCTrajectory mc;
  mc.commodities.resize(K);
  const long steps = std::lround(config.horizon / config.dt);
  const double dt = config.dt;
  const long stored_upper = steps / config.store_every + 2;

  Vec g_uniform_stacked(K * m), g_capacity_stacked(K * m);
  const Vec inv_cap = LyapunovWeights::capacity(field.capacities()).w;
  for (int k = 0; k < K; ++k) {
    g_uniform_stacked.segment(k * m, m) = ops[k].weighted_column_sums(Vec::Ones(m));
    g_capacity_stacked.segment(k * m, m) = ops[k].weighted_column_sums(inv_cap);
  }

  std::vector<std::vector<Vec>> states(K), outflows(K);
  std::vector<std::vector<double>> drifts(K);
  for (int k = 0; k < K; ++k) {
    mc.commodity_ids.push_back(commodities[k].id);
    states[k].reserve(stored_upper);
    outflows[k].reserve(stored_upper);
    drifts[k].reserve(stored_upper);
  }
  mc.times.reserve(stored_upper);
  mc.v_uniform_total.reserve(stored_upper);
  mc.v_capacity_total.reserve(stored_upper);

  Vec y(K * m);
  std::vector<double> mass0(K), ledgers(K, 0.0);
  for (int k = 0; k < K; ++k) {
    y.segment(k * m, m) = commodities[k].initial_state;
    mass0[k] = commodities[k].initial_state.sum();
  }

  std::vector<Vec> z_sample(K);
  for (long step = 0;; ++step) {
    double t = step * dt;
    if (step % config.store_every == 0 || step == steps) {
      outflows_at(y, z_sample);
      mc.times.push_back(t);
      for (int k = 0; k < K; ++k) {
        states[k].push_back(y.segment(k * m, m));
        outflows[k].push_back(z_sample[k]);
        drifts[k].push_back(y.segment(k * m, m).sum() - mass0[k] - ledgers[k]);
      }
      mc.v_uniform_total.push_back(g_uniform_stacked.dot(y));
      mc.v_capacity_total.push_back(g_capacity_stacked.dot(y));
    }
    if (step == steps) break;

    Vec d1 = derivative(y, t);
    Vec d2 = derivative(y + 0.5 * dt * d1, t + 0.5 * dt);
    Vec d3 = derivative(y + 0.5 * dt * d2, t + 0.5 * dt);
    Vec d4 = derivative(y + dt * d3, t + dt);
    Vec delta = dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
    y += delta;
    for (int k = 0; k < K; ++k) ledgers[k] += delta.segment(k * m, m).sum();

    for (int k = 0; k < K; ++k) {
      for (int i = 0; i < m; ++i) {
        double& v = y[k * m + i];
        if (!std::isfinite(v)) {
          std::ostringstream msg;
          msg << "commodity '" << commodities[k].id << "' became non-finite at t=" << t + dt;
          throw Error(ErrorKind::Numeric, msg.str());
        }
        if (v < 0.0) {
          if (v < -config.clamp_tolerance) {
            std::ostringstream msg;
            msg << "integration failure: commodity '" << commodities[k].id << "' on link '"
                << field.graph().links[i].name << "' reached " << v << " at t=" << t + dt
                << "; reduce dt";
            throw Error(ErrorKind::Numeric, msg.str());
          }
          v = 0.0;
        }
      }
    }
  }

  const int n_samples = static_cast<int>(mc.times.size());
  for (int k = 0; k < K; ++k) {
    Trajectory& traj = mc.commodities[k];
    traj.times = mc.times;
    traj.mass_drift = drifts[k];
    traj.states.resize(n_samples, m);
    traj.outflows.resize(n_samples, m);
    const Vec g_u = g_uniform_stacked.segment(k * m, m);
    const Vec g_c = g_capacity_stacked.segment(k * m, m);
    traj.v_uniform.resize(n_samples);
    traj.v_capacity.resize(n_samples);
    for (int s = 0; s < n_samples; ++s) {
      traj.states.row(s) = states[k][s].transpose();
      traj.outflows.row(s) = outflows[k][s].transpose();
      traj.v_uniform[s] = g_u.dot(states[k][s]);
      traj.v_capacity[s] = g_c.dot(states[k][s]);
    }
  }

  mc.verdict = classify_series(mc.v_uniform_total, config);
  for (Trajectory& traj : mc.commodities) traj.verdict = mc.verdict;

  if (config.run_monitors) {
    // Per-commodity conservation plus the shared-capacity split consistency.
    for (int k = 0; k < K; ++k) {
      MonitorSummary balance = monitor_mass_balance(mc.commodities[k]);
      balance.name = "mass-balance[" + commodities[k].id + "]";
      mc.monitors.push_back(std::move(balance));
    }

    MonitorSummary split;
    split.name = "capacity-split";
    split.tolerance = 1e-6;
    for (int s = 0; s < n_samples; ++s) {
      Vec aggregate = Vec::Zero(m);
      Vec z_total = Vec::Zero(m);
      for (int k = 0; k < K; ++k) {
        aggregate += mc.commodities[k].states.row(s).transpose();
        z_total += mc.commodities[k].outflows.row(s).transpose();
      }
      Vec f = field.eval(aggregate);
      double residual = 0.0;
      for (int i = 0; i < m; ++i) {
        if (aggregate[i] <= config.zero_threshold) continue;  // empty links release nothing
        residual = std::max(residual, std::abs(z_total[i] - f[i]));
      }
      split.worst = std::max(split.worst, residual);
      ++split.samples_checked;
      if (residual > split.tolerance && split.events.size() < 50) {
        ++split.violations;
        split.events.push_back({mc.times[s], residual});
      } else if (residual > split.tolerance) {
        ++split.violations;
      }
    }
    mc.monitors.push_back(std::move(split));

    MonitorSummary vbound;
    vbound.name = "transformed-mass-bound[capacity,total]";
    vbound.tolerance = 1e-6;
    const double v0 = mc.v_capacity_total.front();
    for (int s = 0; s < n_samples; ++s) {
      double bound = v0;
      for (int k = 0; k < K; ++k)
        bound += g_capacity_stacked.segment(k * m, m)
                     .dot(commodities[k].inflow.integral(mc.times[s]));
      double excess = mc.v_capacity_total[s] - bound;
      vbound.worst = std::max(vbound.worst, excess);
      ++vbound.samples_checked;
      if (excess > vbound.tolerance * (1.0 + std::abs(bound)) && vbound.events.size() < 50) {
        ++vbound.violations;
        vbound.events.push_back({mc.times[s], excess});
      } else if (excess > vbound.tolerance * (1.0 + std::abs(bound))) {
        ++vbound.violations;
      }
    }
    mc.monitors.push_back(std::move(vbound));
  }
  return mc;
}

CertificateReport mc_certify(const FlowField& field,
                             const std::vector<CommoditySpec>& commodities,
                             double horizon_hint) {
  std::vector<LeontiefOperator> ops = build_operators(field, commodities);
  CertificateReport report;
  report.condition = "multicommodity-inflow-bound";

  if (!field.bounded()) {
    report.verdict = Verdict::Uncertifiable;
    report.notes.push_back("some link capacity is infinite; commodity splitting and the "
                           "normalized bound are undefined");
    return report;
  }
  if (field.needs_inclusion()) {
    report.verdict = Verdict::Uncertifiable;
    report.notes.push_back("flow can leave empty links; commodity dynamics are undefined here");
    return report;
  }

  const int m = field.size();
  const Vec inv_cap = LyapunovWeights::capacity(field.capacities()).w;

  // Stack all commodities into one signal so the sup is over the true sum,
  // not a sum of per-commodity sups.
  InflowSignal stacked;
  Vec g(static_cast<int>(commodities.size()) * m);
  for (size_t k = 0; k < commodities.size(); ++k) {
    g.segment(static_cast<int>(k) * m, m) = ops[k].weighted_column_sums(inv_cap);
    for (const LinkSignal& s : commodities[k].inflow.links) stacked.links.push_back(s);
  }
  SupResult sup = sup_weighted(stacked, g, horizon_hint);
  report.lhs = sup.value;
  report.sup_provenance = sup.provenance;

  LiminfResult liminf = field.liminf_total_flow(FlowField::LiminfMode::Smooth, true);
  report.rhs = liminf.value;
  report.rhs_known = liminf.known;
  report.liminf_provenance = liminf.provenance;
  if (!liminf.known) {
    report.verdict = Verdict::Uncertifiable;
    report.notes.push_back(liminf.breakdown);
    return report;
  }
  report.notes.push_back("outflow liminf: " + liminf.breakdown);
  report.verdict = report.lhs < report.rhs ? Verdict::CertifiedISS : Verdict::NotCertified;
  return report;
}

double mc_lyapunov(const std::vector<LeontiefOperator>& ops, const LyapunovWeights& weights,
                   const std::vector<Vec>& states) {
  if (ops.size() != states.size() || ops.empty())
    throw Error(ErrorKind::Structural, "one state per commodity operator is required");
  double total = 0.0;
  for (size_t k = 0; k < ops.size(); ++k)
    total += lyapunov_value(weights, ops[k], states[k]);
  return total;
}

}  // namespace flownet
