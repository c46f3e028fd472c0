#pragma once

#include <string>
#include <vector>

#include "flownet/certificates.hpp"
#include "flownet/flows.hpp"
#include "flownet/inflow.hpp"
#include "flownet/leontief.hpp"
#include "flownet/simulate.hpp"
#include "flownet/types.hpp"

namespace flownet {

// One commodity: its own routing over the shared graph, its own inflow and
// initial state. The shared link capacity is split between commodities in
// proportion to their share of the mass on the link.
struct CommoditySpec {
  std::string id;
  Mat routing;
  InflowSignal inflow;
  Vec initial_state;
};

struct MCTrajectory {
  std::vector<std::string> commodity_ids;
  // Per-commodity samples; each entry's v-series is that commodity's own
  // contribution to the transformed mass.
  std::vector<Trajectory> commodities;
  std::vector<double> times;
  std::vector<double> v_uniform_total;
  std::vector<double> v_capacity_total;
  SimVerdict verdict = SimVerdict::HorizonReached;
  std::vector<MonitorSummary> monitors;
};

// Same fixed-step integrator as simulate(), on the stacked state. Outflow of
// commodity k on link i is share * f_i(aggregate), share being commodity k's
// fraction of the aggregate mass there (zero when the link is empty).
// Requires a bounded field whose flow vanishes exactly on empty links, and a
// valid routing per commodity. Throws Error(Numeric) if any commodity state
// leaves the nonnegative orthant beyond the clamp tolerance.
MCTrajectory mc_simulate(const FlowField& field, const std::vector<CommoditySpec>& commodities,
                         const SimConfig& config);

// Capacity-normalized inflow bound summed across commodities: the sup of
// sum_k sum_i a^k_i / c_i against the normalized total-outflow liminf.
CertificateReport mc_certify(const FlowField& field,
                             const std::vector<CommoditySpec>& commodities,
                             double horizon_hint = 100.0);

// sum_k w^T (I - (R^k)^T)^{-1} x^k
double mc_lyapunov(const std::vector<LeontiefOperator>& ops, const LyapunovWeights& weights,
                   const std::vector<Vec>& states);

}  // namespace flownet
