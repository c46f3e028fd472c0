#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "flownet/graph.hpp"
#include "flownet/types.hpp"

namespace flownet {

// Per-link outflow families. Links whose family couples them to the other
// links entering the same head node (NodeProportional, PhaseProportional)
// must agree on family and kappa across that node's incoming set.

struct SaturatingExp {
  double capacity = 1.0;  // f(x_i) = capacity * (1 - exp(-x_i))
};

struct LinearFlow {
  double rate = 1.0;  // f(x_i) = rate * x_i, unbounded
};

// f_i = x_i / (sum of x_j over links j entering head(i), + kappa)
struct NodeProportional {
  double kappa = 1.0;
};

// f_i = (sum of x_j over links j in phase(i)) / (node sum + kappa).
// The phase groups partition the head node's incoming links; a link can
// flow while empty, so fields containing this family are only well posed
// as a differential inclusion.
struct PhaseProportional {
  double kappa = 1.0;
  std::vector<int> phase;  // link ids sharing this link's phase, self included
};

// Escape hatch for flow laws with no closed-form description here. Not on
// the certified path: the total-flow liminf is reported as unknown.
struct CustomFlow {
  std::function<double(const Vec&)> fn;
  double capacity = std::numeric_limits<double>::infinity();
  bool vanishes_iff_empty = false;  // caller vouches f > 0 exactly when x_i > 0
  std::string label = "custom";
};

using FlowFamily =
    std::variant<SaturatingExp, LinearFlow, NodeProportional, PhaseProportional, CustomFlow>;

struct LiminfResult {
  double value = 0.0;  // may be +inf; NaN when not known
  bool known = true;
  std::string provenance;  // "analytic" or "unknown"
  std::string breakdown;   // per-group accounting, human readable
  double probe = 0.0;      // numeric group-ray probe at scale 1e6, never above value
};

struct OccupancyReport {
  int samples_checked = 0;
  std::vector<std::string> issues;
  bool clean() const { return issues.empty(); }
  std::string to_text() const;
};

class FlowField {
 public:
  // Throws Error(Validation) on parameter or node-coupling inconsistencies.
  FlowField(const FlowGraph& graph, std::vector<FlowFamily> families);

  int size() const { return static_cast<int>(families_.size()); }
  const FlowGraph& graph() const { return graph_; }
  const std::vector<FlowFamily>& families() const { return families_; }

  // Outflow vector at state x >= 0 (throws Error(Domain) otherwise).
  Vec eval(const Vec& x) const;

  // Per-link supremum of f_i; +inf where unbounded or unknown.
  Vec capacities() const;
  bool bounded() const;

  // True when some link can flow while empty, so the smooth ODE is not the
  // right model and the inclusion semantics must be used.
  bool needs_inclusion() const;

  // True when every family guarantees f_i > 0 exactly when x_i > 0.
  bool flow_vanishes_iff_empty() const;
  bool has_custom() const;

  // Liminf of total (optionally capacity-normalized) outflow over diverging
  // states, accounted per node-coupled group plus one term for saturating
  // links. IndicatorRestricted drops the contribution of links pinned at
  // zero, which is the right reading under inclusion semantics.
  enum class LiminfMode { Smooth, IndicatorRestricted };
  LiminfResult liminf_total_flow(LiminfMode mode, bool normalized) const;

  // Numeric counterpart of the liminf accounting: total (normalized) flow
  // summed over each contributing group's own divergence ray at the given
  // scale. Stays at or below the analytic value for every scale.
  double liminf_probe(LiminfMode mode, bool normalized, double scale) const;

  // Diagnostic sweep: flags links flowing while empty and links occupied
  // beyond tolerance yet flowless.
  OccupancyReport check_flow_occupancy(const std::vector<Vec>& samples,
                                       double tol = 1e-9) const;

 private:
  FlowGraph graph_;
  std::vector<FlowFamily> families_;
  std::vector<std::vector<int>> node_pool_;  // per link: E_v of its head, when coupled
  std::vector<int> sat_links_;
  std::vector<int> linear_links_;
  std::vector<int> custom_links_;
  // Coupled head nodes, one entry per node that uses a shared-pool family.
  struct CoupledNode {
    int node = -1;
    bool phased = false;
    std::vector<int> pool;                      // incoming link ids
    std::vector<std::vector<int>> phase_groups;  // partition of pool (phased only)
  };
  std::vector<CoupledNode> coupled_nodes_;
};

}  // namespace flownet
