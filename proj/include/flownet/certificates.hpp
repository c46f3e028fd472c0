#pragma once

#include <string>
#include <vector>

#include "flownet/flows.hpp"
#include "flownet/inflow.hpp"
#include "flownet/leontief.hpp"
#include "flownet/types.hpp"

namespace flownet {

enum class Verdict {
  CertifiedISS,        // sufficient condition met: state stays bounded
  NotCertified,        // condition not met; says nothing by itself
  NecessarilyUnstable, // a matching necessary condition is violated
  Uncertifiable,       // the certificate does not apply to this field
  NotDetermined,       // this check's hypothesis is unmet or uninformative
};

const char* to_string(Verdict v);

// One certificate evaluation: lhs is the sup of the transformed inflow, rhs
// the liminf of total outflow on the matching scale. certified-ISS always
// means lhs < rhs strictly with both sides known.
struct CertificateReport {
  std::string condition;
  Verdict verdict = Verdict::NotCertified;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  bool rhs_known = false;
  std::string sup_provenance;
  std::string liminf_provenance;
  std::vector<std::string> notes;

  double margin() const { return rhs - lhs; }
};

// sup_t of total transformed inflow vs the liminf of total outflow
// (uniform weights). Refuses fields where flow can leave empty links (the
// smooth model does not apply; the naive numbers are still reported) and
// fields whose liminf is unknown.
CertificateReport certify_iss(const LeontiefOperator& op, const FlowField& field,
                              const InflowSignal& inflow, double horizon_hint = 100.0);

// Capacity-normalized variant: weights 1/c_i, rhs on the normalized scale.
// Sharper than the uniform certificate when capacities are uneven. Requires
// every capacity finite.
CertificateReport certify_iss_normalized(const LeontiefOperator& op, const FlowField& field,
                                         const InflowSignal& inflow,
                                         double horizon_hint = 100.0);

// Inclusion-semantics variant: same lhs, but the outflow liminf only counts
// links that hold mass. This is the certificate that applies when flow can
// leave empty links.
CertificateReport certify_inclusion(const LeontiefOperator& op, const FlowField& field,
                                    const InflowSignal& inflow, double horizon_hint = 100.0);

// Overload necessity for a local network (every link enters one node, no
// onward routing) under constant inflow: total inflow divided by capacity at
// or above 1 forces divergence. Only rules out stability; certification is
// the normalized certificate's job. Returns not-determined when its
// hypothesis (families whose normalized total flow cannot exceed the
// liminf) is unmet.
CertificateReport check_local_overload(const FlowField& field, const Mat& routing,
                                       const Vec& lambda);

// Algebraic support for weight choice: with positive weights b, if
// sum_i a_i/b_i < min_i c_i/b_i then sum_i a_i/c_i < 1, so capacity weights
// certify whenever any weights do.
struct OptimalityCheck {
  bool premise = false;
  bool conclusion = false;
  double weighted_sum = 0.0;    // sum a_i/b_i
  double min_ratio = 0.0;       // min c_i/b_i
  double normalized_sum = 0.0;  // sum a_i/c_i
};
OptimalityCheck check_weighted_bound_optimality(const Vec& a, const Vec& b, const Vec& c);

struct LyapunovWeights {
  Vec w;
  std::string label;
  static LyapunovWeights uniform(int n);
  // 1/c_i per link; links with infinite capacity get weight 0 so the
  // functional stays finite (they simply do not contribute).
  static LyapunovWeights capacity(const Vec& capacities);
};

// V(x) = w^T (I - R^T)^{-1} x
double lyapunov_value(const LyapunovWeights& weights, const LeontiefOperator& op, const Vec& x);

// dV/dt along the dynamics: w^T (I - R^T)^{-1} lambda - w^T f(x)
double lyapunov_derivative(const LyapunovWeights& weights, const LeontiefOperator& op,
                           const FlowField& field, const Vec& lambda_now, const Vec& x);

}  // namespace flownet
