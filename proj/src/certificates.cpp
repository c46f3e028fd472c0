#include "flownet/certificates.hpp"

#include <cmath>
#include <sstream>

#include "flownet/error.hpp"

namespace flownet {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedISS: return "certified-ISS";
    case Verdict::NotCertified: return "not-certified";
    case Verdict::NecessarilyUnstable: return "necessarily-unstable";
    case Verdict::Uncertifiable: return "uncertifiable";
    case Verdict::NotDetermined: return "not-determined";
  }
  return "unknown";
}

namespace {

// Shared body of the three sup-vs-liminf certificates.
CertificateReport compare_sides(const char* condition, const LeontiefOperator& op,
                                const FlowField& field, const InflowSignal& inflow,
                                const Vec& weights, FlowField::LiminfMode mode,
                                bool normalized, double horizon_hint) {
  if (op.size() != field.size() || inflow.size() != field.size())
    throw Error(ErrorKind::Structural,
                "routing, flow field, and inflow must agree on the link count");

  CertificateReport report;
  report.condition = condition;

  SupResult sup = sup_weighted(inflow, op.weighted_column_sums(weights), horizon_hint);
  report.lhs = sup.value;
  report.sup_provenance = sup.provenance;

  LiminfResult liminf = field.liminf_total_flow(mode, normalized);
  report.rhs = liminf.value;
  report.rhs_known = liminf.known;
  report.liminf_provenance = liminf.provenance;
  if (!liminf.known) {
    report.verdict = Verdict::Uncertifiable;
    report.notes.push_back(liminf.breakdown);
    return report;
  }
  report.notes.push_back("outflow liminf: " + liminf.breakdown);
  if (!sup.analytic)
    report.notes.push_back("inflow sup is a grid maximum, not an upper bound; "
                           "treat a thin margin as inconclusive");

  report.verdict = report.lhs < report.rhs ? Verdict::CertifiedISS : Verdict::NotCertified;
  return report;
}

}  // namespace

CertificateReport certify_iss(const LeontiefOperator& op, const FlowField& field,
                              const InflowSignal& inflow, double horizon_hint) {
  Vec ones = Vec::Ones(field.size());
  CertificateReport report = compare_sides("iss-inflow-bound", op, field, inflow, ones,
                                           FlowField::LiminfMode::Smooth, false, horizon_hint);
  if (field.needs_inclusion() && report.verdict != Verdict::Uncertifiable) {
    report.verdict = Verdict::Uncertifiable;
    report.notes.push_back(
        "flow can leave empty links here, so the smooth-dynamics certificate does not "
        "apply; both sides are reported for reference, see the inclusion certificate");
  }
  return report;
}

CertificateReport certify_iss_normalized(const LeontiefOperator& op, const FlowField& field,
                                         const InflowSignal& inflow, double horizon_hint) {
  if (!field.bounded()) {
    CertificateReport report;
    report.condition = "iss-inflow-bound-normalized";
    report.verdict = Verdict::Uncertifiable;
    report.notes.push_back(
        "some link capacity is infinite; capacity normalization is undefined, use the "
        "unnormalized certificate");
    return report;
  }
  Vec caps = field.capacities();
  Vec inv_caps = caps.cwiseInverse();
  CertificateReport report =
      compare_sides("iss-inflow-bound-normalized", op, field, inflow, inv_caps,
                    FlowField::LiminfMode::Smooth, true, horizon_hint);
  if (field.needs_inclusion() && report.verdict != Verdict::Uncertifiable) {
    report.verdict = Verdict::Uncertifiable;
    report.notes.push_back(
        "flow can leave empty links here, so the smooth-dynamics certificate does not "
        "apply; both sides are reported for reference, see the inclusion certificate");
  }
  return report;
}

CertificateReport certify_inclusion(const LeontiefOperator& op, const FlowField& field,
                                    const InflowSignal& inflow, double horizon_hint) {
  Vec ones = Vec::Ones(field.size());
  return compare_sides("iss-inflow-bound-inclusion", op, field, inflow, ones,
                       FlowField::LiminfMode::IndicatorRestricted, false, horizon_hint);
}

CertificateReport check_local_overload(const FlowField& field, const Mat& routing,
                                       const Vec& lambda) {
  CertificateReport report;
  report.condition = "local-overload-necessity";

  const FlowGraph& graph = field.graph();
  if (routing.rows() != field.size() || routing.cols() != field.size())
    throw Error(ErrorKind::Structural, "routing matrix size does not match the link count");
  if (lambda.size() != field.size())
    throw Error(ErrorKind::Structural, "inflow vector length does not match the link count");
  for (int i = 0; i < lambda.size(); ++i)
    if (!(lambda[i] >= 0.0))
      throw Error(ErrorKind::Domain, "inflow must be nonnegative");

  bool local = routing.isZero(0.0);
  int head = graph.links.front().head;
  for (const Link& e : graph.links) local &= (e.head == head);
  if (!local) {
    report.verdict = Verdict::NotDetermined;
    report.notes.push_back(
        "not a local network (links must all enter one node with no onward routing)");
    return report;
  }

  // Hypothesis: the normalized total flow never exceeds the liminf. True for
  // a proportional pool (total < 1 everywhere) and for a single saturating
  // link; a multi-link saturating node violates it (the normalized total
  // approaches the link count), so the necessity argument is unavailable.
  bool all_nodeprop = true;
  bool all_sat = true;
  for (const auto& fam : field.families()) {
    all_nodeprop &= std::holds_alternative<NodeProportional>(fam);
    all_sat &= std::holds_alternative<SaturatingExp>(fam);
  }
  if (!(all_nodeprop || (all_sat && field.size() == 1))) {
    report.verdict = Verdict::NotDetermined;
    report.notes.push_back(
        "hypothesis unmet: needs a proportional pool or a single saturating link so "
        "total normalized outflow stays at or below its liminf");
    return report;
  }

  Vec caps = field.capacities();
  report.lhs = (lambda.array() / caps.array()).sum();
  report.rhs = 1.0;
  report.rhs_known = true;
  report.sup_provenance = "analytic";
  report.liminf_provenance = "analytic";
  if (report.lhs >= 1.0) {
    report.verdict = Verdict::NecessarilyUnstable;
    report.notes.push_back("constant inflow meets or exceeds what the node can pass; "
                           "the state diverges for any initial condition");
  } else {
    report.verdict = Verdict::NotDetermined;
    report.notes.push_back("below the overload threshold; sufficiency is the normalized "
                           "certificate's statement, not this check's");
  }
  return report;
}

OptimalityCheck check_weighted_bound_optimality(const Vec& a, const Vec& b, const Vec& c) {
  if (a.size() != b.size() || a.size() != c.size() || a.size() == 0)
    throw Error(ErrorKind::Structural, "vectors must be nonempty and equally sized");
  for (int i = 0; i < a.size(); ++i) {
    if (!(a[i] >= 0.0)) throw Error(ErrorKind::Domain, "a must be nonnegative");
    if (!(b[i] > 0.0)) throw Error(ErrorKind::Domain, "b must be positive");
    if (!(c[i] > 0.0)) throw Error(ErrorKind::Domain, "c must be positive");
  }
  OptimalityCheck check;
  check.weighted_sum = (a.array() / b.array()).sum();
  check.min_ratio = (c.array() / b.array()).minCoeff();
  check.normalized_sum = (a.array() / c.array()).sum();
  check.premise = check.weighted_sum < check.min_ratio;
  check.conclusion = check.normalized_sum < 1.0;
  return check;
}

LyapunovWeights LyapunovWeights::uniform(int n) {
  return {Vec::Ones(n), "uniform"};
}

LyapunovWeights LyapunovWeights::capacity(const Vec& capacities) {
  Vec w(capacities.size());
  for (int i = 0; i < capacities.size(); ++i)
    w[i] = std::isfinite(capacities[i]) ? 1.0 / capacities[i] : 0.0;
  return {w, "capacity"};
}

double lyapunov_value(const LyapunovWeights& weights, const LeontiefOperator& op, const Vec& x) {
  return weights.w.dot(op.solve(x));
}

double lyapunov_derivative(const LyapunovWeights& weights, const LeontiefOperator& op,
                           const FlowField& field, const Vec& lambda_now, const Vec& x) {
  return op.weighted_column_sums(weights.w).dot(lambda_now) - weights.w.dot(field.eval(x));
}

}  // namespace flownet
