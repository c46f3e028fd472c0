#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "flownet/types.hpp"

namespace flownet {

// One link's exogenous inflow over time. Values are always nonnegative; the
// sinusoid form is amplitude * (sin(omega t + phase) + 1) so that holds by
// construction. Exact sup and integral are available for every shape, which
// keeps the certificates and runtime bound monitors free of quadrature.
struct LinkSignal {
  enum class Kind { Constant, Sinusoid, Piecewise, ZeroAfter };
  Kind kind = Kind::Constant;

  double level = 0.0;  // Constant

  double amplitude = 0.0;  // Sinusoid
  double omega = 0.0;
  double phase = 0.0;
  bool phase_is_parameter = false;  // targeted by the "phi" override

  std::vector<double> times;   // Piecewise: times[0] == 0, strictly increasing
  std::vector<double> levels;  // level on [times[k], times[k+1]), last holds forever

  std::shared_ptr<const LinkSignal> inner;  // ZeroAfter
  double cutoff = 0.0;                      // signal is inner before cutoff, 0 after

  static LinkSignal constant(double level);
  static LinkSignal sinusoid(double amplitude, double omega, double phase,
                             bool phase_is_parameter = false);
  static LinkSignal piecewise(std::vector<double> times, std::vector<double> levels);
  static LinkSignal zero_after(LinkSignal inner, double cutoff);

  void check() const;  // throws Error(Validation) on bad parameters

  double value_at(double t) const;
  double sup() const { return sup_before(std::numeric_limits<double>::infinity()); }
  double sup_before(double horizon) const;  // sup over [0, horizon)
  double integral(double t) const;          // integral over [0, t]
};

struct InflowSignal {
  std::vector<LinkSignal> links;

  int size() const { return static_cast<int>(links.size()); }
  Vec value(double t) const;
  Vec integral(double t) const;
  Vec per_link_sup() const;
  bool all_constant() const;
  void check() const;
};

struct SupResult {
  double value = 0.0;
  bool analytic = false;
  std::string provenance;
};

// sup over t >= 0 of sum_i g[i] * lambda_i(t), g >= 0. Exact when every link
// is constant or a sinusoid and all sinusoids share one omega (the sinusoid
// part reduces to a single phasor); otherwise a dense grid maximum over
// [0, horizon_hint] is reported as a sampled sup.
SupResult sup_weighted(const InflowSignal& inflow, const Vec& g, double horizon_hint);

}  // namespace flownet
