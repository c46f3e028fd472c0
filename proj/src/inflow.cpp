#include "flownet/inflow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "flownet/error.hpp"

namespace flownet {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Validation, message);
}

}  // namespace

LinkSignal LinkSignal::constant(double level) {
  LinkSignal s;
  s.kind = Kind::Constant;
  s.level = level;
  s.check();
  return s;
}

LinkSignal LinkSignal::sinusoid(double amplitude, double omega, double phase,
                                bool phase_is_parameter) {
  LinkSignal s;
  s.kind = Kind::Sinusoid;
  s.amplitude = amplitude;
  s.omega = omega;
  s.phase = phase;
  s.phase_is_parameter = phase_is_parameter;
  s.check();
  return s;
}

LinkSignal LinkSignal::piecewise(std::vector<double> times, std::vector<double> levels) {
  LinkSignal s;
  s.kind = Kind::Piecewise;
  s.times = std::move(times);
  s.levels = std::move(levels);
  s.check();
  return s;
}

LinkSignal LinkSignal::zero_after(LinkSignal inner_signal, double cutoff) {
  LinkSignal s;
  s.kind = Kind::ZeroAfter;
  s.inner = std::make_shared<const LinkSignal>(std::move(inner_signal));
  s.cutoff = cutoff;
  s.check();
  return s;
}

void LinkSignal::check() const {
  switch (kind) {
    case Kind::Constant:
      require(std::isfinite(level) && level >= 0.0, "constant inflow must be finite and nonnegative");
      break;
    case Kind::Sinusoid:
      require(std::isfinite(amplitude) && amplitude >= 0.0, "sinusoid amplitude must be nonnegative");
      require(std::isfinite(omega) && omega > 0.0, "sinusoid omega must be positive");
      require(std::isfinite(phase), "sinusoid phase must be finite");
      break;
    case Kind::Piecewise: {
      require(!times.empty() && times.size() == levels.size(),
              "piecewise inflow needs matching, nonempty times and levels");
      require(times.front() == 0.0, "piecewise inflow must start at time 0");
      for (size_t k = 0; k < times.size(); ++k) {
        require(std::isfinite(times[k]), "piecewise times must be finite");
        if (k > 0) require(times[k] > times[k - 1], "piecewise times must be strictly increasing");
        require(std::isfinite(levels[k]) && levels[k] >= 0.0,
                "piecewise levels must be finite and nonnegative");
      }
      break;
    }
    case Kind::ZeroAfter:
      require(static_cast<bool>(inner), "zero-after inflow has no inner signal");
      require(std::isfinite(cutoff) && cutoff >= 0.0, "zero-after cutoff must be nonnegative");
      inner->check();
      break;
  }
}

double LinkSignal::value_at(double t) const {
  switch (kind) {
    case Kind::Constant:
      return level;
    case Kind::Sinusoid:
      return amplitude * (std::sin(omega * t + phase) + 1.0);
    case Kind::Piecewise: {
      auto it = std::upper_bound(times.begin(), times.end(), t);
      size_t k = (it == times.begin()) ? 0 : static_cast<size_t>(it - times.begin()) - 1;
      return levels[k];
    }
    case Kind::ZeroAfter:
      return t < cutoff ? inner->value_at(t) : 0.0;
  }
  return 0.0;
}

double LinkSignal::sup_before(double horizon) const {
  if (horizon <= 0.0) return 0.0;
  switch (kind) {
    case Kind::Constant:
      return level;
    case Kind::Sinusoid: {
      if (!std::isfinite(horizon)) return 2.0 * amplitude;
      double period = 2.0 * kPi / omega;
      double first_peak = (kPi / 2.0 - phase) / omega;
      if (first_peak < 0.0) first_peak += period * std::ceil(-first_peak / period);
      if (first_peak <= horizon) return 2.0 * amplitude;
      return std::max(value_at(0.0), value_at(horizon));
    }
    case Kind::Piecewise: {
      double best = 0.0;
      for (size_t k = 0; k < times.size(); ++k)
        if (times[k] < horizon) best = std::max(best, levels[k]);
      return best;
    }
    case Kind::ZeroAfter:
      return inner->sup_before(std::min(horizon, cutoff));
  }
  return 0.0;
}

double LinkSignal::integral(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind) {
    case Kind::Constant:
      return level * t;
    case Kind::Sinusoid:
      return amplitude * (t + (std::cos(phase) - std::cos(omega * t + phase)) / omega);
    case Kind::Piecewise: {
      double acc = 0.0;
      for (size_t k = 0; k < times.size(); ++k) {
        double seg_end = (k + 1 < times.size()) ? std::min(times[k + 1], t) : t;
        if (seg_end <= times[k]) break;
        acc += levels[k] * (seg_end - times[k]);
      }
      return acc;
    }
    case Kind::ZeroAfter:
      return inner->integral(std::min(t, cutoff));
  }
  return 0.0;
}

Vec InflowSignal::value(double t) const {
  Vec v(size());
  for (int i = 0; i < size(); ++i) v[i] = links[i].value_at(t);
  return v;
}

Vec InflowSignal::integral(double t) const {
  Vec v(size());
  for (int i = 0; i < size(); ++i) v[i] = links[i].integral(t);
  return v;
}

Vec InflowSignal::per_link_sup() const {
  Vec v(size());
  for (int i = 0; i < size(); ++i) v[i] = links[i].sup();
  return v;
}

bool InflowSignal::all_constant() const {
  for (const LinkSignal& s : links)
    if (s.kind != LinkSignal::Kind::Constant) return false;
  return true;
}

void InflowSignal::check() const {
  for (const LinkSignal& s : links) s.check();
}

SupResult sup_weighted(const InflowSignal& inflow, const Vec& g, double horizon_hint) {
  if (g.size() != inflow.size())
    throw Error(ErrorKind::Structural, "weight length does not match the inflow length");
  for (int i = 0; i < g.size(); ++i)
    if (!(g[i] >= 0.0))
      throw Error(ErrorKind::Domain, "sup weights must be nonnegative");

  bool analytic = true;
  double shared_omega = 0.0;
  for (const LinkSignal& s : inflow.links) {
    if (s.kind == LinkSignal::Kind::Constant) continue;
    if (s.kind != LinkSignal::Kind::Sinusoid) {
      analytic = false;
      break;
    }
    if (shared_omega == 0.0) shared_omega = s.omega;
    if (s.omega != shared_omega) {
      analytic = false;
      break;
    }
  }

  SupResult result;
  if (analytic) {
    // Constants add up; same-frequency sinusoids combine into one phasor whose
    // magnitude is attained (sup over t >= 0 covers a full period).
    double offset = 0.0;
    std::complex<double> phasor(0.0, 0.0);
    for (int i = 0; i < inflow.size(); ++i) {
      const LinkSignal& s = inflow.links[i];
      if (s.kind == LinkSignal::Kind::Constant) {
        offset += g[i] * s.level;
      } else {
        offset += g[i] * s.amplitude;
        phasor += g[i] * s.amplitude * std::polar(1.0, s.phase);
      }
    }
    result.value = offset + std::abs(phasor);
    result.analytic = true;
    result.provenance = "analytic";
    return result;
  }

  double horizon = std::max(horizon_hint, 1.0);
  for (const LinkSignal& s : inflow.links) {
    if (s.kind == LinkSignal::Kind::Piecewise) horizon = std::max(horizon, s.times.back() + 1.0);
    if (s.kind == LinkSignal::Kind::ZeroAfter) horizon = std::max(horizon, s.cutoff + 1.0);
    if (s.kind == LinkSignal::Kind::Sinusoid) horizon = std::max(horizon, 6.0 * kPi / s.omega);
  }
  const int n_samples = 10000;
  double best = 0.0;
  for (int k = 0; k <= n_samples; ++k) {
    double t = horizon * k / n_samples;
    best = std::max(best, g.dot(inflow.value(t)));
  }
  result.value = best;
  result.analytic = false;
  std::ostringstream prov;
  prov << "sampled (" << (n_samples + 1) << " points over [0, " << horizon << "])";
  result.provenance = prov.str();
  return result;
}

}  // namespace flownet
