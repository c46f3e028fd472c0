#include "flownet/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "flownet/error.hpp"

namespace flownet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Validation, message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

FlowField::FlowField(const FlowGraph& graph, std::vector<FlowFamily> families)
    : graph_(graph), families_(std::move(families)) {
  graph_.check_structure();
  require(graph_.link_count() >= 1, "flow field needs at least one link");
  require(static_cast<int>(families_.size()) == graph_.link_count(),
          "one flow family per link is required");
  const int m = graph_.link_count();
  node_pool_.assign(m, {});

  for (int i = 0; i < m; ++i) {
    const std::string& name = graph_.links[i].name;
    std::visit(
        [&](auto& fam) {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, SaturatingExp>) {
            require(finite_positive(fam.capacity), "link '" + name + "': capacity must be positive");
          } else if constexpr (std::is_same_v<T, LinearFlow>) {
            require(finite_positive(fam.rate), "link '" + name + "': rate must be positive");
          } else if constexpr (std::is_same_v<T, NodeProportional>) {
            require(finite_positive(fam.kappa), "link '" + name + "': kappa must be positive");
          } else if constexpr (std::is_same_v<T, PhaseProportional>) {
            require(finite_positive(fam.kappa), "link '" + name + "': kappa must be positive");
            std::sort(fam.phase.begin(), fam.phase.end());
            fam.phase.erase(std::unique(fam.phase.begin(), fam.phase.end()), fam.phase.end());
            require(!fam.phase.empty(), "link '" + name + "': phase group is empty");
            for (int j : fam.phase)
              require(j >= 0 && j < m, "link '" + name + "': phase refers to a link outside the graph");
            require(std::binary_search(fam.phase.begin(), fam.phase.end(), i),
                    "link '" + name + "': phase group must contain the link itself");
          } else if constexpr (std::is_same_v<T, CustomFlow>) {
            require(static_cast<bool>(fam.fn), "link '" + name + "': custom flow has no function");
            require(fam.capacity > 0.0, "link '" + name + "': capacity must be positive");
          }
        },
        families_[i]);
  }

  // Node-coupled families share the head node's incoming pool, so that pool
  // must be homogeneous: same family, same kappa, and for phased links a
  // partition of the pool into phase groups.
  auto incoming = graph_.incoming();
  for (int v = 0; v < graph_.node_count(); ++v) {
    const std::vector<int>& pool = incoming[v];
    bool any_coupled = false;
    for (int i : pool)
      any_coupled |= std::holds_alternative<NodeProportional>(families_[i]) ||
                     std::holds_alternative<PhaseProportional>(families_[i]);
    if (!any_coupled) continue;

    const std::string node = graph_.node_names[v];
    size_t kind = families_[pool.front()].index();
    double kappa = -1.0;
    for (int i : pool) {
      require(families_[i].index() == kind,
              "node '" + node + "': all incoming links must share one family when a "
              "node-coupled family is used");
      double k = std::holds_alternative<NodeProportional>(families_[i])
                     ? std::get<NodeProportional>(families_[i]).kappa
                     : std::get<PhaseProportional>(families_[i]).kappa;
      if (kappa < 0.0) kappa = k;
      require(k == kappa, "node '" + node + "': kappa differs between incoming links");
    }

    CoupledNode cn;
    cn.node = v;
    cn.pool = pool;
    cn.phased = std::holds_alternative<PhaseProportional>(families_[pool.front()]);
    if (cn.phased) {
      std::set<int> covered;
      for (int i : pool) {
        const auto& ph = std::get<PhaseProportional>(families_[i]).phase;
        for (int j : ph) {
          require(graph_.links[j].head == v,
                  "link '" + graph_.links[i].name + "': phase group crosses node boundaries");
          require(std::get<PhaseProportional>(families_[j]).phase == ph,
                  "node '" + node + "': phase groups of its links disagree");
        }
        if (ph.front() == i) {  // record each group once, keyed by its smallest member
          cn.phase_groups.push_back(ph);
          for (int j : ph) require(covered.insert(j).second, "node '" + node + "': phase groups overlap");
        }
      }
      require(covered.size() == pool.size(),
              "node '" + node + "': phase groups do not cover all incoming links");
    }
    for (int i : pool) node_pool_[i] = pool;
    coupled_nodes_.push_back(std::move(cn));
  }

  for (int i = 0; i < m; ++i) {
    if (std::holds_alternative<SaturatingExp>(families_[i])) sat_links_.push_back(i);
    if (std::holds_alternative<LinearFlow>(families_[i])) linear_links_.push_back(i);
    if (std::holds_alternative<CustomFlow>(families_[i])) custom_links_.push_back(i);
  }
}

Vec FlowField::eval(const Vec& x) const {
  if (x.size() != size())
    throw Error(ErrorKind::Structural, "state length does not match the link count");
  for (int i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0)) {
      std::ostringstream msg;
      msg << "state must be nonnegative; entry " << i << " is " << x[i];
      throw Error(ErrorKind::Domain, msg.str());
    }
  }

  Vec f = Vec::Zero(size());
  for (int i : sat_links_) {
    double c = std::get<SaturatingExp>(families_[i]).capacity;
    f[i] = c * (1.0 - std::exp(-x[i]));
  }
  for (int i : linear_links_) f[i] = std::get<LinearFlow>(families_[i]).rate * x[i];
  for (int i : custom_links_) f[i] = std::get<CustomFlow>(families_[i]).fn(x);

  for (const CoupledNode& cn : coupled_nodes_) {
    double pool_sum = 0.0;
    for (int i : cn.pool) pool_sum += x[i];
    if (!cn.phased) {
      double kappa = std::get<NodeProportional>(families_[cn.pool.front()]).kappa;
      for (int i : cn.pool) f[i] = x[i] / (pool_sum + kappa);
    } else {
      double kappa = std::get<PhaseProportional>(families_[cn.pool.front()]).kappa;
      for (const std::vector<int>& group : cn.phase_groups) {
        double group_sum = 0.0;
        for (int j : group) group_sum += x[j];
        for (int j : group) f[j] = group_sum / (pool_sum + kappa);
      }
    }
  }
  return f;
}

Vec FlowField::capacities() const {
  Vec c(size());
  for (int i = 0; i < size(); ++i) {
    std::visit(
        [&](const auto& fam) {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, SaturatingExp>) c[i] = fam.capacity;
          else if constexpr (std::is_same_v<T, LinearFlow>) c[i] = kInf;
          else if constexpr (std::is_same_v<T, CustomFlow>) c[i] = fam.capacity;
          else c[i] = 1.0;  // proportional families never exceed their pool share
        },
        families_[i]);
  }
  return c;
}

bool FlowField::bounded() const {
  Vec c = capacities();
  for (int i = 0; i < c.size(); ++i)
    if (!std::isfinite(c[i])) return false;
  return true;
}

bool FlowField::needs_inclusion() const {
  for (const auto& fam : families_)
    if (std::holds_alternative<PhaseProportional>(fam)) return true;
  return false;
}

bool FlowField::flow_vanishes_iff_empty() const {
  for (const auto& fam : families_) {
    if (std::holds_alternative<PhaseProportional>(fam)) return false;
    if (const auto* cf = std::get_if<CustomFlow>(&fam); cf && !cf->vanishes_iff_empty)
      return false;
  }
  return true;
}

bool FlowField::has_custom() const { return !custom_links_.empty(); }

LiminfResult FlowField::liminf_total_flow(LiminfMode mode, bool normalized) const {
  if (normalized && !bounded())
    throw Error(ErrorKind::Structural,
                "capacity-normalized liminf requires every link capacity to be finite");

  LiminfResult result;
  if (has_custom()) {
    result.value = std::numeric_limits<double>::quiet_NaN();
    result.known = false;
    result.provenance = "unknown";
    result.breakdown = "link '" + graph_.links[custom_links_.front()].name +
                       "' uses a custom flow family; the total-flow liminf is not derivable";
    return result;
  }

  std::ostringstream breakdown;
  double total = 0.0;
  int contributions = 0;

  for (const CoupledNode& cn : coupled_nodes_) {
    double part;
    if (!cn.phased) {
      part = 1.0;
      breakdown << "node '" << graph_.node_names[cn.node] << "' (proportional pool): 1; ";
    } else if (mode == LiminfMode::IndicatorRestricted) {
      part = 1.0;
      breakdown << "node '" << graph_.node_names[cn.node] << "' (phased pool, occupied links only): 1; ";
    } else {
      size_t smallest = SIZE_MAX;
      for (const auto& g : cn.phase_groups) smallest = std::min(smallest, g.size());
      part = static_cast<double>(smallest);
      breakdown << "node '" << graph_.node_names[cn.node] << "' (phased pool, smallest group): "
                << part << "; ";
    }
    total += part;
    ++contributions;
  }

  if (!sat_links_.empty()) {
    double min_cap = kInf;
    for (int i : sat_links_) min_cap = std::min(min_cap, std::get<SaturatingExp>(families_[i]).capacity);
    double part = normalized ? 1.0 : min_cap;
    breakdown << "saturating links (weakest): " << part << "; ";
    total += part;
    ++contributions;
  }

  if (contributions == 0) {
    // Only unbounded-along-own-ray links remain; total flow diverges with the state.
    result.value = kInf;
    result.provenance = "analytic";
    result.breakdown = "all links unbounded along their own ray: +inf";
    result.probe = liminf_probe(mode, normalized, 1e6);
    return result;
  }

  if (!linear_links_.empty()) breakdown << "linear links: no finite contribution; ";

  result.value = total;
  result.provenance = "analytic";
  result.breakdown = breakdown.str() + "total: " + std::to_string(total);
  result.probe = liminf_probe(mode, normalized, 1e6);
  return result;
}

double FlowField::liminf_probe(LiminfMode mode, bool normalized, double scale) const {
  Vec caps = capacities();
  double total = 0.0;
  bool contributed = false;

  for (const CoupledNode& cn : coupled_nodes_) {
    Vec x = Vec::Zero(size());
    std::vector<int> support;
    if (!cn.phased) {
      support = cn.pool;
    } else {
      const std::vector<int>* smallest = &cn.phase_groups.front();
      for (const auto& g : cn.phase_groups)
        if (g.size() < smallest->size()) smallest = &g;
      if (mode == LiminfMode::IndicatorRestricted)
        support = {smallest->front()};
      else
        support = *smallest;
    }
    for (int i : support) x[i] = scale;
    Vec f = eval(x);
    double part = 0.0;
    for (int i : cn.pool) {
      if (mode == LiminfMode::IndicatorRestricted && x[i] <= 0.0) continue;
      part += f[i];  // pool capacities are 1, normalization changes nothing
    }
    total += part;
    contributed = true;
  }

  if (!sat_links_.empty()) {
    double weakest = kInf;
    for (int i : sat_links_) {
      Vec x = Vec::Zero(size());
      x[i] = scale;
      double f = eval(x)[i];
      weakest = std::min(weakest, normalized ? f / caps[i] : f);
    }
    total += weakest;
    contributed = true;
  }

  if (!contributed && !linear_links_.empty()) {
    double weakest = kInf;
    for (int i : linear_links_)
      weakest = std::min(weakest, std::get<LinearFlow>(families_[i]).rate * scale);
    total = weakest;
  }
  return total;
}

OccupancyReport FlowField::check_flow_occupancy(const std::vector<Vec>& samples,
                                                double tol) const {
  OccupancyReport report;
  for (const Vec& x : samples) {
    Vec f = eval(x);
    int k = report.samples_checked++;
    for (int i = 0; i < size(); ++i) {
      std::ostringstream issue;
      if (x[i] <= tol && f[i] > tol) {
        issue << "sample " << k << ": link '" << graph_.links[i].name << "' flows (f=" << f[i]
              << ") while empty (x=" << x[i] << ")";
      } else if (x[i] > 1e-3 && f[i] <= tol) {
        issue << "sample " << k << ": link '" << graph_.links[i].name << "' is occupied (x="
              << x[i] << ") but flowless (f=" << f[i] << ")";
      } else {
        continue;
      }
      if (report.issues.size() < 20) report.issues.push_back(issue.str());
    }
  }
  return report;
}

std::string OccupancyReport::to_text() const {
  std::ostringstream out;
  out << "flow/occupancy sweep over " << samples_checked << " state(s): ";
  if (clean()) {
    out << "consistent\n";
    return out.str();
  }
  out << issues.size() << " issue(s)\n";
  for (const std::string& s : issues) out << "  " << s << "\n";
  return out.str();
}

}  // namespace flownet
