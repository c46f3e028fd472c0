#include "flownet/graph.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "flownet/error.hpp"

namespace flownet {

std::vector<std::vector<int>> FlowGraph::incoming() const {
  std::vector<std::vector<int>> in(node_names.size());
  for (int i = 0; i < link_count(); ++i) in[links[i].head].push_back(i);
  return in;
}

int FlowGraph::link_index(const std::string& name) const {
  for (int i = 0; i < link_count(); ++i)
    if (links[i].name == name) return i;
  return -1;
}

void FlowGraph::check_structure() const {
  std::set<std::string> seen;
  for (int v = 0; v < node_count(); ++v) {
    if (node_names[v].empty())
      throw Error(ErrorKind::Structural, "node " + std::to_string(v) + " has an empty name");
    if (!seen.insert(node_names[v]).second)
      throw Error(ErrorKind::Structural, "duplicate node name '" + node_names[v] + "'");
  }
  seen.clear();
  for (int i = 0; i < link_count(); ++i) {
    const Link& e = links[i];
    if (e.tail < 0 || e.tail >= node_count() || e.head < 0 || e.head >= node_count())
      throw Error(ErrorKind::Structural,
                  "link " + std::to_string(i) + " has an endpoint outside the node range");
    if (e.tail == e.head)
      throw Error(ErrorKind::Structural, "link '" + e.name + "' is a self-loop");
    if (e.name.empty())
      throw Error(ErrorKind::Structural, "link " + std::to_string(i) + " has an empty name");
    if (!seen.insert(e.name).second)
      throw Error(ErrorKind::Structural, "duplicate link name '" + e.name + "'");
  }
}

SpectralEstimate spectral_radius(const Mat& R, int max_iterations, double tol) {
  const int n = static_cast<int>(R.rows());
  if (n == 0) return {0.0, true, 0};
  Mat shifted = R + 0.5 * Mat::Identity(n, n);
  Vec v = Vec::Constant(n, 1.0 / n);
  double estimate = 0.0;
  for (int k = 1; k <= max_iterations; ++k) {
    Vec u = shifted * v;
    double norm = u.lpNorm<1>();
    if (norm == 0.0) return {0.0, true, k};  // nilpotent in one step
    double next = norm / v.lpNorm<1>();
    u /= norm;
    bool settled = std::abs(next - estimate) < tol * std::max(1.0, next);
    estimate = next;
    v = u;
    if (settled) return {estimate - 0.5, true, k};
  }
  return {estimate - 0.5, false, max_iterations};
}

namespace {

std::string link_label(const FlowGraph& graph, int i) {
  return "link " + std::to_string(i) + " ('" + graph.links[i].name + "')";
}

}  // namespace

ValidationReport validate_network(const FlowGraph& graph, const Mat& routing) {
  graph.check_structure();
  const int m = graph.link_count();
  if (routing.rows() != m || routing.cols() != m) {
    std::ostringstream msg;
    msg << "routing matrix is " << routing.rows() << "x" << routing.cols()
        << " but the graph has " << m << " links";
    throw Error(ErrorKind::Structural, msg.str());
  }

  ValidationReport report;
  constexpr double kEps = 1e-12;

  for (int i = 0; i < m; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < m; ++j) {
      double r = routing(i, j);
      if (!(r >= 0.0 && r <= 1.0)) {
        std::ostringstream d;
        d << "entry (" << i << "," << j << ") = " << r << " outside [0,1]";
        report.violations.push_back({CheckKind::EntryRange, i, j, d.str()});
        continue;
      }
      row_sum += r;
      if (r > 0.0 && graph.links[i].head != graph.links[j].tail) {
        std::ostringstream d;
        d << "entry (" << i << "," << j << ") > 0 but " << link_label(graph, i)
          << " does not end where " << link_label(graph, j) << " starts";
        report.violations.push_back({CheckKind::Topology, i, j, d.str()});
      }
    }
    if (row_sum > 1.0 + kEps) {
      std::ostringstream d;
      d << "row " << i << " (" << graph.links[i].name << ") sums to " << row_sum;
      report.violations.push_back({CheckKind::RowSum, i, -1, d.str()});
    }
  }

  // Outflow connectivity: every link must reach a row-sum deficit by following
  // positive routing entries. Backward sweep from the deficit links.
  if (report.valid()) {
    std::vector<char> reaches(m, 0);
    std::deque<int> queue;
    for (int i = 0; i < m; ++i) {
      if (routing.row(i).sum() < 1.0 - kEps) {
        reaches[i] = 1;
        queue.push_back(i);
      }
    }
    while (!queue.empty()) {
      int j = queue.front();
      queue.pop_front();
      for (int i = 0; i < m; ++i) {
        if (!reaches[i] && routing(i, j) > 0.0) {
          reaches[i] = 1;
          queue.push_back(i);
        }
      }
    }
    for (int i = 0; i < m; ++i) {
      if (!reaches[i]) {
        report.violations.push_back(
            {CheckKind::Connectivity, i, -1,
             link_label(graph, i) + " cannot shed mass: no path to a row-sum deficit"});
      }
    }

    if (report.valid()) {
      SpectralEstimate rho = spectral_radius(routing);
      if (rho.converged && rho.value >= 1.0 - 1e-9) {
        std::ostringstream d;
        d << "spectral radius estimate " << rho.value << " is not below 1";
        report.violations.push_back({CheckKind::Spectral, -1, -1, d.str()});
      }
    }
  }

  return report;
}

std::string ValidationReport::to_text() const {
  if (valid()) return "network validation: OK\n";
  std::ostringstream out;
  out << "network validation: " << violations.size() << " violation(s)\n";
  for (const Violation& v : violations) {
    const char* kind = "?";
    switch (v.kind) {
      case CheckKind::EntryRange: kind = "entry-range"; break;
      case CheckKind::RowSum: kind = "row-sum"; break;
      case CheckKind::Topology: kind = "topology"; break;
      case CheckKind::Connectivity: kind = "connectivity"; break;
      case CheckKind::Spectral: kind = "spectral"; break;
    }
    out << "  [" << kind << "] " << v.detail << "\n";
  }
  return out.str();
}

}  // namespace flownet
