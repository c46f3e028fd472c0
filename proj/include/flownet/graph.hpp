#pragma once

#include <string>
#include <vector>

#include "flownet/types.hpp"

namespace flownet {

// Directed multigraph; links are the state-carrying cells. Parallel links and
// multiple links between the same node pair are allowed, self-loops are not.
struct Link {
  int tail = -1;
  int head = -1;
  std::string name;
};

struct FlowGraph {
  std::vector<std::string> node_names;
  std::vector<Link> links;

  int node_count() const { return static_cast<int>(node_names.size()); }
  int link_count() const { return static_cast<int>(links.size()); }

  // incoming()[v] lists the link ids with head v (the set E_v).
  std::vector<std::vector<int>> incoming() const;
  int link_index(const std::string& name) const;  // -1 if absent

  // Throws Error(Structural) on out-of-range endpoints, self-loops,
  // duplicate or empty link/node names.
  void check_structure() const;
};

enum class CheckKind { EntryRange, RowSum, Topology, Connectivity, Spectral };

struct Violation {
  CheckKind kind;
  int i = -1;  // link row (or -1)
  int j = -1;  // link column (or -1)
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string to_text() const;
};

struct SpectralEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Power iteration on R + 0.5 I (the shift separates moduli when eigenvalues
// of equal magnitude exist; the Perron root just shifts by 0.5).
SpectralEstimate spectral_radius(const Mat& R, int max_iterations = 20000,
                                 double tol = 1e-12);

// Checks that R is a valid routing matrix over the graph: entries in [0,1],
// row sums <= 1, R[i][j] > 0 only where head(i) == tail(j), and from every
// link some row-sum deficit is reachable through the routing (which is
// equivalent to spectral radius < 1). Dimension mismatch throws
// Error(Structural); everything else is reported, not thrown.
ValidationReport validate_network(const FlowGraph& graph, const Mat& routing);

}  // namespace flownet
