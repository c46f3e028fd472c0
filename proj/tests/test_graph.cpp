#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "flownet/error.hpp"
#include "flownet/graph.hpp"
#include "helpers.hpp"

using namespace flownet;
using testutil::make_graph;

TEST_CASE("incoming sets and link lookup") {
  FlowGraph g = testutil::two_stage_graph();
  auto in = g.incoming();
  REQUIRE(in.size() == 3);
  CHECK(in[0].empty());
  CHECK(in[1] == std::vector<int>{0, 1});
  CHECK(in[2] == std::vector<int>{2, 3});
  CHECK(g.link_index("e3") == 2);
  CHECK(g.link_index("nope") == -1);
}

TEST_CASE("structural checks reject malformed graphs") {
  FlowGraph ok = testutil::two_link_cycle_graph();
  CHECK_NOTHROW(ok.check_structure());

  FlowGraph self_loop = make_graph({"a", "b"}, {{0, 0}});
  CHECK_THROWS_KIND(self_loop.check_structure(), ErrorKind::Structural);

  FlowGraph bad_endpoint = make_graph({"a", "b"}, {{0, 2}});
  CHECK_THROWS_KIND(bad_endpoint.check_structure(), ErrorKind::Structural);

  FlowGraph dup_link = make_graph({"a", "b"}, {{0, 1}, {1, 0}});
  dup_link.links[1].name = dup_link.links[0].name;
  CHECK_THROWS_KIND(dup_link.check_structure(), ErrorKind::Structural);

  FlowGraph empty_name = make_graph({"a", "b"}, {{0, 1}});
  empty_name.links[0].name.clear();
  CHECK_THROWS_KIND(empty_name.check_structure(), ErrorKind::Structural);

  FlowGraph dup_node = make_graph({"a", "a"}, {{0, 1}});
  CHECK_THROWS_KIND(dup_node.check_structure(), ErrorKind::Structural);
}

TEST_CASE("spectral radius on known matrices") {
  SpectralEstimate zero = spectral_radius(Mat::Zero(3, 3));
  CHECK(zero.converged);
  CHECK(zero.value == doctest::Approx(0.0).epsilon(1e-12));

  // Cycle with gains 0.9 and 1.0: radius sqrt(0.9).
  SpectralEstimate cyc = spectral_radius(testutil::two_link_cycle_routing());
  CHECK(cyc.converged);
  CHECK(cyc.value == doctest::Approx(std::sqrt(0.9)).epsilon(1e-9));

  // Stochastic 2-cycle has eigenvalues +1 and -1; the 0.5 shift separates
  // them, so the iteration settles at 1.
  Mat stoch(2, 2);
  stoch << 0.0, 1.0, 1.0, 0.0;
  SpectralEstimate unit = spectral_radius(stoch);
  CHECK(unit.converged);
  CHECK(unit.value == doctest::Approx(1.0).epsilon(1e-9));

  // Nilpotent matrices have no dominant eigenvalue ratio, so the iteration
  // may not converge, but the estimate must still be far below 1.
  SpectralEstimate nil = spectral_radius(testutil::two_stage_routing());
  CHECK(nil.value < 0.01);
}

TEST_CASE("validate_network accepts the bundled cycle") {
  FlowGraph g = testutil::two_link_cycle_graph();
  ValidationReport report = validate_network(g, testutil::two_link_cycle_routing());
  CHECK(report.valid());
  CHECK(report.to_text() == "network validation: OK\n");
}

TEST_CASE("validate_network reports each violation class") {
  FlowGraph g = testutil::two_link_cycle_graph();

  SUBCASE("entry out of range") {
    Mat r(2, 2);
    r << 0.0, -0.1, 1.2, 0.0;
    ValidationReport report = validate_network(g, r);
    REQUIRE_FALSE(report.valid());
    bool saw_range = false;
    for (const auto& v : report.violations) saw_range |= v.kind == CheckKind::EntryRange;
    CHECK(saw_range);
  }

  SUBCASE("row sum above one") {
    // Two parallel outgoing links so the row can exceed 1 while every entry
    // stays within [0,1] (out-of-range entries are reported separately and
    // excluded from the sum).
    FlowGraph fork = make_graph({"a", "b", "c"}, {{0, 1}, {1, 2}, {1, 2}});
    Mat r = Mat::Zero(3, 3);
    r(0, 1) = 0.7;
    r(0, 2) = 0.7;
    ValidationReport report = validate_network(fork, r);
    REQUIRE_FALSE(report.valid());
    bool saw_rowsum = false;
    for (const auto& v : report.violations) saw_rowsum |= v.kind == CheckKind::RowSum;
    CHECK(saw_rowsum);
  }

  SUBCASE("mass sent to a link that does not start where this one ends") {
    FlowGraph chain = make_graph({"a", "b", "c"}, {{0, 1}, {1, 2}});
    Mat r = Mat::Zero(2, 2);
    r(1, 0) = 0.5;  // e2 ends at c, e1 starts at a
    ValidationReport report = validate_network(chain, r);
    REQUIRE_FALSE(report.valid());
    CHECK(report.violations[0].kind == CheckKind::Topology);
    CHECK(report.violations[0].i == 1);
    CHECK(report.violations[0].j == 0);
  }

  SUBCASE("closed cycle with no outflow deficit") {
    Mat r(2, 2);
    r << 0.0, 1.0, 1.0, 0.0;
    ValidationReport report = validate_network(g, r);
    REQUIRE_FALSE(report.valid());
    bool saw_connectivity = false;
    for (const auto& v : report.violations)
      saw_connectivity |= v.kind == CheckKind::Connectivity || v.kind == CheckKind::Spectral;
    CHECK(saw_connectivity);
    CHECK(report.to_text().find("violation") != std::string::npos);
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_KIND(validate_network(g, Mat::Zero(3, 3)), ErrorKind::Structural);
  }
}

namespace {

struct RandomCase {
  FlowGraph graph;
  Mat routing;
};

// Random multigraph plus a nonnegative routing supported on head(i)==tail(j),
// rows scaled to the requested sums.
RandomCase random_case(std::mt19937& rng, double min_row_sum, double max_row_sum) {
  std::uniform_int_distribution<int> node_count(2, 5);
  int n = node_count(rng);
  std::vector<std::string> nodes;
  for (int v = 0; v < n; ++v) nodes.push_back("n" + std::to_string(v));

  std::uniform_int_distribution<int> link_count(1, 10);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::pair<int, int>> edges;
  int m = link_count(rng);
  for (int i = 0; i < m; ++i) {
    int tail = pick(rng);
    int head = pick(rng);
    if (head == tail) head = (head + 1) % n;
    edges.emplace_back(tail, head);
  }

  RandomCase out;
  out.graph = make_graph(nodes, edges);
  out.routing = Mat::Zero(m, m);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::uniform_real_distribution<double> row_sum(min_row_sum, max_row_sum);
  for (int i = 0; i < m; ++i) {
    double total = 0.0;
    for (int j = 0; j < m; ++j)
      if (out.graph.links[i].head == out.graph.links[j].tail) {
        out.routing(i, j) = weight(rng);
        total += out.routing(i, j);
      }
    if (total > 0.0) out.routing.row(i) *= row_sum(rng) / total;
  }
  return out;
}

}  // namespace

TEST_CASE("random strictly substochastic routings validate and have radius below one") {
  std::mt19937 rng(91);
  for (int trial = 0; trial < 200; ++trial) {
    RandomCase c = random_case(rng, 0.3, 0.95);
    ValidationReport report = validate_network(c.graph, c.routing);
    CHECK_MESSAGE(report.valid(), "trial ", trial, ": ", report.to_text());
    SpectralEstimate rho = spectral_radius(c.routing);
    CHECK_MESSAGE(rho.value < 1.0 - 1e-9, "trial ", trial, " estimate ", rho.value);
  }
}

TEST_CASE("row sums pinned at one on a closed cycle are rejected") {
  // Ring of n nodes, one link per node, every row sum exactly 1: the routing
  // keeps all mass forever, the radius is 1, and validation must fail.
  for (int n : {2, 3, 5}) {
    std::vector<std::string> nodes;
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n; ++v) {
      nodes.push_back("n" + std::to_string(v));
      edges.emplace_back(v, (v + 1) % n);
    }
    FlowGraph g = make_graph(nodes, edges);
    Mat r = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) r(i, (i + 1) % n) = 1.0;
    ValidationReport report = validate_network(g, r);
    CHECK_FALSE(report.valid());
    SpectralEstimate rho = spectral_radius(r);
    CHECK(rho.converged);
    CHECK(rho.value == doctest::Approx(1.0).epsilon(1e-9));
  }
}
