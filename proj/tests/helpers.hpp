#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flownet/error.hpp"
#include "flownet/graph.hpp"
#include "flownet/types.hpp"

// Asserts that evaluating `expr` throws flownet::Error with the given kind.
#define CHECK_THROWS_KIND(expr, expected_kind)                                  \
  do {                                                                          \
    bool caught_flownet_error = false;                                          \
    try {                                                                       \
      (void)(expr);                                                             \
    } catch (const flownet::Error& e) {                                         \
      caught_flownet_error = true;                                              \
      CHECK_MESSAGE(e.kind() == (expected_kind),                                \
                    #expr, " threw kind '", flownet::to_string(e.kind()),       \
                    "' with message: ", e.what());                              \
    }                                                                           \
    CHECK_MESSAGE(caught_flownet_error, #expr " did not throw flownet::Error"); \
  } while (0)

namespace testutil {

inline flownet::FlowGraph make_graph(std::vector<std::string> nodes,
                                     std::vector<std::pair<int, int>> edges) {
  flownet::FlowGraph g;
  g.node_names = std::move(nodes);
  for (size_t k = 0; k < edges.size(); ++k) {
    flownet::Link link;
    link.tail = edges[k].first;
    link.head = edges[k].second;
    link.name = "e" + std::to_string(k + 1);
    g.links.push_back(link);
  }
  return g;
}

// Two links forming a cycle: e1 a->b, e2 b->a, routing [[0, 0.9], [1, 0]].
inline flownet::FlowGraph two_link_cycle_graph() {
  return make_graph({"a", "b"}, {{0, 1}, {1, 0}});
}

inline flownet::Mat two_link_cycle_routing() {
  flownet::Mat r(2, 2);
  r << 0.0, 0.9, 1.0, 0.0;
  return r;
}

// Four parallel-pair links over three nodes in a line: e1, e2 from v1 to v2
// and e3, e4 from v2 to v3. Mass from e1 splits evenly onto e3 and e4; mass
// from e2 continues on e4 only. Nilpotent routing (no cycles).
inline flownet::FlowGraph two_stage_graph() {
  return make_graph({"v1", "v2", "v3"}, {{0, 1}, {0, 1}, {1, 2}, {1, 2}});
}

inline flownet::Mat two_stage_routing() {
  flownet::Mat r = flownet::Mat::Zero(4, 4);
  r(0, 2) = 0.5;
  r(0, 3) = 0.5;
  r(1, 3) = 1.0;
  return r;
}

inline flownet::Vec vec(std::initializer_list<double> values) {
  flownet::Vec v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace testutil
