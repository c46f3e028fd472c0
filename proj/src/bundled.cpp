#include <string>
#include <vector>

#include "flownet/error.hpp"
#include "flownet/scenario.hpp"

namespace flownet {

namespace {

const char* kExample1 = R"json({
  "schema_version": 1,
  "name": "example1",
  "notes": "Two links in a cycle with capacities 1 and 100. The cycle multiplies demand, so the inflow-bound certificate compares sup(19*l1 + 20*l2) against 1 and the capacity-normalized variant compares sup(10.09*l1 + 10.1*l2) against 1. The shortcut (l1 + l2) * (1/c1 + 1/c2) < 1 ignores that amplification and is not equivalent. At l1 = l2 = 0.02 both certificates hold. The capacity 100 concretizes 'much larger than 1'; dt = 0.001 and horizon 100 are choices of this bundle.",
  "nodes": ["a", "b"],
  "links": [
    {"name": "e1", "tail": "a", "head": "b"},
    {"name": "e2", "tail": "b", "head": "a"}
  ],
  "flows": [
    {"family": "saturating_exp", "capacity": 1.0},
    {"family": "saturating_exp", "capacity": 100.0}
  ],
  "routing": [
    [0.0, 0.9],
    [1.0, 0.0]
  ],
  "inflow": [
    {"kind": "constant", "level": 0.02},
    {"kind": "constant", "level": 0.02}
  ],
  "initial_state": [0.0, 0.0],
  "sim": {"dt": 0.001, "horizon": 100.0, "mode": "smooth"}
})json";

const char* kLocalNode = R"json({
  "schema_version": 1,
  "name": "local-node",
  "notes": "Three constant sources feed one junction whose outflows share a unit-capacity proportional pool. For this shape the inflow bound is tight in both directions: total demand 1.2 versus pool capacity 1 makes the queues grow without bound, while lowering every inflow to 0.3 gives total demand 0.9 and the state settles at x = 3 per link. kappa = 1 and horizon 300 are choices of this bundle.",
  "nodes": ["s1", "s2", "s3", "v"],
  "links": [
    {"name": "l1", "tail": "s1", "head": "v"},
    {"name": "l2", "tail": "s2", "head": "v"},
    {"name": "l3", "tail": "s3", "head": "v"}
  ],
  "flows": [
    {"family": "node_proportional", "kappa": 1.0},
    {"family": "node_proportional", "kappa": 1.0},
    {"family": "node_proportional", "kappa": 1.0}
  ],
  "routing": [
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0]
  ],
  "inflow": [
    {"kind": "constant", "level": 0.5},
    {"kind": "constant", "level": 0.4},
    {"kind": "constant", "level": 0.3}
  ],
  "initial_state": [0.0, 0.0, 0.0],
  "sim": {"dt": 0.001, "horizon": 300.0, "mode": "smooth"}
})json";

const char* kJunction = R"json({
  "schema_version": 1,
  "name": "junction",
  "notes": "Four approaches meet at one junction and are served in two phases: e1 with e3, e2 with e4. Each link's outflow tracks its whole phase, f_i = (phase mass) / (node mass + kappa) with kappa = 0.1, so an empty link can be offered flow whenever its phase partner is occupied. That breaks the smooth model; in inclusion mode the solver caps what actually leaves an empty link at what arrives. With l1 = 1.9 the loaded approach diverges even though the smooth accounting would have accepted it (1.9 < 2); the inclusion-aware bound 1 correctly refuses. Lowering l1 to 0.5 settles at x1 = 0.1. kappa = 0.1 is this bundle's concrete choice for the positive offset, as are dt and the horizon.",
  "nodes": ["n1", "n2", "n3", "n4", "c"],
  "links": [
    {"name": "e1", "tail": "n1", "head": "c"},
    {"name": "e2", "tail": "n2", "head": "c"},
    {"name": "e3", "tail": "n3", "head": "c"},
    {"name": "e4", "tail": "n4", "head": "c"}
  ],
  "flows": [
    {"family": "phase_proportional", "kappa": 0.1, "phase": ["e1", "e3"]},
    {"family": "phase_proportional", "kappa": 0.1, "phase": ["e2", "e4"]},
    {"family": "phase_proportional", "kappa": 0.1, "phase": ["e1", "e3"]},
    {"family": "phase_proportional", "kappa": 0.1, "phase": ["e2", "e4"]}
  ],
  "routing": [
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0]
  ],
  "inflow": [
    {"kind": "constant", "level": 1.9},
    {"kind": "constant", "level": 0.0},
    {"kind": "constant", "level": 0.0},
    {"kind": "constant", "level": 0.0}
  ],
  "initial_state": [0.0, 0.0, 0.0, 0.0],
  "sim": {"dt": 0.001, "horizon": 200.0, "mode": "inclusion"}
})json";

const char* kTimeVarying = R"json({
  "schema_version": 1,
  "name": "timevarying",
  "notes": "Two parallel links feed a middle node that splits onto two more parallel links; both stages drain through proportional pools. The inflows on e1 and e2 are sinusoids A * (sin(t + phi) + 1); e2's phase is the sweep parameter phi. The certificate weighs both sources by 2, so in phase (phi = 0) the peaks add and boundedness is certified exactly for A < 0.25, while in antiphase (phi = pi) the oscillations cancel and the threshold doubles to A < 0.5. Between the two thresholds the trajectory is bounded but carries no certificate. kappa = 1, dt = 0.001, and horizon 200 are choices of this bundle.",
  "nodes": ["v1", "v2", "v3"],
  "links": [
    {"name": "e1", "tail": "v1", "head": "v2"},
    {"name": "e2", "tail": "v1", "head": "v2"},
    {"name": "e3", "tail": "v2", "head": "v3"},
    {"name": "e4", "tail": "v2", "head": "v3"}
  ],
  "flows": [
    {"family": "node_proportional", "kappa": 1.0},
    {"family": "node_proportional", "kappa": 1.0},
    {"family": "node_proportional", "kappa": 1.0},
    {"family": "node_proportional", "kappa": 1.0}
  ],
  "routing": [
    [0.0, 0.0, 0.5, 0.5],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0]
  ],
  "inflow": [
    {"kind": "sinusoid", "amplitude": 0.45, "omega": 1.0, "phase": 0.0},
    {"kind": "sinusoid", "amplitude": 0.45, "omega": 1.0, "phase": 0.0, "phase_is_parameter": true},
    {"kind": "constant", "level": 0.0},
    {"kind": "constant", "level": 0.0}
  ],
  "initial_state": [0.0, 0.0, 0.0, 0.0],
  "sim": {"dt": 0.001, "horizon": 200.0, "mode": "smooth"}
})json";

const char* kMulticommodity = R"json({
  "schema_version": 1,
  "name": "multicommodity",
  "notes": "Two commodities share a seven-link network with a cycle (e2 routes partly back through e7) but follow different routing matrices. Every link saturates at capacity 6; each link's total outflow is driven by the aggregate mass and split between commodities in proportion to their share of that mass. The certificate sums both commodities' capacity-normalized net inflows and compares the peak, here 0.992, against 1. dt = 0.001 and horizon 100 are choices of this bundle.",
  "nodes": ["s", "n0", "n1", "n2", "n3"],
  "links": [
    {"name": "e1", "tail": "s", "head": "n0"},
    {"name": "e2", "tail": "n0", "head": "n1"},
    {"name": "e3", "tail": "n1", "head": "n2"},
    {"name": "e4", "tail": "n1", "head": "n3"},
    {"name": "e5", "tail": "n0", "head": "n2"},
    {"name": "e6", "tail": "n2", "head": "n3"},
    {"name": "e7", "tail": "n1", "head": "n0"}
  ],
  "flows": [
    {"family": "saturating_exp", "capacity": 6.0},
    {"family": "saturating_exp", "capacity": 6.0},
    {"family": "saturating_exp", "capacity": 6.0},
    {"family": "saturating_exp", "capacity": 6.0},
    {"family": "saturating_exp", "capacity": 6.0},
    {"family": "saturating_exp", "capacity": 6.0},
    {"family": "saturating_exp", "capacity": 6.0}
  ],
  "commodities": [
    {
      "id": "A",
      "routing": [
        [0.0, 0.6, 0.0, 0.0, 0.4, 0.0, 0.0],
        [0.0, 0.0, 0.3, 0.6, 0.0, 0.0, 0.1],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0]
      ],
      "inflow": [
        {"kind": "constant", "level": 1.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0}
      ],
      "initial_state": [0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3]
    },
    {
      "id": "B",
      "routing": [
        [0.0, 0.7, 0.0, 0.0, 0.3, 0.0, 0.0],
        [0.0, 0.0, 0.4, 0.3, 0.0, 0.0, 0.3],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.3, 0.0, 0.0, 0.7, 0.0, 0.0]
      ],
      "inflow": [
        {"kind": "constant", "level": 0.7},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0},
        {"kind": "constant", "level": 0.0}
      ],
      "initial_state": [0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5]
    }
  ],
  "sim": {"dt": 0.001, "horizon": 100.0, "mode": "smooth"}
})json";

struct Entry {
  BundledScenario info;
  const char* text;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"example1", "two-link cycle with strongly asymmetric capacities"}, kExample1},
      {{"local-node", "three constant sources into one proportional junction"}, kLocalNode},
      {{"junction", "signal-phased junction that needs inclusion semantics"}, kJunction},
      {{"timevarying", "two-stage network driven by sinusoid inflows (params A, phi)"},
       kTimeVarying},
      {{"multicommodity", "two commodities sharing a seven-link network with a cycle"},
       kMulticommodity},
  };
  return entries;
}

}  // namespace

const std::vector<BundledScenario>& bundled_scenarios() {
  static const std::vector<BundledScenario> list = [] {
    std::vector<BundledScenario> out;
    for (const Entry& e : registry()) out.push_back(e.info);
    return out;
  }();
  return list;
}

const std::string& bundled_scenario_text(const std::string& name) {
  static const std::vector<std::string> texts = [] {
    std::vector<std::string> out;
    for (const Entry& e : registry()) out.emplace_back(e.text);
    return out;
  }();
  for (size_t i = 0; i < registry().size(); ++i)
    if (registry()[i].info.name == name) return texts[i];
  throw Error(ErrorKind::Io, "no bundled scenario named '" + name + "' (see list-scenarios)");
}

Scenario load_bundled_scenario(const std::string& name) {
  return parse_scenario(bundled_scenario_text(name), "bundled:" + name);
}

}  // namespace flownet
