#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "flownet/certificates.hpp"
#include "flownet/flows.hpp"
#include "flownet/graph.hpp"
#include "flownet/inflow.hpp"
#include "flownet/multicommodity.hpp"
#include "flownet/simulate.hpp"
#include "flownet/types.hpp"

namespace flownet {

// A complete, runnable description of one network plus its inflow and
// integration settings. Either the single-commodity fields (routing, inflow,
// initial_state) or the commodities list is populated, never both.
struct Scenario {
  int schema_version = 1;
  std::string name;
  std::string notes;
  FlowGraph graph;
  std::vector<FlowFamily> families;

  Mat routing;
  InflowSignal inflow;
  Vec initial_state;

  std::vector<CommoditySpec> commodities;

  SimConfig sim;

  bool multicommodity() const { return !commodities.empty(); }
  FlowField field() const { return FlowField(graph, families); }

  // Full semantic validation: graph structure, routing validity per
  // commodity, field consistency, signal invariants, dimensions, and
  // integration settings. Throws Error with the first problem found.
  void validate() const;
};

// Parsing performs three distinct stages with distinct error kinds:
// Error(Parse) for malformed JSON, Error(Schema) for missing or mistyped
// fields and unknown keys, then Scenario::validate() for semantics.
Scenario parse_scenario(const std::string& json_text, const std::string& origin);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);  // canonical form

// Named overrides for sweeping a scenario from the command line without
// editing files. Keys:
//   A            every sinusoid amplitude
//   phi          the phase of sinusoids flagged phase_is_parameter
//   kappa        every proportional-pool kappa
//   lambda<i>    link i's inflow becomes constant <value> (single commodity)
//   lambda<C>_<i>  the same for commodity C
// Throws Error(Param) for unknown keys, absent targets, or bad values.
void apply_param(Scenario& scenario, const std::string& key, double value);

struct BundledScenario {
  std::string name;
  std::string summary;
};
const std::vector<BundledScenario>& bundled_scenarios();
const std::string& bundled_scenario_text(const std::string& name);  // Error(Io) if unknown
Scenario load_bundled_scenario(const std::string& name);

// Resolves --scenario arguments: an existing file path wins, otherwise a
// bundled name.
Scenario resolve_scenario(const std::string& path_or_name);

// Every certificate that applies to this scenario, in a stable order.
std::vector<CertificateReport> certify_scenario(const Scenario& scenario);

// Runs the right integrator for the scenario. Exactly one of the two
// members is meaningful, per Scenario::multicommodity().
struct RunOutput {
  bool multi = false;
  Trajectory single;
  MCTrajectory mc;
  SimVerdict verdict() const { return multi ? mc.verdict : single.verdict; }
  const std::vector<MonitorSummary>& monitors() const {
    return multi ? mc.monitors : single.monitors;
  }
};
RunOutput run_scenario(const Scenario& scenario);

}  // namespace flownet
