#include "flownet.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "flownet/error.hpp"
#include "flownet/io.hpp"
#include "flownet/scenario.hpp"

using flownet::Error;
using flownet::ErrorKind;

struct flownet_scenario {
  flownet::Scenario sc;
  mutable std::string scratch;
};

struct flownet_reports {
  flownet::Scenario sc;
  std::vector<flownet::CertificateReport> reports;
  std::string scratch;
};

struct flownet_sim {
  flownet::Scenario sc;
  flownet::RunOutput run;
  std::string scratch;
};

namespace {

thread_local std::string g_last_error;

flownet_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return FLOWNET_ERR_DOMAIN;
    case ErrorKind::Structural: return FLOWNET_ERR_STRUCTURAL;
    case ErrorKind::Validation: return FLOWNET_ERR_VALIDATION;
    case ErrorKind::Parse: return FLOWNET_ERR_PARSE;
    case ErrorKind::Schema: return FLOWNET_ERR_SCHEMA;
    case ErrorKind::Numeric: return FLOWNET_ERR_NUMERIC;
    case ErrorKind::Io: return FLOWNET_ERR_IO;
    case ErrorKind::Param: return FLOWNET_ERR_PARAM;
  }
  return FLOWNET_ERR_OTHER;
}

template <typename Fn>
flownet_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FLOWNET_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FLOWNET_ERR_OTHER;
  } catch (...) {
    g_last_error = "unknown failure";
    return FLOWNET_ERR_OTHER;
  }
}

flownet_status require(bool ok, const char* message) {
  if (ok) return FLOWNET_OK;
  g_last_error = message;
  return FLOWNET_ERR_PARAM;
}

const flownet::MonitorSummary* monitor_at(const flownet_sim* sim, int index) {
  if (!sim) return nullptr;
  const std::vector<flownet::MonitorSummary>& monitors = sim->run.monitors();
  if (index < 0 || index >= static_cast<int>(monitors.size())) return nullptr;
  return &monitors[index];
}

const flownet::CertificateReport* report_at(const flownet_reports* reports, int index) {
  if (!reports) return nullptr;
  if (index < 0 || index >= static_cast<int>(reports->reports.size())) return nullptr;
  return &reports->reports[index];
}

}  // namespace

extern "C" {

const char* flownet_last_error(void) { return g_last_error.c_str(); }

const char* flownet_version(void) { return "1.0.0"; }

flownet_status flownet_scenario_open_file(const char* path, flownet_scenario** out) {
  if (flownet_status s = require(path && out, "path and out must not be NULL")) return s;
  return guarded([&] {
    auto* handle = new flownet_scenario{flownet::load_scenario(path), {}};
    *out = handle;
  });
}

flownet_status flownet_scenario_open_bundled(const char* name, flownet_scenario** out) {
  if (flownet_status s = require(name && out, "name and out must not be NULL")) return s;
  return guarded([&] {
    auto* handle = new flownet_scenario{flownet::load_bundled_scenario(name), {}};
    *out = handle;
  });
}

flownet_status flownet_scenario_parse(const char* json_text, const char* origin,
                                      flownet_scenario** out) {
  if (flownet_status s = require(json_text && out, "json_text and out must not be NULL"))
    return s;
  return guarded([&] {
    auto* handle = new flownet_scenario{
        flownet::parse_scenario(json_text, origin ? origin : "inline"), {}};
    *out = handle;
  });
}

void flownet_scenario_free(flownet_scenario* scenario) { delete scenario; }

const char* flownet_scenario_name(const flownet_scenario* scenario) {
  return scenario ? scenario->sc.name.c_str() : nullptr;
}

int flownet_scenario_link_count(const flownet_scenario* scenario) {
  return scenario ? scenario->sc.graph.link_count() : 0;
}

const char* flownet_scenario_json(const flownet_scenario* scenario) {
  if (!scenario) return nullptr;
  try {
    scenario->scratch = flownet::scenario_to_json(scenario->sc);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
  return scenario->scratch.c_str();
}

flownet_status flownet_scenario_set_param(flownet_scenario* scenario, const char* key,
                                          double value) {
  if (flownet_status s = require(scenario && key, "scenario and key must not be NULL")) return s;
  return guarded([&] { flownet::apply_param(scenario->sc, key, value); });
}

int flownet_bundled_count(void) {
  return static_cast<int>(flownet::bundled_scenarios().size());
}

const char* flownet_bundled_name(int index) {
  const auto& list = flownet::bundled_scenarios();
  if (index < 0 || index >= static_cast<int>(list.size())) return nullptr;
  return list[index].name.c_str();
}

const char* flownet_bundled_summary(int index) {
  const auto& list = flownet::bundled_scenarios();
  if (index < 0 || index >= static_cast<int>(list.size())) return nullptr;
  return list[index].summary.c_str();
}

flownet_status flownet_certify(const flownet_scenario* scenario, flownet_reports** out) {
  if (flownet_status s = require(scenario && out, "scenario and out must not be NULL")) return s;
  return guarded([&] {
    auto* handle = new flownet_reports{scenario->sc, flownet::certify_scenario(scenario->sc), {}};
    *out = handle;
  });
}

void flownet_reports_free(flownet_reports* reports) { delete reports; }

int flownet_reports_count(const flownet_reports* reports) {
  return reports ? static_cast<int>(reports->reports.size()) : 0;
}

const char* flownet_report_condition(const flownet_reports* reports, int index) {
  const auto* r = report_at(reports, index);
  return r ? r->condition.c_str() : nullptr;
}

const char* flownet_report_verdict(const flownet_reports* reports, int index) {
  const auto* r = report_at(reports, index);
  return r ? flownet::to_string(r->verdict) : nullptr;
}

double flownet_report_lhs(const flownet_reports* reports, int index) {
  const auto* r = report_at(reports, index);
  return r ? r->lhs : std::numeric_limits<double>::quiet_NaN();
}

double flownet_report_rhs(const flownet_reports* reports, int index, int* rhs_known) {
  const auto* r = report_at(reports, index);
  if (rhs_known) *rhs_known = r && r->rhs_known ? 1 : 0;
  return r ? r->rhs : std::numeric_limits<double>::quiet_NaN();
}

double flownet_report_margin(const flownet_reports* reports, int index) {
  const auto* r = report_at(reports, index);
  return r ? r->margin() : std::numeric_limits<double>::quiet_NaN();
}

const char* flownet_reports_overall(const flownet_reports* reports) {
  if (!reports) return nullptr;
  static thread_local std::string overall;
  overall = flownet::overall_verdict(reports->reports);
  return overall.c_str();
}

const char* flownet_reports_json(flownet_reports* reports, int with_timestamp) {
  if (!reports) return nullptr;
  reports->scratch =
      flownet::reports_to_json(reports->sc, reports->reports, with_timestamp != 0);
  return reports->scratch.c_str();
}

const char* flownet_reports_text(flownet_reports* reports) {
  if (!reports) return nullptr;
  reports->scratch = flownet::render_reports_text(reports->sc, reports->reports);
  return reports->scratch.c_str();
}

void flownet_sim_options_init(flownet_sim_options* options) {
  if (!options) return;
  options->dt = 0.0;
  options->horizon = 0.0;
  options->mode = nullptr;
  options->store_every = 0;
  options->run_monitors = 1;
}

flownet_status flownet_simulate(const flownet_scenario* scenario,
                                const flownet_sim_options* options, flownet_sim** out) {
  if (flownet_status s = require(scenario && out, "scenario and out must not be NULL")) return s;
  return guarded([&] {
    flownet::Scenario sc = scenario->sc;
    if (options) {
      if (options->dt > 0.0) sc.sim.dt = options->dt;
      if (options->horizon > 0.0) sc.sim.horizon = options->horizon;
      if (options->mode) {
        std::string mode = options->mode;
        if (mode == "smooth") sc.sim.mode = flownet::SimMode::Smooth;
        else if (mode == "inclusion") sc.sim.mode = flownet::SimMode::Inclusion;
        else throw Error(ErrorKind::Param, "mode must be \"smooth\" or \"inclusion\"");
      }
      if (options->store_every > 0) sc.sim.store_every = options->store_every;
      sc.sim.run_monitors = options->run_monitors != 0;
    }
    auto handle = std::make_unique<flownet_sim>();
    handle->sc = std::move(sc);
    handle->run = flownet::run_scenario(handle->sc);
    *out = handle.release();
  });
}

void flownet_sim_free(flownet_sim* sim) { delete sim; }

const char* flownet_sim_verdict(const flownet_sim* sim) {
  return sim ? flownet::to_string(sim->run.verdict()) : nullptr;
}

int flownet_sim_monitor_count(const flownet_sim* sim) {
  return sim ? static_cast<int>(sim->run.monitors().size()) : 0;
}

const char* flownet_sim_monitor_name(const flownet_sim* sim, int index) {
  const auto* m = monitor_at(sim, index);
  return m ? m->name.c_str() : nullptr;
}

int flownet_sim_monitor_pass(const flownet_sim* sim, int index) {
  const auto* m = monitor_at(sim, index);
  return m && m->pass() ? 1 : 0;
}

double flownet_sim_monitor_worst(const flownet_sim* sim, int index) {
  const auto* m = monitor_at(sim, index);
  return m ? m->worst : std::numeric_limits<double>::quiet_NaN();
}

flownet_status flownet_sim_write_csv(flownet_sim* sim, const char* directory,
                                     const char* basename) {
  if (flownet_status s =
          require(sim && directory && basename, "sim, directory, basename must not be NULL"))
    return s;
  return guarded([&] { flownet::write_run_csv(sim->run, directory, basename); });
}

const char* flownet_sim_summary_json(flownet_sim* sim, int with_timestamp) {
  if (!sim) return nullptr;
  sim->scratch = flownet::run_to_json(sim->sc, sim->run, {}, with_timestamp != 0);
  return sim->scratch.c_str();
}

}  // extern "C"
