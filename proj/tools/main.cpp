#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"

#include "flownet.h"

namespace {

struct Common {
  std::string scenario;
  std::string out_dir;
  double dt = 0.0;
  double horizon = 0.0;
  std::string mode;
  std::string format = "text";
  std::vector<std::string> params;
  bool no_timestamp = false;
};

struct ScenarioHandle {
  flownet_scenario* ptr = nullptr;
  ~ScenarioHandle() { flownet_scenario_free(ptr); }
};
struct ReportsHandle {
  flownet_reports* ptr = nullptr;
  ~ReportsHandle() { flownet_reports_free(ptr); }
};
struct SimHandle {
  flownet_sim* ptr = nullptr;
  ~SimHandle() { flownet_sim_free(ptr); }
};

int report_error(const std::string& stage) {
  std::fprintf(stderr, "error (%s): %s\n", stage.c_str(), flownet_last_error());
  return 1;
}

bool parse_param(const std::string& text, std::string& key, double& value) {
  size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) return false;
  key = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  if (rest == "pi") {
    value = std::acos(-1.0);
    return true;
  }
  try {
    size_t used = 0;
    value = std::stod(rest, &used);
    return used == rest.size();
  } catch (...) {
    return false;
  }
}

int open_scenario(const Common& c, ScenarioHandle& handle) {
  std::error_code ec;
  flownet_status status;
  if (std::filesystem::exists(c.scenario, ec))
    status = flownet_scenario_open_file(c.scenario.c_str(), &handle.ptr);
  else
    status = flownet_scenario_open_bundled(c.scenario.c_str(), &handle.ptr);
  if (status != FLOWNET_OK) return report_error("loading scenario");
  for (const std::string& p : c.params) {
    std::string key;
    double value = 0.0;
    if (!parse_param(p, key, value)) {
      std::fprintf(stderr, "error: bad --param '%s' (use KEY=VALUE)\n", p.c_str());
      return 1;
    }
    if (flownet_scenario_set_param(handle.ptr, key.c_str(), value) != FLOWNET_OK)
      return report_error("applying --param " + key);
  }
  return 0;
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  out << content;
  return static_cast<bool>(out);
}

int cmd_validate(const Common& c) {
  ScenarioHandle sc;
  if (int rc = open_scenario(c, sc)) return rc;
  std::printf("scenario '%s' is valid (%d links)\n", flownet_scenario_name(sc.ptr),
              flownet_scenario_link_count(sc.ptr));
  return 0;
}

int cmd_certify(const Common& c) {
  ScenarioHandle sc;
  if (int rc = open_scenario(c, sc)) return rc;
  ReportsHandle reports;
  if (flownet_certify(sc.ptr, &reports.ptr) != FLOWNET_OK) return report_error("certify");

  bool structured = c.format == "structured";
  std::string body = structured ? flownet_reports_json(reports.ptr, c.no_timestamp ? 0 : 1)
                                : flownet_reports_text(reports.ptr);
  std::fputs(body.c_str(), stdout);

  std::string name = flownet_scenario_name(sc.ptr);
  std::filesystem::path path = std::filesystem::path(c.out_dir) /
                               (name + (structured ? "_report.json" : "_report.txt"));
  if (!write_file(path, body)) {
    std::fprintf(stderr, "error: cannot write %s\n", path.string().c_str());
    return 1;
  }

  std::string overall = flownet_reports_overall(reports.ptr);
  return overall == "certified" ? 0 : 2;
}

int cmd_simulate(const Common& c) {
  ScenarioHandle sc;
  if (int rc = open_scenario(c, sc)) return rc;
  flownet_sim_options opts;
  flownet_sim_options_init(&opts);
  if (c.dt > 0.0) opts.dt = c.dt;
  if (c.horizon > 0.0) opts.horizon = c.horizon;
  if (!c.mode.empty()) opts.mode = c.mode.c_str();
  SimHandle sim;
  if (flownet_simulate(sc.ptr, &opts, &sim.ptr) != FLOWNET_OK) return report_error("simulate");

  std::string name = flownet_scenario_name(sc.ptr);
  if (flownet_sim_write_csv(sim.ptr, c.out_dir.c_str(), name.c_str()) != FLOWNET_OK)
    return report_error("writing trajectory");
  std::string summary = flownet_sim_summary_json(sim.ptr, c.no_timestamp ? 0 : 1);
  std::filesystem::path summary_path = std::filesystem::path(c.out_dir) / (name + "_run.json");
  if (!write_file(summary_path, summary)) {
    std::fprintf(stderr, "error: cannot write %s\n", summary_path.string().c_str());
    return 1;
  }

  std::string verdict = flownet_sim_verdict(sim.ptr);
  if (c.format == "structured") {
    std::fputs(summary.c_str(), stdout);
  } else {
    std::printf("scenario: %s\nverdict: %s\n", name.c_str(), verdict.c_str());
    int monitors = flownet_sim_monitor_count(sim.ptr);
    if (monitors > 0) std::printf("monitors:\n");
    for (int i = 0; i < monitors; ++i)
      std::printf("  %s  %s  worst residual %g\n",
                  flownet_sim_monitor_pass(sim.ptr, i) ? "pass" : "FAIL",
                  flownet_sim_monitor_name(sim.ptr, i), flownet_sim_monitor_worst(sim.ptr, i));
    std::printf("trajectory CSV written under %s\n", c.out_dir.c_str());
  }
  return verdict == "diverging" ? 3 : 0;
}

int cmd_list() {
  int count = flownet_bundled_count();
  for (int i = 0; i < count; ++i)
    std::printf("%-16s %s\n", flownet_bundled_name(i), flownet_bundled_summary(i));
  return 0;
}

struct Expectation {
  std::string scenario;
  std::vector<std::pair<std::string, double>> params;
  std::string expect_overall;
  std::string expect_sim;
};

std::vector<Expectation> reference_table() {
  const double pi = std::acos(-1.0);
  return {
      {"example1", {}, "certified", "bounded"},
      {"local-node", {}, "necessarily-unstable", "diverging"},
      {"local-node", {{"lambda1", 0.3}, {"lambda2", 0.3}, {"lambda3", 0.3}}, "certified",
       "bounded"},
      {"junction", {}, "not-certified", "diverging"},
      {"junction", {{"lambda1", 0.5}}, "certified", "bounded"},
      {"timevarying", {{"A", 0.24}, {"phi", 0.0}}, "certified", "bounded"},
      {"timevarying", {{"A", 0.45}, {"phi", 0.0}}, "not-certified", "bounded"},
      {"timevarying", {{"A", 0.51}, {"phi", 0.0}}, "not-certified", "diverging"},
      {"timevarying", {{"A", 0.24}, {"phi", pi}}, "certified", "bounded"},
      {"timevarying", {{"A", 0.45}, {"phi", pi}}, "certified", "bounded"},
      {"timevarying", {{"A", 0.51}, {"phi", pi}}, "not-certified", "diverging"},
      {"multicommodity", {}, "certified", "bounded"},
  };
}

std::string variant_label(const std::string& scenario,
                          const std::vector<std::pair<std::string, double>>& params) {
  std::string label = scenario;
  for (const auto& [key, value] : params) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "-%s%g", key.c_str(), value);
    label += buf;
  }
  return label;
}

struct VariantResult {
  bool error = true;
  std::string overall;
  std::string verdict;
};

VariantResult run_variant(const std::string& scenario,
                          const std::vector<std::pair<std::string, double>>& params,
                          const std::filesystem::path& dir, bool with_timestamp) {
  VariantResult result;
  ScenarioHandle sc;
  if (flownet_scenario_open_bundled(scenario.c_str(), &sc.ptr) != FLOWNET_OK) {
    report_error("loading scenario");
    return result;
  }
  for (const auto& [key, value] : params)
    if (flownet_scenario_set_param(sc.ptr, key.c_str(), value) != FLOWNET_OK) {
      report_error("applying parameter " + key);
      return result;
    }

  ReportsHandle reports;
  if (flownet_certify(sc.ptr, &reports.ptr) != FLOWNET_OK) {
    report_error("certify");
    return result;
  }
  write_file(dir / "report.json", flownet_reports_json(reports.ptr, with_timestamp ? 1 : 0));
  result.overall = flownet_reports_overall(reports.ptr);

  flownet_sim_options opts;
  flownet_sim_options_init(&opts);
  opts.store_every = 100;  // keeps reproduction outputs compact without moving any verdict
  SimHandle sim;
  if (flownet_simulate(sc.ptr, &opts, &sim.ptr) != FLOWNET_OK) {
    report_error("simulate");
    return result;
  }
  if (flownet_sim_write_csv(sim.ptr, dir.string().c_str(), "trajectory") != FLOWNET_OK) {
    report_error("writing trajectory");
    return result;
  }
  write_file(dir / "run.json", flownet_sim_summary_json(sim.ptr, with_timestamp ? 1 : 0));
  result.verdict = flownet_sim_verdict(sim.ptr);
  result.error = false;
  return result;
}

int cmd_reproduce(const std::string& name, const Common& c) {
  std::filesystem::path base = std::filesystem::path(c.out_dir) / "reproduce";
  std::vector<Expectation> table = reference_table();

  if (!c.params.empty()) {
    // One explicit variant: run it, compare to the reference table when a
    // matching row exists, and exit by outcome.
    if (name.empty()) {
      std::fprintf(stderr, "error: reproduce with --param needs a scenario name\n");
      return 1;
    }
    std::vector<std::pair<std::string, double>> params;
    for (const std::string& p : c.params) {
      std::string key;
      double value = 0.0;
      if (!parse_param(p, key, value)) {
        std::fprintf(stderr, "error: bad --param '%s' (use KEY=VALUE)\n", p.c_str());
        return 1;
      }
      params.emplace_back(key, value);
    }
    std::string label = variant_label(name, params);
    VariantResult r = run_variant(name, params, base / label, !c.no_timestamp);
    if (r.error) return 1;
    std::printf("reproduce %s\n  certify: %s\n  simulate: %s\n", label.c_str(),
                r.overall.c_str(), r.verdict.c_str());

    const Expectation* match = nullptr;
    for (const Expectation& e : table) {
      if (e.scenario != name || e.params.size() != params.size()) continue;
      bool same = true;
      for (const auto& [key, value] : params) {
        bool found = false;
        for (const auto& [ekey, evalue] : e.params)
          found |= ekey == key && std::abs(evalue - value) < 1e-12;
        same &= found;
      }
      if (same) {
        match = &e;
        break;
      }
    }
    if (match) {
      bool ok = match->expect_overall == r.overall && match->expect_sim == r.verdict;
      std::printf("  reference: certify=%s simulate=%s -> %s\n", match->expect_overall.c_str(),
                  match->expect_sim.c_str(),
                  ok ? "matches reference" : "DOES NOT MATCH reference");
    } else {
      std::printf("  reference: no expectation recorded for this parameter set\n");
    }
    if (r.verdict == "diverging") return 3;
    return r.overall == "certified" ? 0 : 2;
  }

  // Whole table (optionally restricted to one scenario).
  int ran = 0;
  int matched = 0;
  std::string summary = "reproduce summary\n";
  for (const Expectation& e : table) {
    if (!name.empty() && e.scenario != name) continue;
    ++ran;
    std::string label = variant_label(e.scenario, e.params);
    VariantResult r = run_variant(e.scenario, e.params, base / label, !c.no_timestamp);
    bool ok = !r.error && r.overall == e.expect_overall && r.verdict == e.expect_sim;
    matched += ok ? 1 : 0;
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %s: certify=%s simulate=%s (expected %s, %s)\n",
                  ok ? " ok " : "FAIL", label.c_str(),
                  r.error ? "error" : r.overall.c_str(), r.error ? "error" : r.verdict.c_str(),
                  e.expect_overall.c_str(), e.expect_sim.c_str());
    std::fputs(line, stdout);
    std::fflush(stdout);
    summary += line;
  }
  if (ran == 0) {
    std::fprintf(stderr, "error: no reference variants for '%s'\n", name.c_str());
    return 1;
  }
  char tail[64];
  std::snprintf(tail, sizeof tail, "%d variants, %d match\n", ran, matched);
  std::fputs(tail, stdout);
  summary += tail;
  write_file(base / "summary.txt", summary);
  return matched == ran ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flow network simulation and stability certification"};
  app.require_subcommand(1);

  Common c;
  const char* env_out = std::getenv("FLOWNET_OUT");
  c.out_dir = env_out ? env_out : "out";

  auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
    if (needs_scenario)
      cmd->add_option("--scenario", c.scenario, "scenario file path or bundled name")
          ->required();
    cmd->add_option("--out", c.out_dir, "output directory (default: $FLOWNET_OUT or ./out)");
    cmd->add_option("--dt", c.dt, "override the integration step (simulate only)");
    cmd->add_option("--horizon", c.horizon, "override the horizon (simulate only)");
    cmd->add_option("--mode", c.mode, "override the dynamics mode (simulate only)")
        ->check(CLI::IsMember({"smooth", "inclusion"}));
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--param", c.params,
                    "KEY=VALUE override, repeatable "
                    "(keys: A, phi, kappa, lambda<i>, lambda<C>_<i>; VALUE may be 'pi')");
    cmd->add_flag("--no-timestamp", c.no_timestamp,
                  "omit generated_at so structured outputs are byte-identical across runs");
  };

  CLI::App* validate =
      app.add_subcommand("validate", "load a scenario and run every structural check");
  add_common(validate, true);
  CLI::App* certify =
      app.add_subcommand("certify", "evaluate every applicable stability certificate");
  add_common(certify, true);
  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate the dynamics and write the trajectory CSV");
  add_common(simulate, true);
  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "rerun the bundled studies and compare against reference outcomes");
  std::string reproduce_name;
  reproduce->add_option("name", reproduce_name,
                        "bundled scenario to reproduce (omit to run the whole table)");
  add_common(reproduce, false);
  app.add_subcommand("list-scenarios", "print the bundled scenario catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (validate->parsed()) return cmd_validate(c);
  if (certify->parsed()) return cmd_certify(c);
  if (simulate->parsed()) return cmd_simulate(c);
  if (reproduce->parsed()) return cmd_reproduce(reproduce_name, c);
  return cmd_list();
}
