#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "flownet.h"

namespace {

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    std::filesystem::path d = std::filesystem::temp_directory_path() / "flownet_capi_test";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

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

}  // namespace

TEST_CASE("version and bundled catalog") {
  CHECK(std::strcmp(flownet_version(), "1.0.0") == 0);

  REQUIRE(flownet_bundled_count() == 5);
  CHECK(std::string(flownet_bundled_name(0)) == "example1");
  CHECK(std::string(flownet_bundled_name(4)) == "multicommodity");
  CHECK(flownet_bundled_name(5) == nullptr);
  CHECK(flownet_bundled_name(-1) == nullptr);
  for (int i = 0; i < flownet_bundled_count(); ++i) {
    CHECK(flownet_bundled_summary(i) != nullptr);
    CHECK(std::string(flownet_bundled_summary(i)).size() > 0);
  }
}

TEST_CASE("scenario handles open, describe, and round-trip") {
  ScenarioHandle sc;
  REQUIRE(flownet_scenario_open_bundled("junction", &sc.ptr) == FLOWNET_OK);
  CHECK(std::string(flownet_last_error()).empty());
  CHECK(std::string(flownet_scenario_name(sc.ptr)) == "junction");
  CHECK(flownet_scenario_link_count(sc.ptr) == 4);

  const char* json = flownet_scenario_json(sc.ptr);
  REQUIRE(json != nullptr);
  std::string canonical = json;  // copy before any further call on the handle
  CHECK(canonical.find("\"name\": \"junction\"") != std::string::npos);

  ScenarioHandle reparsed;
  REQUIRE(flownet_scenario_parse(canonical.c_str(), "copy", &reparsed.ptr) == FLOWNET_OK);
  CHECK(std::string(flownet_scenario_name(reparsed.ptr)) == "junction");

  std::filesystem::path path = scratch_dir() / "junction.json";
  std::ofstream(path) << canonical;
  ScenarioHandle from_file;
  REQUIRE(flownet_scenario_open_file(path.string().c_str(), &from_file.ptr) == FLOWNET_OK);
  CHECK(flownet_scenario_link_count(from_file.ptr) == 4);
}

TEST_CASE("failures set a status and a thread-local message") {
  ScenarioHandle sc;
  CHECK(flownet_scenario_open_bundled("nope", &sc.ptr) == FLOWNET_ERR_IO);
  CHECK(std::string(flownet_last_error()).size() > 0);

  CHECK(flownet_scenario_open_file((scratch_dir() / "absent.json").string().c_str(), &sc.ptr) ==
        FLOWNET_ERR_IO);

  CHECK(flownet_scenario_parse("{bad", "inline-test", &sc.ptr) == FLOWNET_ERR_PARSE);
  CHECK(std::string(flownet_last_error()).find("inline-test") != std::string::npos);
  CHECK(flownet_scenario_parse("{}", nullptr, &sc.ptr) == FLOWNET_ERR_SCHEMA);
  CHECK(std::string(flownet_last_error()).find("inline") != std::string::npos);

  CHECK(flownet_scenario_open_bundled(nullptr, &sc.ptr) == FLOWNET_ERR_PARAM);
  CHECK(flownet_scenario_open_bundled("junction", nullptr) == FLOWNET_ERR_PARAM);

  // A successful call clears the message.
  REQUIRE(flownet_scenario_open_bundled("junction", &sc.ptr) == FLOWNET_OK);
  CHECK(std::string(flownet_last_error()).empty());

  CHECK(flownet_scenario_set_param(sc.ptr, "bogus", 1.0) == FLOWNET_ERR_PARAM);
  CHECK(std::string(flownet_last_error()).find("known:") != std::string::npos);
  CHECK(flownet_scenario_set_param(nullptr, "A", 1.0) == FLOWNET_ERR_PARAM);
  CHECK(flownet_scenario_set_param(sc.ptr, "lambda1", 0.5) == FLOWNET_OK);

  // Freeing NULL is a no-op, not a crash.
  flownet_scenario_free(nullptr);
  flownet_reports_free(nullptr);
  flownet_sim_free(nullptr);
}

TEST_CASE("certificates surface every report field") {
  ScenarioHandle sc;
  REQUIRE(flownet_scenario_open_bundled("junction", &sc.ptr) == FLOWNET_OK);
  ReportsHandle reports;
  REQUIRE(flownet_certify(sc.ptr, &reports.ptr) == FLOWNET_OK);

  REQUIRE(flownet_reports_count(reports.ptr) == 3);
  CHECK(std::string(flownet_report_condition(reports.ptr, 0)) == "iss-inflow-bound");
  CHECK(std::string(flownet_report_condition(reports.ptr, 1)) == "iss-inflow-bound-normalized");
  CHECK(std::string(flownet_report_condition(reports.ptr, 2)) == "iss-inflow-bound-inclusion");

  CHECK(std::string(flownet_report_verdict(reports.ptr, 0)) == "uncertifiable");
  CHECK(std::string(flownet_report_verdict(reports.ptr, 2)) == "not-certified");

  int known = -1;
  CHECK(flownet_report_lhs(reports.ptr, 2) == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(flownet_report_rhs(reports.ptr, 2, &known) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(known == 1);
  CHECK(flownet_report_rhs(reports.ptr, 2, nullptr) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flownet_report_margin(reports.ptr, 2) == doctest::Approx(-0.9).epsilon(1e-9));

  CHECK(std::string(flownet_reports_overall(reports.ptr)) == "not-certified");

  // Out-of-range indexes degrade to NULL/NaN, never crash.
  CHECK(flownet_report_condition(reports.ptr, 3) == nullptr);
  CHECK(std::isnan(flownet_report_lhs(reports.ptr, 3)));
  CHECK(std::isnan(flownet_report_margin(reports.ptr, -1)));

  // Rendered forms share the handle's scratch buffer: copy before the next call.
  std::string json = flownet_reports_json(reports.ptr, 0);
  std::string text = flownet_reports_text(reports.ptr);
  CHECK(json.find("\"format\": \"flownet-report\"") != std::string::npos);
  CHECK(json.find("generated_at") == std::string::npos);
  CHECK(text.find("overall: not-certified") != std::string::npos);
  CHECK(json != text);

  std::string stamped = flownet_reports_json(reports.ptr, 1);
  CHECK(stamped.find("generated_at") != std::string::npos);

  ScenarioHandle certified;
  REQUIRE(flownet_scenario_open_bundled("example1", &certified.ptr) == FLOWNET_OK);
  ReportsHandle ok_reports;
  REQUIRE(flownet_certify(certified.ptr, &ok_reports.ptr) == FLOWNET_OK);
  CHECK(std::string(flownet_reports_overall(ok_reports.ptr)) == "certified");
}

TEST_CASE("simulation handles run, report monitors, and write CSV") {
  ScenarioHandle sc;
  REQUIRE(flownet_scenario_open_bundled("junction", &sc.ptr) == FLOWNET_OK);
  REQUIRE(flownet_scenario_set_param(sc.ptr, "lambda1", 0.5) == FLOWNET_OK);

  flownet_sim_options options;
  flownet_sim_options_init(&options);
  CHECK(options.dt == 0.0);
  CHECK(options.horizon == 0.0);
  CHECK(options.mode == nullptr);
  CHECK(options.store_every == 0);
  CHECK(options.run_monitors == 1);
  flownet_sim_options_init(nullptr);  // tolerated

  options.horizon = 30.0;
  options.store_every = 10;

  SimHandle sim;
  REQUIRE(flownet_simulate(sc.ptr, &options, &sim.ptr) == FLOWNET_OK);
  CHECK(std::string(flownet_sim_verdict(sim.ptr)) == "bounded");

  REQUIRE(flownet_sim_monitor_count(sim.ptr) == 5);
  CHECK(std::string(flownet_sim_monitor_name(sim.ptr, 4)) == "mass-balance");
  for (int i = 0; i < 5; ++i) {
    CHECK(flownet_sim_monitor_pass(sim.ptr, i) == 1);
    CHECK(flownet_sim_monitor_worst(sim.ptr, i) < 1e-6);
  }
  CHECK(flownet_sim_monitor_name(sim.ptr, 5) == nullptr);
  CHECK(flownet_sim_monitor_pass(sim.ptr, 5) == 0);
  CHECK(std::isnan(flownet_sim_monitor_worst(sim.ptr, 5)));

  std::filesystem::path dir = scratch_dir() / "sim_out";
  REQUIRE(flownet_sim_write_csv(sim.ptr, dir.string().c_str(), "calm") == FLOWNET_OK);
  CHECK(std::filesystem::exists(dir / "calm.csv"));
  CHECK(flownet_sim_write_csv(sim.ptr, dir.string().c_str(), nullptr) == FLOWNET_ERR_PARAM);

  std::string summary = flownet_sim_summary_json(sim.ptr, 0);
  CHECK(summary == flownet_sim_summary_json(sim.ptr, 0));
  CHECK(summary.find("\"format\": \"flownet-run\"") != std::string::npos);
  CHECK(summary.find("\"verdict\": \"bounded\"") != std::string::npos);

  // Bad overrides are caught before integration.
  flownet_sim_options bad;
  flownet_sim_options_init(&bad);
  bad.mode = "warp";
  SimHandle rejected;
  CHECK(flownet_simulate(sc.ptr, &bad, &rejected.ptr) == FLOWNET_ERR_PARAM);

  // The junction's field releases mass from empty links; smooth mode is invalid.
  flownet_sim_options smooth;
  flownet_sim_options_init(&smooth);
  smooth.mode = "smooth";
  SimHandle invalid;
  CHECK(flownet_simulate(sc.ptr, &smooth, &invalid.ptr) == FLOWNET_ERR_VALIDATION);

  CHECK(flownet_simulate(nullptr, &options, &sim.ptr) == FLOWNET_ERR_PARAM);
}

TEST_CASE("multicommodity runs are reachable through the same surface") {
  ScenarioHandle sc;
  REQUIRE(flownet_scenario_open_bundled("multicommodity", &sc.ptr) == FLOWNET_OK);
  CHECK(flownet_scenario_link_count(sc.ptr) == 7);

  flownet_sim_options options;
  flownet_sim_options_init(&options);
  options.horizon = 0.05;

  SimHandle sim;
  REQUIRE(flownet_simulate(sc.ptr, &options, &sim.ptr) == FLOWNET_OK);
  REQUIRE(flownet_sim_monitor_count(sim.ptr) == 4);
  CHECK(std::string(flownet_sim_monitor_name(sim.ptr, 0)) == "mass-balance[A]");
  CHECK(std::string(flownet_sim_monitor_name(sim.ptr, 2)) == "capacity-split");

  std::filesystem::path dir = scratch_dir() / "mc_out";
  REQUIRE(flownet_sim_write_csv(sim.ptr, dir.string().c_str(), "mc") == FLOWNET_OK);
  CHECK(std::filesystem::exists(dir / "mc_A.csv"));
  CHECK(std::filesystem::exists(dir / "mc_B.csv"));
}
