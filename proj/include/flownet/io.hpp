#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "flownet/certificates.hpp"
#include "flownet/scenario.hpp"
#include "flownet/simulate.hpp"

namespace flownet {

// Shortest decimal string that parses back to the exact same double.
std::string format_double(double v);

// CSV columns: t, x_1..x_n, z_1..z_n, V_uniform, V_capacity. One row per
// stored sample; numbers round-trip bitwise. The column set and order are a
// stable format (format "flownet-trajectory", version 1 documented in docs).
std::string trajectory_csv_header(int link_count);
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
std::filesystem::path write_trajectory_csv(const Trajectory& traj,
                                           const std::filesystem::path& directory,
                                           const std::string& basename);

// Reads a file written by write_trajectory_csv. Verdict and monitors are not
// part of the format; only the sampled series come back.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

// Multicommodity runs produce one file per commodity (basename_<id>.csv);
// single runs produce basename.csv. Returns the paths written.
std::vector<std::filesystem::path> write_run_csv(const RunOutput& run,
                                                 const std::filesystem::path& directory,
                                                 const std::string& basename);

// "certified" if any report is certified-ISS, else "necessarily-unstable" if
// any report says so, else "not-certified".
std::string overall_verdict(const std::vector<CertificateReport>& reports);

// Certificate rendering. The structured form is versioned JSON; rendering is
// deterministic, and with_timestamp = false makes reruns byte-identical.
std::string render_reports_text(const Scenario& scenario,
                                const std::vector<CertificateReport>& reports);
std::string reports_to_json(const Scenario& scenario,
                            const std::vector<CertificateReport>& reports, bool with_timestamp);

// Simulation summary rendering: verdict plus the monitor ledger.
std::string render_run_text(const Scenario& scenario, const RunOutput& run);
std::string run_to_json(const Scenario& scenario, const RunOutput& run,
                        const std::vector<std::filesystem::path>& csv_paths,
                        bool with_timestamp);

std::string current_timestamp_utc();  // RFC 3339, second resolution

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace flownet
