#include "flownet/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "flownet/error.hpp"

namespace flownet {

namespace {

using Json = nlohmann::ordered_json;

// JSON has no inf/nan literals; unknown values become null and infinities
// become marked strings so documents stay parseable everywhere.
Json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string sanitize_component(const std::string& raw) {
  std::string out;
  for (char c : raw)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  return out.empty() ? std::string("x") : out;
}

double parse_csv_double(const std::string& token, int line_no) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    throw Error(ErrorKind::Parse,
                "bad number '" + token + "' on line " + std::to_string(line_no));
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv_header(int link_count) {
  std::string header = "t";
  for (int i = 1; i <= link_count; ++i) header += ",x_" + std::to_string(i);
  for (int i = 1; i <= link_count; ++i) header += ",z_" + std::to_string(i);
  header += ",V_uniform,V_capacity";
  return header;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const int n = traj.link_count();
  out << trajectory_csv_header(n) << "\n";
  for (int s = 0; s < traj.sample_count(); ++s) {
    out << format_double(traj.times[s]);
    for (int i = 0; i < n; ++i) out << ',' << format_double(traj.states(s, i));
    for (int i = 0; i < n; ++i) out << ',' << format_double(traj.outflows(s, i));
    out << ',' << format_double(traj.v_uniform[s]);
    out << ',' << format_double(traj.v_capacity[s]);
    out << "\n";
  }
}

std::filesystem::path write_trajectory_csv(const Trajectory& traj,
                                           const std::filesystem::path& directory,
                                           const std::string& basename) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  std::filesystem::path path = directory / (sanitize_component(basename) + ".csv");
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path.string());
  write_trajectory_csv(traj, out);
  if (!out) throw Error(ErrorKind::Io, "failed writing: " + path.string());
  return path;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open trajectory file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "empty file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = split_csv_line(line);
  const int cols = static_cast<int>(header.size());
  if (cols < 5 || (cols - 3) % 2 != 0)
    throw Error(ErrorKind::Parse, "unrecognized trajectory header in " + path.string());
  const int n = (cols - 3) / 2;
  if (line != trajectory_csv_header(n))
    throw Error(ErrorKind::Parse, "unrecognized trajectory header in " + path.string());

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> tokens = split_csv_line(line);
    if (static_cast<int>(tokens.size()) != cols)
      throw Error(ErrorKind::Parse, "wrong column count on line " + std::to_string(line_no) +
                                        " of " + path.string());
    std::vector<double> row;
    for (const std::string& token : tokens) row.push_back(parse_csv_double(token, line_no));
    rows.push_back(std::move(row));
  }

  Trajectory traj;
  const int samples = static_cast<int>(rows.size());
  traj.states.resize(samples, n);
  traj.outflows.resize(samples, n);
  for (int s = 0; s < samples; ++s) {
    traj.times.push_back(rows[s][0]);
    for (int i = 0; i < n; ++i) {
      traj.states(s, i) = rows[s][1 + i];
      traj.outflows(s, i) = rows[s][1 + n + i];
    }
    traj.v_uniform.push_back(rows[s][1 + 2 * n]);
    traj.v_capacity.push_back(rows[s][2 + 2 * n]);
  }
  return traj;
}

std::vector<std::filesystem::path> write_run_csv(const RunOutput& run,
                                                 const std::filesystem::path& directory,
                                                 const std::string& basename) {
  std::vector<std::filesystem::path> paths;
  if (run.multi) {
    for (size_t k = 0; k < run.mc.commodities.size(); ++k)
      paths.push_back(write_trajectory_csv(run.mc.commodities[k], directory,
                                           basename + "_" + run.mc.commodity_ids[k]));
  } else {
    paths.push_back(write_trajectory_csv(run.single, directory, basename));
  }
  return paths;
}

std::string overall_verdict(const std::vector<CertificateReport>& reports) {
  bool unstable = false;
  for (const CertificateReport& r : reports) {
    if (r.verdict == Verdict::CertifiedISS) return "certified";
    unstable |= r.verdict == Verdict::NecessarilyUnstable;
  }
  return unstable ? "necessarily-unstable" : "not-certified";
}

std::string render_reports_text(const Scenario& scenario,
                                const std::vector<CertificateReport>& reports) {
  std::ostringstream out;
  out << "scenario: " << scenario.name << "\n";
  for (const CertificateReport& r : reports) {
    out << "\n" << r.condition << ": " << to_string(r.verdict) << "\n";
    out << "  lhs = " << format_double(r.lhs);
    if (!r.sup_provenance.empty()) out << "   [" << r.sup_provenance << "]";
    out << "\n";
    out << "  rhs = " << (r.rhs_known ? format_double(r.rhs) : std::string("unknown"));
    if (!r.liminf_provenance.empty()) out << "   [" << r.liminf_provenance << "]";
    out << "\n";
    if (r.rhs_known && std::isfinite(r.margin()))
      out << "  margin = " << format_double(r.margin()) << "\n";
    for (const std::string& note : r.notes) out << "  note: " << note << "\n";
  }
  if (!scenario.notes.empty()) out << "\nscenario notes: " << scenario.notes << "\n";
  out << "\noverall: " << overall_verdict(reports) << "\n";
  return out.str();
}

std::string reports_to_json(const Scenario& scenario,
                            const std::vector<CertificateReport>& reports, bool with_timestamp) {
  Json doc;
  doc["format"] = "flownet-report";
  doc["format_version"] = 1;
  doc["scenario"] = scenario.name;
  if (with_timestamp) doc["generated_at"] = current_timestamp_utc();
  if (!scenario.notes.empty()) doc["notes"] = scenario.notes;
  Json list = Json::array();
  for (const CertificateReport& r : reports) {
    Json j;
    j["condition"] = r.condition;
    j["verdict"] = to_string(r.verdict);
    j["lhs"] = json_number(r.lhs);
    j["rhs"] = json_number(r.rhs);
    j["rhs_known"] = r.rhs_known;
    j["margin"] = json_number(r.margin());
    j["sup_provenance"] = r.sup_provenance;
    j["liminf_provenance"] = r.liminf_provenance;
    j["notes"] = r.notes;
    list.push_back(j);
  }
  doc["reports"] = list;
  doc["overall_verdict"] = overall_verdict(reports);
  return doc.dump(2) + "\n";
}

namespace {

void render_monitor_line(std::ostringstream& out, const MonitorSummary& m) {
  out << "  " << (m.pass() ? "pass" : "FAIL") << "  " << m.name << "  worst residual "
      << format_double(m.worst) << "  tol " << format_double(m.tolerance) << "  ("
      << m.samples_checked << " samples";
  if (m.violations > 0) out << ", " << m.violations << " violations";
  out << ")\n";
}

Json monitor_to_json(const MonitorSummary& m) {
  Json j;
  j["name"] = m.name;
  j["pass"] = m.pass();
  j["samples_checked"] = m.samples_checked;
  j["violations"] = m.violations;
  j["worst"] = json_number(m.worst);
  j["tolerance"] = m.tolerance;
  return j;
}

}  // namespace

std::string render_run_text(const Scenario& scenario, const RunOutput& run) {
  std::ostringstream out;
  out << "scenario: " << scenario.name << "\n";
  out << "verdict: " << to_string(run.verdict()) << "\n";
  if (run.multi) {
    out << "samples: " << run.mc.times.size() << "\n";
    if (!run.mc.times.empty()) {
      out << "V_uniform(end) = " << format_double(run.mc.v_uniform_total.back()) << "\n";
      out << "V_capacity(end) = " << format_double(run.mc.v_capacity_total.back()) << "\n";
    }
  } else {
    out << "samples: " << run.single.sample_count() << "\n";
    if (run.single.sample_count() > 0) {
      out << "V_uniform(end) = " << format_double(run.single.v_uniform.back()) << "\n";
      out << "V_capacity(end) = " << format_double(run.single.v_capacity.back()) << "\n";
    }
  }
  const std::vector<MonitorSummary>& monitors = run.monitors();
  if (!monitors.empty()) {
    out << "monitors:\n";
    for (const MonitorSummary& m : monitors) render_monitor_line(out, m);
  }
  return out.str();
}

std::string run_to_json(const Scenario& scenario, const RunOutput& run,
                        const std::vector<std::filesystem::path>& csv_paths,
                        bool with_timestamp) {
  Json doc;
  doc["format"] = "flownet-run";
  doc["format_version"] = 1;
  doc["scenario"] = scenario.name;
  if (with_timestamp) doc["generated_at"] = current_timestamp_utc();
  doc["verdict"] = to_string(run.verdict());
  if (run.multi) {
    doc["samples"] = run.mc.times.size();
    if (!run.mc.times.empty()) {
      doc["v_uniform_end"] = json_number(run.mc.v_uniform_total.back());
      doc["v_capacity_end"] = json_number(run.mc.v_capacity_total.back());
    }
    doc["commodities"] = run.mc.commodity_ids;
  } else {
    doc["samples"] = run.single.sample_count();
    if (run.single.sample_count() > 0) {
      doc["v_uniform_end"] = json_number(run.single.v_uniform.back());
      doc["v_capacity_end"] = json_number(run.single.v_capacity.back());
    }
  }
  Json monitors = Json::array();
  for (const MonitorSummary& m : run.monitors()) monitors.push_back(monitor_to_json(m));
  doc["monitors"] = monitors;
  Json csv = Json::array();
  for (const std::filesystem::path& p : csv_paths) csv.push_back(p.string());
  doc["csv"] = csv;
  return doc.dump(2) + "\n";
}

std::string current_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "failed writing: " + path.string());
}

}  // namespace flownet
