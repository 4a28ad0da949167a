#include "lmg/output.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "lmg/sweep.hpp"

namespace lmg {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw IoError("format_number: conversion failed");
  return std::string(buf, end);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string trajectory_csv(const TrajectoryResult& r) {
  static const char* kSeries[] = {"pop_target", "pop_target_phase_opt", "gap_nu", "omega1_nu", "omega2_nu"};
  std::vector<const std::vector<double>*> cols;
  for (const char* name : kSeries) cols.push_back(r.has_column(name) ? &r.column(name) : nullptr);
  auto at = [](const std::vector<double>* c, std::size_t i) {
    return c && i < c->size() ? format_number((*c)[i]) : std::string("nan");
  };

  std::string out = "t_nu,pop_target,pop_target_phase_opt,purity,trace_defect,gap_nu,omega1_nu,omega2_nu\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out += format_number(r.times[i]);
    out += ',' + at(cols[0], i);
    out += ',' + at(cols[1], i);
    out += ',' + at(&r.purity, i);
    out += ',' + at(&r.trace_defect, i);
    out += ',' + at(cols[2], i);
    out += ',' + at(cols[3], i);
    out += ',' + at(cols[4], i);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const SweepTable& t) {
  std::string out;
  for (const auto& name : t.axis_names) out += csv_field(name) + ',';
  out += "pop_final,pop_final_phase_opt,gap_min,trace_defect_max,status,error\n";
  for (const auto& row : t.rows) {
    for (const auto& label : row.axis_labels) out += csv_field(label) + ',';
    if (row.ok) {
      out += format_number(row.summary.pop_final) + ',' + format_number(row.summary.pop_final_phase_opt) + ',' +
             format_number(row.summary.gap_min) + ',' + format_number(row.summary.trace_defect_max) + ",ok,";
    } else {
      out += ",,,,failed," + csv_field(row.error);
    }
    out += '\n';
  }
  return out;
}

std::string aggregate_csv(const std::vector<GroupSummary>& groups, const std::vector<std::string>& group_by) {
  std::string out;
  for (const auto& name : group_by) out += csv_field(name) + ',';
  out += "rows,failed,pop_min,pop_max,pop_mean,pop_phase_opt_mean\n";
  for (const auto& g : groups) {
    for (const auto& k : g.key) out += csv_field(k) + ',';
    out += std::to_string(g.rows) + ',' + std::to_string(g.failed) + ',' + format_number(g.pop_min) + ',' +
           format_number(g.pop_max) + ',' + format_number(g.pop_mean) + ',' + format_number(g.pop_phase_opt_mean) +
           '\n';
  }
  return out;
}

std::string reduction_csv(const ReductionReport& r) {
  std::string out = "t_nu,jz_full,jz_eff,pop_full,pop_eff\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out += format_number(r.times[i]) + ',' + format_number(r.jz_full[i]) + ',' + format_number(r.jz_eff[i]) + ',' +
           format_number(r.pop_full[i]) + ',' + format_number(r.pop_eff[i]) + '\n';
  }
  return out;
}

std::string ensemble_csv(const EnsembleReport& r) {
  std::string out = "label,pop_final,pop_final_phase_opt,gap_min,trace_defect_max\n";
  auto line = [&](const EnsembleMember& m) {
    out += csv_field(m.label) + ',' + format_number(m.summary.pop_final) + ',' +
           format_number(m.summary.pop_final_phase_opt) + ',' + format_number(m.summary.gap_min) + ',' +
           format_number(m.summary.trace_defect_max) + '\n';
  };
  line(r.baseline);
  for (const auto& m : r.members) line(m);
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError(tmp.string() + ": write failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(path.string() + ": rename failed");
  }
}

void write_csv(const TrajectoryResult& r, const std::filesystem::path& path) {
  write_file_atomic(path, trajectory_csv(r));
}

void write_csv(const SweepTable& t, const std::filesystem::path& path) { write_file_atomic(path, sweep_csv(t)); }

nlohmann::ordered_json make_manifest(const nlohmann::ordered_json& resolved_config, std::string_view command,
                                     std::chrono::system_clock::time_point started) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(started);
  std::tm utc{};
  gmtime_r(&tt, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  nlohmann::ordered_json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["command"] = command;
  m["started_at"] = stamp;
  m["units"] = kUnitsNote;
  m["config"] = resolved_config;
  return m;
}

}  // namespace lmg
