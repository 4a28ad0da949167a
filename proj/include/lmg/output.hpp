#pragma once

// CSV and manifest writers. Numbers use the shortest decimal that round-trips,
// lines end in LF, and files appear at their final path only when complete.

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lmg/dynamics.hpp"
#include "lmg/protocols.hpp"

namespace lmg {

struct SweepTable;
struct GroupSummary;

struct IoError : Error { using Error::Error; };

inline constexpr std::string_view kToolName = "lmg_adiabat";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kUnitsNote =
    "nu = 1: frequencies in units of the resonator frequency nu, times in 1/nu; "
    "SI inputs converted with nu/2pi from units.nu_over_2pi";

std::string format_number(double x);

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(std::string_view s);

/// Header t_nu,pop_target,pop_target_phase_opt,purity,trace_defect,gap_nu,omega1_nu,omega2_nu.
std::string trajectory_csv(const TrajectoryResult& r);
/// Axis columns in declaration order, then pop_final,pop_final_phase_opt,gap_min,trace_defect_max,status,error.
std::string sweep_csv(const SweepTable& t);
std::string aggregate_csv(const std::vector<GroupSummary>& groups, const std::vector<std::string>& group_by);
std::string reduction_csv(const ReductionReport& r);
std::string ensemble_csv(const EnsembleReport& r);

/// Writes to a sibling temporary file, then renames over `path`. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

void write_csv(const TrajectoryResult& r, const std::filesystem::path& path);
void write_csv(const SweepTable& t, const std::filesystem::path& path);

/// Resolved config, tool version, start time (UTC, ISO 8601) and units note.
nlohmann::ordered_json make_manifest(const nlohmann::ordered_json& resolved_config, std::string_view command,
                                     std::chrono::system_clock::time_point started);

}  // namespace lmg
