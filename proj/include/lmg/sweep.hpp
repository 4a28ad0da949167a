#pragma once

// Cartesian parameter grids over scenario configs, run in parallel with
// results restored to grid order.

#include <map>
#include <string>
#include <vector>

#include "lmg/config.hpp"
#include "lmg/protocols.hpp"

namespace lmg {

struct UnknownAxis : Error { using Error::Error; };

struct SweepGrid {
  /// Config tree every point starts from; its sweep section is ignored.
  Json base = Json::object();
  std::vector<SweepAxis> axes;
  std::size_t cap = 10000;

  static SweepGrid from_tree(const Json& tree);

  /// Product of the axis lengths; 1 for no axes.
  std::size_t size() const;
  /// Throws ConfigInvalid for an empty axis, a duplicate axis name or size() > cap.
  void validate() const;
  /// Config tree of point `index`, first axis varying slowest.
  Json point_tree(std::size_t index) const;
  std::vector<std::size_t> coordinates(std::size_t index) const;
};

struct SweepRow {
  std::size_t index = 0;
  std::vector<std::string> axis_labels;
  std::map<std::string, std::string> tags;
  ScenarioSummary summary;
  bool ok = false;
  std::string error;
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> rows;

  std::size_t failures() const;
};

/// Runs every point with `workers` threads (0 = OpenMP default). Per-point
/// failures are recorded in the row, never dropped.
SweepTable run_sweep(const SweepGrid& grid, std::size_t workers);

struct GroupSummary {
  std::vector<std::string> key;
  std::size_t rows = 0;
  std::size_t failed = 0;
  double pop_min = 0.0;
  double pop_max = 0.0;
  double pop_mean = 0.0;
  double pop_phase_opt_mean = 0.0;
};

/// Groups rows by axis names or "tags.<key>", in order of first appearance.
/// Statistics cover successful rows. Throws UnknownAxis.
std::vector<GroupSummary> aggregate(const SweepTable& table, const std::vector<std::string>& group_by);

}  // namespace lmg
