#include "lmg/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include <omp.h>

namespace lmg {

SweepGrid SweepGrid::from_tree(const Json& tree) {
  const Config cfg = resolve_config(tree);
  SweepGrid g;
  g.base = tree;
  g.base.erase("sweep");
  g.axes = cfg.sweep.axes;
  g.cap = cfg.sweep.cap;
  return g;
}

std::size_t SweepGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) {
    if (a.values.empty()) return 0;
    if (n > std::numeric_limits<std::size_t>::max() / a.values.size()) return std::numeric_limits<std::size_t>::max();
    n *= a.values.size();
  }
  return n;
}

void SweepGrid::validate() const {
  std::vector<std::string> v;
  std::set<std::string> names;
  for (const auto& a : axes) {
    if (a.values.empty()) v.push_back("sweep axis " + a.name + " has no values");
    if (!names.insert(a.name).second) v.push_back("sweep axis " + a.name + " is declared twice");
  }
  if (size() > cap) {
    v.push_back("sweep grid has " + std::to_string(size()) + " points, above the cap of " + std::to_string(cap));
  }
  if (!v.empty()) throw ConfigInvalid(std::move(v));
}

std::vector<std::size_t> SweepGrid::coordinates(std::size_t index) const {
  std::vector<std::size_t> c(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    c[k] = index % axes[k].values.size();
    index /= axes[k].values.size();
  }
  return c;
}

Json SweepGrid::point_tree(std::size_t index) const {
  Json tree = base;
  const auto c = coordinates(index);
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const Json o = axes[k].overrides(c[k]);
    for (const auto& [key, value] : o.items()) set_path(tree, key, value);
  }
  return tree;
}

std::size_t SweepTable::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok; }));
}

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ';');
  return s;
}

}  // namespace

SweepTable run_sweep(const SweepGrid& grid, std::size_t workers) {
  grid.validate();
  SweepTable table;
  for (const auto& a : grid.axes) table.axis_names.push_back(a.name);
  const std::size_t n = grid.size();
  table.rows.resize(n);
  const int threads = workers == 0 ? omp_get_max_threads() : static_cast<int>(workers);

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i) {
    SweepRow& row = table.rows[i];
    row.index = i;
    const auto c = grid.coordinates(i);
    for (std::size_t k = 0; k < grid.axes.size(); ++k) row.axis_labels.push_back(grid.axes[k].label(c[k]));
    try {
      const Config cfg = resolve_config(grid.point_tree(i));
      row.tags = cfg.scenario.tags;
      row.summary = summarize(run_scenario(cfg.scenario));
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = one_line(e.what());
    }
  }
  return table;
}

std::vector<GroupSummary> aggregate(const SweepTable& table, const std::vector<std::string>& group_by) {
  std::vector<std::function<std::string(const SweepRow&)>> keys;
  for (const auto& name : group_by) {
    auto it = std::find(table.axis_names.begin(), table.axis_names.end(), name);
    if (it != table.axis_names.end()) {
      const std::size_t k = static_cast<std::size_t>(it - table.axis_names.begin());
      keys.push_back([k](const SweepRow& r) { return r.axis_labels[k]; });
    } else if (name.starts_with("tags.") && name.size() > 5) {
      const std::string tag = name.substr(5);
      keys.push_back([tag](const SweepRow& r) {
        auto t = r.tags.find(tag);
        return t == r.tags.end() ? std::string() : t->second;
      });
    } else {
      throw UnknownAxis("aggregate: no axis or tag named " + name);
    }
  }

  std::vector<GroupSummary> groups;
  std::vector<double> sums, sums_phase;
  for (const auto& row : table.rows) {
    std::vector<std::string> key;
    for (const auto& f : keys) key.push_back(f(row));
    auto it = std::find_if(groups.begin(), groups.end(), [&](const GroupSummary& g) { return g.key == key; });
    if (it == groups.end()) {
      GroupSummary g;
      g.key = key;
      g.pop_min = std::numeric_limits<double>::infinity();
      g.pop_max = -std::numeric_limits<double>::infinity();
      groups.push_back(std::move(g));
      sums.push_back(0.0);
      sums_phase.push_back(0.0);
      it = groups.end() - 1;
    }
    const std::size_t gi = static_cast<std::size_t>(it - groups.begin());
    ++it->rows;
    if (!row.ok) {
      ++it->failed;
      continue;
    }
    it->pop_min = std::min(it->pop_min, row.summary.pop_final);
    it->pop_max = std::max(it->pop_max, row.summary.pop_final);
    sums[gi] += row.summary.pop_final;
    sums_phase[gi] += row.summary.pop_final_phase_opt;
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& g = groups[gi];
    const std::size_t ok = g.rows - g.failed;
    if (ok == 0) {
      g.pop_min = g.pop_max = g.pop_mean = g.pop_phase_opt_mean = std::numeric_limits<double>::quiet_NaN();
    } else {
      g.pop_mean = sums[gi] / static_cast<double>(ok);
      g.pop_phase_opt_mean = sums_phase[gi] / static_cast<double>(ok);
    }
  }
  return groups;
}

}  // namespace lmg
