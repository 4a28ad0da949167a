// lmg_adiabat: simulate, sweep, spectrum, classify and validate-reduction.
//
// Exit codes: 0 success, 1 partial failure (failed sweep points, a failed
// run or a cutoff check), 2 invalid configuration.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmg/config.hpp"
#include "lmg/model.hpp"
#include "lmg/output.hpp"
#include "lmg/protocols.hpp"
#include "lmg/sweep.hpp"

namespace fs = std::filesystem;
using namespace lmg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitInvalid = 2;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  std::optional<std::size_t> parallel;
  std::optional<std::string> schedule;
  std::optional<double> omega1, omega2, time;
};

Json build_tree(const Options& o) {
  Json tree = o.config_path.empty() ? Json::object() : load_json_file(o.config_path);
  for (const auto& s : o.overrides) apply_override(tree, s);
  if (o.schedule) set_schedule_kind(tree, *o.schedule == "literal" ? ScheduleKind::Literal : ScheduleKind::Calibrated);
  return tree;
}

std::size_t worker_count(const Options& o) {
  if (o.parallel) return *o.parallel;
  if (const char* env = std::getenv("LMG_ADIABAT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring LMG_ADIABAT_THREADS=" << env << "\n";
  }
  return 0;
}

void write_manifest(const Options& o, const Json& resolved, std::string_view command,
                    std::chrono::system_clock::time_point started) {
  write_file_atomic(fs::path(o.out_dir) / "manifest.json",
                    make_manifest(resolved, command, started).dump(2) + "\n");
}

void print_warnings(const std::vector<std::string>& w) {
  for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

int cmd_simulate(const Options& o, const Config& cfg, std::chrono::system_clock::time_point started) {
  const TrajectoryResult r = run_scenario(cfg.scenario);
  write_csv(r, fs::path(o.out_dir) / "trajectory.csv");
  write_manifest(o, serialize(cfg), "simulate", started);
  print_warnings(r.warnings);
  const ScenarioSummary s = summarize(r);
  std::cout << "case " << to_string(cfg.scenario.transfer_case) << ", N = " << cfg.scenario.n_spins
            << ", t_final = " << format_number(cfg.scenario.t_final) << "\n"
            << "final population          " << format_number(s.pop_final) << "\n"
            << "final population (phase)  " << format_number(s.pop_final_phase_opt) << "\n"
            << "minimum gap               " << format_number(s.gap_min) << "\n"
            << "max trace defect          " << format_number(s.trace_defect_max) << "\n";
  return kExitOk;
}

int cmd_sweep(const Options& o, const Json& tree, const Config& cfg, std::chrono::system_clock::time_point started) {
  const SweepGrid grid = SweepGrid::from_tree(tree);
  const SweepTable table = run_sweep(grid, worker_count(o));
  write_csv(table, fs::path(o.out_dir) / "sweep.csv");
  if (!cfg.sweep.group_by.empty()) {
    write_file_atomic(fs::path(o.out_dir) / "sweep_summary.csv",
                      aggregate_csv(aggregate(table, cfg.sweep.group_by), cfg.sweep.group_by));
  }
  write_manifest(o, serialize(cfg), "sweep", started);
  std::cout << table.rows.size() << " points, " << table.failures() << " failed\n";
  for (const auto& row : table.rows)
    if (!row.ok) std::cerr << "point " << row.index << ": " << row.error << "\n";
  return table.failures() == 0 ? kExitOk : kExitPartial;
}

EffectiveCoefficients coefficients_from(const Options& o, const ScenarioConfig& s) {
  const double t = o.time.value_or(s.t_start);
  const double w1 = o.omega1.value_or(s.schedule.omega1(t));
  const double w2 = o.omega2.value_or(s.schedule.omega2(t));
  return effective_coefficients(s.lambda_over_nu, s.delta, w1, w2);
}

void print_regime(const EffectiveCoefficients& c, const LmgRegime& regime) {
  std::cout << "Omega1 = " << format_number(c.omega1) << ", Omega2 = " << format_number(c.omega2) << "\n"
            << "alpha = " << format_number(c.alpha) << ", epsilon = " << format_number(c.epsilon)
            << ", beta1 = " << format_number(c.beta1) << ", beta2 = " << format_number(c.beta2) << "\n"
            << "regime: " << regime.describe() << "\n";
  for (const auto& label : regime.ground_labels) std::cout << "ground state: " << label << "\n";
}

int cmd_classify(const Options& o, const Config& cfg) {
  const auto c = coefficients_from(o, cfg.scenario);
  print_regime(c, classify_lmg(c, cfg.scenario.n_spins));
  return kExitOk;
}

int cmd_spectrum(const Options& o, const Config& cfg, std::chrono::system_clock::time_point started) {
  const std::size_t n = cfg.scenario.n_spins;
  const auto c = coefficients_from(o, cfg.scenario);
  print_regime(c, classify_lmg(c, n));

  const ComplexMatrix h = build_effective_lmg(SpinRegister(n), c);
  const EigResult eig = hermitian_eig(h);
  const double tol = 1e-9 * std::max(h.frobenius_norm(), 1e-300);
  const GroundSpace g = ground_space(h, tol);
  std::cout << "ground energy " << format_number(g.energy) << ", degeneracy " << g.vectors.size()
            << ", gap " << format_number(g.gap) << "\n";

  const LmgOperators sector = LmgOperators::symmetric_sector(n);
  const EigResult sector_eig = hermitian_eig(sector.assemble(c));
  std::string csv = "space,index,energy_nu\n";
  for (std::size_t k = 0; k < sector_eig.eigenvalues.size(); ++k)
    csv += "sector," + std::to_string(k) + ',' + format_number(sector_eig.eigenvalues[k]) + '\n';
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
    csv += "full," + std::to_string(k) + ',' + format_number(eig.eigenvalues[k]) + '\n';
  write_file_atomic(fs::path(o.out_dir) / "spectrum.csv", csv);
  write_manifest(o, serialize(cfg), "spectrum", started);
  return kExitOk;
}

int cmd_validate_reduction(const Options& o, const Config& cfg, std::chrono::system_clock::time_point started) {
  const ReductionReport r = validate_effective_reduction(cfg.reduction);
  write_file_atomic(fs::path(o.out_dir) / "reduction.csv", reduction_csv(r));
  write_manifest(o, serialize(cfg), "validate-reduction", started);
  print_warnings(r.warnings);
  std::cout << "max |<Jz>_full - <Jz>_eff|    " << format_number(r.max_jz_deviation) << "\n"
            << "max |pop_full - pop_eff|      " << format_number(r.max_pop_deviation) << "\n"
            << "cutoff doubling change        " << format_number(r.cutoff_change) << "\n"
            << "Lamb-Dicke (nbar+1) eta^2     " << format_number(r.lamb_dicke) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic preparation of entangled LMG ground states with dephasing"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--set", o.overrides, "Override key=value (repeatable)")->take_all();
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--parallel", o.parallel, "Sweep worker count (falls back to LMG_ADIABAT_THREADS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--schedule", o.schedule, "Drive schedule preset")->check(CLI::IsMember({"literal", "calibrated"}));

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write trajectory.csv");
  auto* sweep = app.add_subcommand("sweep", "Run the sweep grid and write sweep.csv");
  auto* spectrum = app.add_subcommand("spectrum", "Spectrum and ground space of H_eff");
  auto* classify = app.add_subcommand("classify", "Name the LMG regime of H_eff");
  auto* reduction = app.add_subcommand("validate-reduction", "Compare the effective and full models");
  for (auto* sub : {spectrum, classify}) {
    sub->add_option("--omega1", o.omega1, "Omega1 in units of nu (default: schedule value)");
    sub->add_option("--omega2", o.omega2, "Omega2 in units of nu (default: schedule value)");
    sub->add_option("--time", o.time, "Time at which to read the schedule (default: t_start)");
  }

  CLI11_PARSE(app, argc, argv);

  const auto started = std::chrono::system_clock::now();
  Json tree;
  Config cfg;
  try {
    tree = build_tree(o);
    cfg = resolve_config(tree);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*simulate) return cmd_simulate(o, cfg, started);
    if (*sweep) return cmd_sweep(o, tree, cfg, started);
    if (*spectrum) return cmd_spectrum(o, cfg, started);
    if (*classify) return cmd_classify(o, cfg);
    if (*reduction) return cmd_validate_reduction(o, cfg, started);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ResonantDetuning& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitOk;
}
