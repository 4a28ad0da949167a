#pragma once

// Scenario runners for the three transfer cases, the disorder and drive
// dispersion ensembles, and the full-model check of the effective Hamiltonian.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lmg/dynamics.hpp"
#include "lmg/model.hpp"
#include "lmg/states.hpp"

namespace lmg {

/// Lists every violated constraint, one per entry.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

using ConfigInvalid = ValidationError;

struct CutoffTooSmall : Error { using Error::Error; };

enum class ScheduleKind { Calibrated, Literal };
enum class InitialState { Auto, Up, Down };

std::string to_string(ScheduleKind k);
std::string to_string(InitialState s);

struct ScenarioConfig {
  TransferCase transfer_case = TransferCase::I;
  std::size_t n_spins = 4;
  /// Lamb-Dicke parameter eta = lambda / nu.
  double lambda_over_nu = 0.1;
  double delta = -1.1;
  ScheduleKind schedule_kind = ScheduleKind::Calibrated;
  DriveSchedule schedule = DriveSchedule::calibrated();
  /// Homogeneous dephasing rate, used when gamma_per_spin is empty.
  double gamma_dep = 0.0;
  std::vector<double> gamma_per_spin;
  /// Coupling deviations as fractions of lambda; empty means no disorder.
  std::vector<double> disorder;
  double t_start = 0.0;
  double t_final = 4000.0;
  std::size_t samples = 401;
  double step = 0.25;
  double nbar = 20.0;
  /// Auto picks the analytic ground state of H_eff(t_start).
  InitialState initial = InitialState::Auto;
  /// Evolve in the (N+1)-dim maximal-J sector; closed, disorder-free runs only.
  bool fast_path = false;
  /// Free-form labels carried into sweep tables and aggregation.
  std::map<std::string, std::string> tags;

  /// Default detuning -1.1 for case I and +1.1 for II and III; N = 4, 3, 4.
  static ScenarioConfig preset(TransferCase c);
  /// Case I, N = 4, lambda = 0.1, Delta = +0.9: the disorder and dispersion setting.
  static ScenarioConfig robustness_preset();

  std::vector<double> gammas() const;
  std::vector<std::string> violations() const;
  /// Throws ValidationError.
  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

DriveSchedule schedule_for(ScheduleKind kind, double t_final, double zeta);

/// Weight m of the product state the run starts from, with any fallback warnings.
struct InitialChoice {
  double weight = 0.0;
  std::vector<std::string> warnings;
};
InitialChoice resolve_initial_state(const ScenarioConfig& cfg);

/// Evolves the case's initial state and records the series pop_target,
/// pop_target_phase_opt, gap_nu, omega1_nu and omega2_nu. Regime mismatches
/// at t_final and other non-fatal issues land in `warnings`.
TrajectoryResult run_scenario(const ScenarioConfig& cfg);

struct ScenarioSummary {
  double pop_final = 0.0;
  double pop_final_phase_opt = 0.0;
  double gap_min = 0.0;
  double trace_defect_max = 0.0;
  double hermiticity_defect_max = 0.0;
  double min_eigenvalue = 0.0;
  bool operator==(const ScenarioSummary&) const = default;
};

ScenarioSummary summarize(const TrajectoryResult& r);

/// First sample time at which `column` reaches `threshold`.
std::optional<double> time_to_reach(const TrajectoryResult& r, const std::string& column,
                                    double threshold);

struct NamedDisorder {
  std::string label;
  std::string level;
  std::vector<double> fractions;
};

struct DispersionPair {
  std::string label;
  /// Offsets as fractions of zeta.
  double dzeta1 = 0.0;
  double dzeta2 = 0.0;
};

/// Twelve four-spin coupling-deviation profiles at the 5/10/20/30% levels.
std::vector<NamedDisorder> reference_disorder_profiles();
/// No dispersion, three 5% pairs and one 10% pair.
std::vector<DispersionPair> reference_dispersion_pairs();

struct EnsembleMember {
  std::string label;
  ScenarioSummary summary;
  std::vector<std::string> warnings;
};

struct EnsembleReport {
  EnsembleMember baseline;
  std::vector<EnsembleMember> members;
  double min_population = 0.0;
  double max_population = 0.0;
  double mean_population = 0.0;
  double max_deviation_from_baseline = 0.0;
};

/// One run per profile plus a disorder-free baseline, computed in parallel and
/// reported in input order.
EnsembleReport disorder_ensemble(const ScenarioConfig& cfg, const std::vector<NamedDisorder>& profiles);
EnsembleReport dispersion_ensemble(const ScenarioConfig& cfg, const std::vector<DispersionPair>& pairs);

struct ReductionConfig {
  std::size_t n_spins = 2;
  TransferCase transfer_case = TransferCase::I;
  double eta = 0.1;
  double delta = -1.1;
  double nbar = 20.0;
  std::size_t fock_cutoff = 6;
  /// Constant drive amplitudes.
  double omega1 = 0.1;
  double omega2 = 0.1;
  double t_final = 500.0;
  std::size_t samples = 501;
  double step = 0.01;

  std::vector<std::string> violations() const;
  void validate() const;
  bool operator==(const ReductionConfig&) const = default;
};

struct ReductionReport {
  std::vector<double> times;
  std::vector<double> jz_full;
  std::vector<double> jz_eff;
  std::vector<double> pop_full;
  std::vector<double> pop_eff;
  double max_jz_deviation = 0.0;
  double max_pop_deviation = 0.0;
  /// max_t |<J_z>(cutoff) - <J_z>(2 cutoff)|
  double cutoff_change = 0.0;
  double lamb_dicke = 0.0;
  std::vector<std::string> warnings;
};

/// Full spin + resonator Schroedinger run (resonator in vacuum, spins in
/// |m_z = N/2>) against the effective model. Throws CutoffTooSmall when
/// doubling the cutoff moves <J_z> by more than 10% of the reported deviation.
ReductionReport validate_effective_reduction(const ReductionConfig& cfg);

}  // namespace lmg
