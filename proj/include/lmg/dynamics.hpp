#pragma once

// Time evolution: drive schedules, the dephasing master equation
//   d rho/dt = -i[H(t), rho] + sum_j gamma_j (sigma_z^j rho sigma_z^j - rho)
// integrated with fixed-step classical RK4, and the adiabatic gap profile.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lmg/linalg.hpp"
#include "lmg/model.hpp"
#include "lmg/states.hpp"

namespace lmg {

struct StepFailure : Error { using Error::Error; };
struct InvalidInitialState : Error { using Error::Error; };

/// Omega_k(t) = (zeta + dzeta_k) [1 + tanh((t - t0_k) / ramp_k)].
struct DriveSchedule {
  double zeta = 0.3;
  double ramp1 = 2000.0;
  double ramp2 = 1500.0;
  double t0_1 = 0.0;
  double t0_2 = 0.0;
  double dzeta1 = 0.0;
  double dzeta2 = 0.0;

  double omega1(double t) const;
  double omega2(double t) const;
  bool operator==(const DriveSchedule&) const = default;

  /// The printed schedules: both ramps centered at t = 0, widths 2000 and 1500.
  static DriveSchedule literal(double zeta = 0.3);
  /// Omega1 held at 2 zeta; Omega2 ramps from ~0 (2e-4 zeta) to 2 zeta,
  /// centered at t_final / 2 with width t_final / 8, so the run starts in
  /// the isotropic form and ends in the one-axis-twisting form.
  static DriveSchedule calibrated(double t_final = 4000.0, double zeta = 0.3);
};

/// Center offset used to pin a ramp at its final value for the whole window.
inline constexpr double kHeldRampOffset = -1.0e6;
/// evolve warns when a checked sample has an eigenvalue below -kPositivityTolerance.
inline constexpr double kPositivityTolerance = 1e-7;

/// Writes H(t) into `out`, which has the operator dimension.
using HamiltonianProvider = std::function<void(double t, ComplexMatrix& out)>;

struct LindbladSpec {
  std::size_t dim = 0;
  HamiltonianProvider hamiltonian;
  /// One rate per spin (nu units); empty means closed evolution. Requires
  /// dim = 2^gammas.size() when non-empty.
  std::vector<double> gammas;
};

/// -i[H, rho] + sum_j gamma_j D[sigma_z^j] rho. Throws DimMismatch.
ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const ComplexMatrix& h,
                           std::span<const double> gammas);
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           std::span<const double> gammas);

/// Scalar recorded at every sample.
struct Probe {
  std::string name;
  std::function<double(double t, const ComplexMatrix& rho)> evaluate;
};

struct EvolveOptions {
  double t_start = 0.0;
  double t_end = 0.0;
  /// Number of sample times, uniformly spaced and including both endpoints.
  std::size_t samples = 2;
  double step = 0.25;
  /// Samples at which the minimum eigenvalue of rho is checked.
  std::size_t positivity_checks = 10;
  std::vector<Probe> probes;
};

struct Series {
  std::string name;
  std::vector<double> values;
};

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<double> purity;
  std::vector<double> trace_defect;
  /// ||rho - rho^dagger||_F before the re-Hermitization of the step ending at each sample.
  std::vector<double> hermiticity_defect;
  std::vector<Series> series;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  std::vector<std::string> warnings;
  ComplexMatrix final_state;

  /// Throws std::out_of_range for unknown names.
  const std::vector<double>& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  double max_trace_defect() const;
  double max_hermiticity_defect() const;
};

TrajectoryResult evolve(const LindbladSpec& spec, const DensityMatrix& rho0,
                        const EvolveOptions& options);

/// RK4 Schroedinger propagation of psi from t0 to t1 with steps no larger than `step`.
void propagate_pure(const HamiltonianProvider& h, CVector& psi, double t0, double t1, double step);

struct AdiabaticPoint {
  double t = 0.0;
  double gap = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
};

struct AdiabaticityProfile {
  std::vector<AdiabaticPoint> points;
  double min_gap = std::numeric_limits<double>::infinity();
  double t_min_gap = 0.0;
  double duration = 0.0;
  /// duration * min_gap; adiabatic following needs this >> 1.
  double margin() const { return duration * min_gap; }
};

/// Instantaneous gap of H_eff in the block the dynamics can reach from the
/// Dicke state |m_z = initial_weight>: the maximal-J sector restricted to the
/// conserved z-parity class (H_eff only couples m to m and m +- 2).
double symmetry_resolved_gap(const LmgOperators& sector_ops, const EffectiveCoefficients& c,
                             double initial_weight);

AdiabaticityProfile adiabaticity_profile(const DriveSchedule& schedule, std::size_t n, double eta,
                                         double delta, std::span<const double> times,
                                         double initial_weight);

}  // namespace lmg
