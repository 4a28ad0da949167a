#pragma once

// Hamiltonians of the collective NV-spin system. All frequencies are in
// units of the resonator frequency nu (nu = 1) and times in 1/nu.
//
//   H_eff = alpha (eps b1 b2 J_z + b1^2 J_x^2 + b2^2 J_y^2)
//   alpha = 2 eta^2 Delta / (Delta^2 - 1),  eps = 2 / (alpha Delta)
//   b1 = Omega1 - Omega2,  b2 = Omega1 + Omega2
//
// The product alpha * eps = 2 / Delta is finite even at eta = 0, so the
// builders use it directly instead of multiplying alpha by eps.

#include <optional>
#include <string>
#include <vector>

#include "lmg/linalg.hpp"
#include "lmg/operators.hpp"
#include "lmg/states.hpp"

namespace lmg {

struct ResonantDetuning : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };

struct EffectiveCoefficients {
  double eta = 0.0;
  double delta = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;  // +-inf when eta = 0
  double beta1 = 0.0;
  double beta2 = 0.0;

  /// Coefficient of J_z: alpha * eps * b1 * b2.
  double jz_coefficient() const { return 2.0 / delta * beta1 * beta2; }
};

/// Throws ResonantDetuning when |Delta| = 1 within 1e-9 and InvalidParameter for eta < 0.
EffectiveCoefficients effective_coefficients(double eta, double delta, double omega1, double omega2);

/// Precomputed J_z, J_x^2, J_y^2 so that H_eff can be reassembled cheaply at
/// every integrator stage. Either the full 2^N space or the (N+1)-dim
/// maximal-J sector (basis m = J, ..., -J as in SymmetricSector).
class LmgOperators {
 public:
  static LmgOperators full_space(std::size_t n);
  static LmgOperators symmetric_sector(std::size_t n);

  std::size_t n_spins() const { return n_; }
  std::size_t dim() const { return jz_.dim(); }
  const ComplexMatrix& jz() const { return jz_; }
  const ComplexMatrix& jx2() const { return jx2_; }
  const ComplexMatrix& jy2() const { return jy2_; }

  /// out = H_eff(c); out must already have dim().
  void assemble(const EffectiveCoefficients& c, ComplexMatrix& out) const;
  ComplexMatrix assemble(const EffectiveCoefficients& c) const;

 private:
  LmgOperators(std::size_t n, ComplexMatrix jz, ComplexMatrix jx2, ComplexMatrix jy2)
      : n_(n), jz_(std::move(jz)), jx2_(std::move(jx2)), jy2_(std::move(jy2)) {}
  std::size_t n_;
  ComplexMatrix jz_, jx2_, jy2_;
};

ComplexMatrix build_effective_lmg(const SpinRegister& reg, const EffectiveCoefficients& c);

/// Per-spin coupling deviations dl_j = fraction_j * lambda, with lambda = eta * nu.
/// Ising coefficients M_j = eta * dl_j / 4 (units of nu).
struct DisorderProfile {
  std::vector<double> delta_lambda_fraction;
  double eta = 0.0;

  /// Throws InvalidParameter when any |fraction| > 0.5.
  void validate() const;
  std::vector<double> ising_coefficients() const;
  bool is_zero() const;
};

/// -sum_j M_j sigma_z^j J_z. Throws LengthMismatch.
ComplexMatrix build_disorder_term(const SpinRegister& reg, const DisorderProfile& d);

/// (nbar + 1) eta^2; the reduction needs it << 1.
double lamb_dicke_indicator(double nbar, double eta);
inline constexpr double kLambDickeWarnThreshold = 0.1;

struct FullModelParams {
  std::size_t n_spins = 1;
  std::size_t fock_cutoff = 6;
  double eta = 0.0;
  double delta = 0.0;
  double nbar = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  /// Optional per-spin Lamb-Dicke parameters replacing eta in the sideband terms.
  std::vector<double> eta_per_spin;

  double lamb_dicke() const { return lamb_dicke_indicator(nbar, eta); }
};

/// Interaction-picture spin + resonator Hamiltonian on spin (x) Fock space,
///   H(t) = K(t) + K(t)^dagger,
///   K(t) = (Omega1 e^{i Delta t} + Omega2 e^{-i Delta t})
///          sum_j sigma_+^j [1 + eta_j (a^dagger e^{it} - a e^{-it})].
class FullModel {
 public:
  explicit FullModel(const FullModelParams& p);

  std::size_t dim() const { return carrier_.dim(); }
  const FullModelParams& params() const { return p_; }
  void hamiltonian(double t, double omega1, double omega2, ComplexMatrix& out) const;
  /// J_z (x) I_Fock
  const ComplexMatrix& spin_jz() const { return jz_; }
  /// Partial trace over the resonator of |psi><psi|.
  ComplexMatrix reduced_spin_state(std::span<const cplx> psi) const;

 private:
  FullModelParams p_;
  ComplexMatrix carrier_, blue_, red_, jz_;
};

ComplexMatrix build_full_interaction_hamiltonian(const FullModelParams& p, double t);

struct IsotropicLevel {
  double m = 0.0;
  double energy = 0.0;
};

/// alpha b^2 [eps m - m^2 + J(J+1)] for m = -J..J, J = N/2, ascending m.
std::vector<IsotropicLevel> isotropic_spectrum(std::size_t n, double alpha_beta2, double epsilon);

enum class LmgForm { Isotropic, OneAxisX, OneAxisY, General };
enum class Magnetism { Ferromagnetic, Antiferromagnetic, None };

std::string to_string(LmgForm f);
std::string to_string(Magnetism m);

struct LmgRegime {
  LmgForm form = LmgForm::General;
  Magnetism magnetism = Magnetism::None;
  /// Analytic ground states in the z basis of the full register. Empty when
  /// the form has no closed-form ground state.
  std::vector<StateVector> ground_states;
  std::vector<std::string> ground_labels;
  bool unique() const { return ground_states.size() == 1; }
  std::string describe() const;
};

/// Form from the b1, b2 pattern with relative tolerance `tol`: isotropic when
/// |b1| = |b2| (Omega1 or Omega2 zero), one-axis-y when b1 = 0, one-axis-x when
/// b2 = 0. FI iff alpha < 0, AFI iff alpha > 0.
LmgRegime classify_lmg(const EffectiveCoefficients& c, std::size_t n, double tol = 1e-3);

}  // namespace lmg
