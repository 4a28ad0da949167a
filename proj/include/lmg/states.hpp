#pragma once

// Pure and mixed states of the spin register: Dicke states in the z, x and y
// bases, the three adiabatic target states, ground spaces and populations.
//
// Dicke states carry nonnegative real amplitudes in their defining basis. The
// relative phases of the target states (e^{i pi J}, i) are applied on top of
// that convention.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmg/linalg.hpp"
#include "lmg/operators.hpp"

namespace lmg {

struct InvalidState : Error { using Error::Error; };
struct InvalidWeight : Error { using Error::Error; };
struct ParityMismatch : Error { using Error::Error; };

class StateVector {
 public:
  StateVector() = default;
  /// Throws InvalidState unless ||amplitudes|| = 1 to 1e-12.
  explicit StateVector(CVector amplitudes);
  /// Rescales to unit norm; throws InvalidState for the zero vector.
  static StateVector normalized(CVector amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amp_.size(); }
  const CVector& amplitudes() const { return amp_; }
  std::span<const cplx> span() const { return amp_; }
  cplx operator[](std::size_t i) const { return amp_[i]; }

 private:
  CVector amp_;
};

class DensityMatrix {
 public:
  /// Validates trace = 1 (1e-9), hermiticity (1e-10) and min eigenvalue >= -1e-8.
  explicit DensityMatrix(ComplexMatrix rho);
  static DensityMatrix pure(const StateVector& psi);

  const ComplexMatrix& matrix() const { return rho_; }
  std::size_t dim() const { return rho_.dim(); }
  double trace() const { return trace_; }
  double hermiticity_defect() const { return herm_defect_; }
  double purity() const;

 private:
  ComplexMatrix rho_;
  double trace_ = 0.0;
  double herm_defect_ = 0.0;
};

double purity(const ComplexMatrix& rho);
double min_eigenvalue(const ComplexMatrix& rho);

enum class SpinBasis { Z, X, Y };

/// Symmetric (J = N/2) eigenstate of J_z, J_x or J_y with weight m.
/// Throws InvalidWeight unless |m| <= N/2 and N/2 - m is an integer.
StateVector dicke_state(std::size_t n, double m, SpinBasis basis = SpinBasis::Z);

/// Orthonormal basis |J=N/2, m> of the maximal-J sector in the z basis,
/// ordered m = J, J-1, ..., -J. Projects full-space objects into the
/// (N+1)-dimensional sector representation and back.
class SymmetricSector {
 public:
  explicit SymmetricSector(std::size_t n);

  std::size_t n_spins() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  /// Weight m for sector index k.
  double weight(std::size_t k) const { return 0.5 * static_cast<double>(n_) - static_cast<double>(k); }
  const StateVector& state(std::size_t k) const { return basis_[k]; }

  CVector project(std::span<const cplx> full) const;        // W^dagger psi
  CVector embed(std::span<const cplx> sector) const;        // W c
  ComplexMatrix project(const ComplexMatrix& full) const;   // W^dagger A W

 private:
  std::size_t n_;
  std::vector<StateVector> basis_;
};

enum class TransferCase { I, II, III };

std::string to_string(TransferCase c);

/// I: (|m_y=J> + e^{i pi J}|m_y=-J>)/sqrt2; II: (|m_y=1/2> + i|m_y=-1/2>)/sqrt2
/// (odd N); III: |m_y=0> (even N). Throws ParityMismatch.
StateVector target_state(TransferCase c, std::size_t n);

/// The two degenerate branches whose relative phase the phase-optimized
/// population maximizes over (cases I and II only).
std::optional<std::pair<StateVector, StateVector>> target_branches(TransferCase c, std::size_t n);

struct GroundSpace {
  double energy = 0.0;
  std::vector<CVector> vectors;
  /// Distance from the ground band to the next level; +inf when none exists.
  double gap = 0.0;
};

/// All eigenvectors within degeneracy_tol of the lowest eigenvalue.
GroundSpace ground_space(const ComplexMatrix& h, double degeneracy_tol);

/// Re <psi|rho|psi>, clamped to [0, 1]. Throws DimMismatch.
double population(const ComplexMatrix& rho, const StateVector& psi);
double population(const DensityMatrix& rho, const StateVector& psi);

/// max over phi of <psi(phi)|rho|psi(phi)> with psi(phi) = (|a> + e^{i phi}|b>)/sqrt2,
/// which is (rho_aa + rho_bb)/2 + |rho_ab|.
double phase_optimized_population(const ComplexMatrix& rho, const StateVector& a,
                                  const StateVector& b);

/// Tr(P_a P_b) / max(rank a, rank b) for the projectors onto the spans of two
/// orthonormal families. 1 iff the spans coincide.
double projector_overlap(const std::vector<CVector>& a, const std::vector<CVector>& b);

}  // namespace lmg
