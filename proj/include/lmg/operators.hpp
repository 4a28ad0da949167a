#pragma once

// Spin and boson operators on the N-spin register and the truncated Fock
// space of the resonator.
//
// Basis convention: within each spin factor index 0 is |up> (the NV |-1>
// level) and index 1 is |down> (the |0> level), so sigma_z = diag(1, -1).
// Factor j = 1 is the most significant bit of the register index. A z-basis
// label k therefore decodes to the spin string read left to right from the
// binary digits of k, e.g. k = 0b0110 for N = 4 is |up down down up>.

#include <cstddef>
#include <string>

#include "lmg/linalg.hpp"

namespace lmg {

class SpinRegister {
 public:
  explicit SpinRegister(std::size_t n_spins);
  std::size_t n_spins() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }

 private:
  std::size_t n_;
};

class FockSpace {
 public:
  explicit FockSpace(std::size_t cutoff);
  std::size_t cutoff() const { return cutoff_; }

 private:
  std::size_t cutoff_;
};

enum class Pauli { X, Y, Z, Plus, Minus };
enum class Collective { X, Y, Z, Plus, Minus, TotalSquared };
enum class Boson { Annihilate, Create, Number };

ComplexMatrix pauli(Pauli which);

/// sigma_which on factor j (1-based), identity elsewhere. sigma_+- = (sigma_x +- i sigma_y)/2.
ComplexMatrix embed_single_spin(const SpinRegister& reg, std::size_t j, Pauli which);

/// J_z = sum sigma_z/2, J_x, J_y likewise; J_+- = sum sigma_+-; J^2 = Jx^2 + Jy^2 + Jz^2.
ComplexMatrix collective_operator(const SpinRegister& reg, Collective which);

/// Single-factor unitary whose columns are |+>_y = (|up> + i|down>)/sqrt2 and
/// |->_y = (|up> - i|down>)/sqrt2.
ComplexMatrix y_basis_factor();
/// Columns |+>_x = (|up> + |down>)/sqrt2, |->_x = (|up> - |down>)/sqrt2.
ComplexMatrix x_basis_factor();

/// Tensor power of y_basis_factor: maps the z-basis string with bit pattern k
/// onto the y-basis string with the same pattern (+ for bit 0, - for bit 1).
/// U^dagger J_y U = J_z.
ComplexMatrix y_basis_transform(const SpinRegister& reg);
ComplexMatrix x_basis_transform(const SpinRegister& reg);

/// a(k-1, k) = sqrt(k); a^dagger; n = a^dagger a.
ComplexMatrix boson_operator(const FockSpace& f, Boson which);

/// Spin string for a z-basis index, e.g. "|↑↓↓↑⟩".
std::string spin_label(const SpinRegister& reg, std::size_t index);

}  // namespace lmg
