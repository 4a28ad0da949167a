#include "lmg/operators.hpp"

#include <cmath>

namespace lmg {

SpinRegister::SpinRegister(std::size_t n_spins) : n_(n_spins) {
  if (n_spins < 1 || n_spins > 10) {
    throw IndexOutOfRange("SpinRegister: n_spins must be in [1, 10], got " + std::to_string(n_spins));
  }
}

FockSpace::FockSpace(std::size_t cutoff) : cutoff_(cutoff) {
  if (cutoff < 2) throw IndexOutOfRange("FockSpace: cutoff must be >= 2");
}

ComplexMatrix pauli(Pauli which) {
  const cplx i{0.0, 1.0};
  switch (which) {
    case Pauli::X: return {{0.0, 1.0}, {1.0, 0.0}};
    case Pauli::Y: return {{0.0, -i}, {i, 0.0}};
    case Pauli::Z: return {{1.0, 0.0}, {0.0, -1.0}};
    case Pauli::Plus: return {{0.0, 1.0}, {0.0, 0.0}};
    case Pauli::Minus: return {{0.0, 0.0}, {1.0, 0.0}};
  }
  return {};
}

ComplexMatrix embed_single_spin(const SpinRegister& reg, std::size_t j, Pauli which) {
  if (j < 1 || j > reg.n_spins()) {
    throw IndexOutOfRange("embed_single_spin: spin index " + std::to_string(j) + " outside 1.." +
                          std::to_string(reg.n_spins()));
  }
  const ComplexMatrix id2 = ComplexMatrix::identity(2);
  const ComplexMatrix op = pauli(which);
  ComplexMatrix out = j == 1 ? op : id2;
  for (std::size_t f = 2; f <= reg.n_spins(); ++f) out = kron(out, f == j ? op : id2);
  return out;
}

ComplexMatrix collective_operator(const SpinRegister& reg, Collective which) {
  if (which == Collective::TotalSquared) {
    const auto jx = collective_operator(reg, Collective::X);
    const auto jy = collective_operator(reg, Collective::Y);
    const auto jz = collective_operator(reg, Collective::Z);
    return jx * jx + jy * jy + jz * jz;
  }
  Pauli p = Pauli::Z;
  double factor = 0.5;
  switch (which) {
    case Collective::X: p = Pauli::X; break;
    case Collective::Y: p = Pauli::Y; break;
    case Collective::Z: p = Pauli::Z; break;
    case Collective::Plus: p = Pauli::Plus; factor = 1.0; break;
    case Collective::Minus: p = Pauli::Minus; factor = 1.0; break;
    case Collective::TotalSquared: break;
  }
  ComplexMatrix out(reg.dim());
  for (std::size_t j = 1; j <= reg.n_spins(); ++j) out.axpy(factor, embed_single_spin(reg, j, p));
  return out;
}

ComplexMatrix y_basis_factor() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, s}, {cplx{0.0, s}, cplx{0.0, -s}}};
}

ComplexMatrix x_basis_factor() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, s}, {s, -s}};
}

namespace {
ComplexMatrix tensor_power(const ComplexMatrix& f, std::size_t n) {
  ComplexMatrix out = f;
  for (std::size_t k = 1; k < n; ++k) out = kron(out, f);
  return out;
}
}  // namespace

ComplexMatrix y_basis_transform(const SpinRegister& reg) {
  return tensor_power(y_basis_factor(), reg.n_spins());
}

ComplexMatrix x_basis_transform(const SpinRegister& reg) {
  return tensor_power(x_basis_factor(), reg.n_spins());
}

ComplexMatrix boson_operator(const FockSpace& f, Boson which) {
  const std::size_t d = f.cutoff();
  ComplexMatrix a(d);
  for (std::size_t k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  switch (which) {
    case Boson::Annihilate: return a;
    case Boson::Create: return a.adjoint();
    case Boson::Number: {
      ComplexMatrix n(d);
      for (std::size_t k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
      return n;
    }
  }
  return a;
}

std::string spin_label(const SpinRegister& reg, std::size_t index) {
  std::string s = "|";
  for (std::size_t j = 0; j < reg.n_spins(); ++j) {
    const bool down = (index >> (reg.n_spins() - 1 - j)) & 1U;
    s += down ? "↓" : "↑";
  }
  return s + "⟩";
}

}  // namespace lmg
