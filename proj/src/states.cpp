#include "lmg/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace lmg {

StateVector::StateVector(CVector amplitudes) : amp_(std::move(amplitudes)) {
  const double nrm = norm2(amp_);
  if (std::abs(nrm - 1.0) > 1e-12) {
    throw InvalidState("StateVector: norm " + std::to_string(nrm) + " is not 1");
  }
}

StateVector StateVector::normalized(CVector amplitudes) {
  const double nrm = norm2(amplitudes);
  if (nrm == 0.0) throw InvalidState("StateVector: cannot normalize the zero vector");
  for (auto& z : amplitudes) z /= nrm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw IndexOutOfRange("StateVector::basis: index outside dimension");
  CVector v(dim);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

double purity(const ComplexMatrix& rho) {
  // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho
  double s = 0.0;
  for (const auto& z : rho.data()) s += std::norm(z);
  return s;
}

double min_eigenvalue(const ComplexMatrix& rho) {
  ComplexMatrix h = rho;
  h.hermitize();
  return hermitian_eig(h).eigenvalues.front();
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  trace_ = rho_.trace().real();
  herm_defect_ = rho_.hermiticity_defect();
  if (std::abs(trace_ - 1.0) > 1e-9 || std::abs(rho_.trace().imag()) > 1e-9) {
    throw InvalidState("DensityMatrix: trace " + std::to_string(trace_) + " is not 1");
  }
  if (herm_defect_ > 1e-10) throw InvalidState("DensityMatrix: not Hermitian");
  if (min_eigenvalue(rho_) < -1e-8) throw InvalidState("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(outer(psi.span(), psi.span()));
}

double DensityMatrix::purity() const { return lmg::purity(rho_); }

namespace {

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

std::size_t lowering_count(std::size_t n, double m) {
  const double j = 0.5 * static_cast<double>(n);
  const double k = j - m;
  if (std::abs(m) > j + 1e-12 || std::abs(k - std::round(k)) > 1e-9) {
    throw InvalidWeight("dicke_state: weight " + std::to_string(m) + " invalid for N = " +
                        std::to_string(n));
  }
  return static_cast<std::size_t>(std::llround(k));
}

CVector dicke_z(std::size_t n, std::size_t downs) {
  const std::size_t dim = std::size_t{1} << n;
  const double amp = 1.0 / std::sqrt(binomial(n, downs));
  CVector v(dim);
  for (std::size_t k = 0; k < dim; ++k)
    if (static_cast<std::size_t>(std::popcount(k)) == downs) v[k] = amp;
  return v;
}

}  // namespace

StateVector dicke_state(std::size_t n, double m, SpinBasis basis) {
  const SpinRegister reg(n);
  const CVector z = dicke_z(n, lowering_count(n, m));
  switch (basis) {
    case SpinBasis::Z: return StateVector(z);
    case SpinBasis::X: return StateVector(matvec(x_basis_transform(reg), z));
    case SpinBasis::Y: return StateVector(matvec(y_basis_transform(reg), z));
  }
  return StateVector(z);
}

SymmetricSector::SymmetricSector(std::size_t n) : n_(n) {
  SpinRegister reg(n);
  basis_.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) basis_.emplace_back(dicke_z(n, k));
}

CVector SymmetricSector::project(std::span<const cplx> full) const {
  CVector out(dim());
  for (std::size_t k = 0; k < dim(); ++k) out[k] = inner(basis_[k].span(), full);
  return out;
}

CVector SymmetricSector::embed(std::span<const cplx> sector) const {
  if (sector.size() != dim()) throw DimMismatch("SymmetricSector::embed: wrong sector dim");
  CVector out(basis_.front().dim());
  for (std::size_t k = 0; k < dim(); ++k)
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += sector[k] * basis_[k][r];
  return out;
}

ComplexMatrix SymmetricSector::project(const ComplexMatrix& full) const {
  if (full.dim() != basis_.front().dim()) throw DimMismatch("SymmetricSector::project: wrong dim");
  ComplexMatrix out(dim());
  for (std::size_t c = 0; c < dim(); ++c) {
    const CVector col = matvec(full, basis_[c].span());
    for (std::size_t r = 0; r < dim(); ++r) out(r, c) = inner(basis_[r].span(), col);
  }
  return out;
}

std::string to_string(TransferCase c) {
  switch (c) {
    case TransferCase::I: return "I";
    case TransferCase::II: return "II";
    case TransferCase::III: return "III";
  }
  return "?";
}

namespace {
void check_parity(TransferCase c, std::size_t n) {
  if (c == TransferCase::II && n % 2 == 0) throw ParityMismatch("case II requires odd N");
  if (c == TransferCase::III && n % 2 == 1) throw ParityMismatch("case III requires even N");
}

StateVector superpose(const StateVector& a, cplx phase, const StateVector& b) {
  CVector v(a.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (a[i] + phase * b[i]) / std::sqrt(2.0);
  return StateVector::normalized(std::move(v));
}
}  // namespace

std::optional<std::pair<StateVector, StateVector>> target_branches(TransferCase c, std::size_t n) {
  check_parity(c, n);
  const double j = 0.5 * static_cast<double>(n);
  switch (c) {
    case TransferCase::I:
      return std::pair{dicke_state(n, j, SpinBasis::Y), dicke_state(n, -j, SpinBasis::Y)};
    case TransferCase::II:
      return std::pair{dicke_state(n, 0.5, SpinBasis::Y), dicke_state(n, -0.5, SpinBasis::Y)};
    case TransferCase::III: return std::nullopt;
  }
  return std::nullopt;
}

StateVector target_state(TransferCase c, std::size_t n) {
  check_parity(c, n);
  const double j = 0.5 * static_cast<double>(n);
  switch (c) {
    case TransferCase::I: {
      auto [up, down] = *target_branches(c, n);
      return superpose(up, std::polar(1.0, std::numbers::pi * j), down);
    }
    case TransferCase::II: {
      auto [up, down] = *target_branches(c, n);
      return superpose(up, cplx{0.0, 1.0}, down);
    }
    case TransferCase::III: return dicke_state(n, 0.0, SpinBasis::Y);
  }
  return {};
}

GroundSpace ground_space(const ComplexMatrix& h, double degeneracy_tol) {
  const EigResult eig = hermitian_eig(h);
  GroundSpace g;
  g.energy = eig.eigenvalues.front();
  g.gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    if (eig.eigenvalues[k] - g.energy <= degeneracy_tol) {
      g.vectors.push_back(eig.vector(k));
    } else {
      g.gap = eig.eigenvalues[k] - g.energy;
      break;
    }
  }
  return g;
}

namespace {
double clamp_population(double p) {
  return std::clamp(std::clamp(p, -1e-9, 1.0 + 1e-9), 0.0, 1.0);
}

cplx matrix_element(const ComplexMatrix& rho, std::span<const cplx> a, std::span<const cplx> b) {
  if (rho.dim() != a.size() || rho.dim() != b.size()) {
    throw DimMismatch("population: state and density matrix dims differ");
  }
  return inner(a, matvec(rho, b));
}
}  // namespace

double population(const ComplexMatrix& rho, const StateVector& psi) {
  return clamp_population(matrix_element(rho, psi.span(), psi.span()).real());
}

double population(const DensityMatrix& rho, const StateVector& psi) {
  return population(rho.matrix(), psi);
}

double phase_optimized_population(const ComplexMatrix& rho, const StateVector& a,
                                  const StateVector& b) {
  const double raa = matrix_element(rho, a.span(), a.span()).real();
  const double rbb = matrix_element(rho, b.span(), b.span()).real();
  const double rab = std::abs(matrix_element(rho, a.span(), b.span()));
  return clamp_population(0.5 * (raa + rbb) + rab);
}

double projector_overlap(const std::vector<CVector>& a, const std::vector<CVector>& b) {
  if (a.empty() || b.empty()) return 0.0;
  double s = 0.0;
  for (const auto& u : a)
    for (const auto& v : b) s += std::norm(inner(u, v));
  return s / static_cast<double>(std::max(a.size(), b.size()));
}

}  // namespace lmg
