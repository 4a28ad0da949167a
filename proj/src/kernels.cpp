#include "lmg/kernels.hpp"

#include <bit>
#include <string>

namespace lmg::kernels {

namespace {

std::size_t spins_for_dim(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw DimMismatch("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return static_cast<std::size_t>(std::countr_zero(dim));
}

}  // namespace

std::vector<double> dephasing_mask(std::size_t n_spins, std::span<const double> gammas) {
  if (gammas.size() != n_spins) {
    throw DimMismatch("dephasing_mask: " + std::to_string(gammas.size()) + " rates for " +
                      std::to_string(n_spins) + " spins");
  }
  const std::size_t dim = std::size_t{1} << n_spins;
  std::vector<double> mask(dim * dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t l = 0; l < dim; ++l) {
      const std::size_t diff = k ^ l;
      double rate = 0.0;
      for (std::size_t j = 0; j < n_spins; ++j) {
        // spin j (0-based) is bit n-1-j: factor 1 is the most significant
        if ((diff >> (n_spins - 1 - j)) & 1U) rate += gammas[j];
      }
      mask[k * dim + l] = -2.0 * rate;
    }
  return mask;
}

namespace serial {

void gemm(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           std::span<const double> gammas) {
  if (rho.dim() != h.dim()) throw DimMismatch("lindblad_rhs: rho and H dims differ");
  const std::size_t n = rho.dim();
  ComplexMatrix hr(n), rh(n);
  gemm(h, rho, hr);
  gemm(rho, h, rh);
  ComplexMatrix out = (hr - rh) * cplx{0.0, -1.0};

  const std::size_t n_spins = spins_for_dim(n);
  if (gammas.size() != n_spins) throw DimMismatch("lindblad_rhs: one rate per spin required");
  const ComplexMatrix sz{{1.0, 0.0}, {0.0, -1.0}};
  for (std::size_t j = 0; j < n_spins; ++j) {
    if (gammas[j] == 0.0) continue;
    ComplexMatrix op = ComplexMatrix::identity(1);
    for (std::size_t f = 0; f < n_spins; ++f) op = kron(op, f == j ? sz : ComplexMatrix::identity(2));
    ComplexMatrix tmp(n), sandwich(n);
    gemm(op, rho, tmp);
    gemm(tmp, op, sandwich);
    out.axpy(gammas[j], sandwich - rho);
  }
  return out;
}

}  // namespace serial

namespace omp {

void gemm(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c) {
  const std::size_t n = a.dim();
  const cplx* pa = a.data().data();
  const cplx* pb = b.data().data();
  cplx* pc = c.data().data();
#pragma omp parallel for schedule(static) if (n >= kParallelMinDim)
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = pc + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = pa[i * n + k];
      const cplx* brow = pb + k * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += aik * brow[j];
    }
  }
}

void lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h, std::span<const double> mask,
                  ComplexMatrix& scratch, ComplexMatrix& out) {
  const std::size_t n = rho.dim();
  gemm(h, rho, scratch);
  const cplx* hr = scratch.data().data();
  const cplx* pr = rho.data().data();
  cplx* po = out.data().data();
  const bool dissipative = !mask.empty();
#pragma omp parallel for schedule(static) if (n >= kParallelMinDim)
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      // [H, rho] = H rho - (H rho)^dagger for Hermitian H, rho
      const cplx comm = hr[r * n + c] - std::conj(hr[c * n + r]);
      cplx v{comm.imag(), -comm.real()};
      if (dissipative) v += mask[r * n + c] * pr[r * n + c];
      po[r * n + c] = v;
    }
  }
}

}  // namespace omp

}  // namespace lmg::kernels
