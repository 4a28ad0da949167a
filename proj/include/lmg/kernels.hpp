#pragma once

// Hot loops of the master-equation integrator. Each kernel has an OpenMP
// version used by the library and a plain serial version kept as the
// reference for tests and benchmarks. Both produce bit-identical results:
// the parallel loops only split independent output rows.

#include <span>
#include <vector>

#include "lmg/linalg.hpp"

namespace lmg::kernels {

/// Rows below this dimension run single-threaded; the fork/join cost
/// dominates for the 2^N <= 16 matrices of most scenarios.
inline constexpr std::size_t kParallelMinDim = 64;

/// Elementwise dephasing factors D(k,l) = -2 * sum of gamma_j over spins j
/// whose z-basis bit differs between k and l. sigma_z^j rho sigma_z^j - rho
/// is diagonal in this Liouville representation, so the whole dissipator is
/// D o rho.
std::vector<double> dephasing_mask(std::size_t n_spins, std::span<const double> gammas);

namespace serial {

void gemm(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c);

/// -i[H, rho] + sum_j gamma_j (sigma_z^j rho sigma_z^j - rho), written out
/// term by term with explicit embedded Pauli matrices.
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           std::span<const double> gammas);

}  // namespace serial

namespace omp {

void gemm(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& c);

/// out = -i(H rho - (H rho)^dagger) + mask o rho. Valid for Hermitian H and
/// rho; `scratch` holds H rho.
void lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h, std::span<const double> mask,
                  ComplexMatrix& scratch, ComplexMatrix& out);

}  // namespace omp

}  // namespace lmg::kernels
