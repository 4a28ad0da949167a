#pragma once

// Dense complex linear algebra for the small operator spaces used throughout
// the simulator (dims up to a few hundred).
//
// Storage is row-major. Kronecker products fuse indices row-major as well:
// kron(a, b)(i*db + mu, j*db + nu) = a(i, j) * b(mu, nu). Every basis label in
// the library follows from this rule, so tensor factor 1 is always the most
// significant index.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmg {

using cplx = std::complex<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DimMismatch : Error { using Error::Error; };
struct NonHermitian : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  static ComplexMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;
  /// max |M - M^dagger| entrywise.
  double hermiticity_defect() const;
  void hermitize();
  void set_zero();

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);
  /// this += s * o
  void axpy(cplx s, const ComplexMatrix& o);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

using CVector = std::vector<cplx>;

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
CVector kron(std::span<const cplx> a, std::span<const cplx> b);

CVector matvec(const ComplexMatrix& m, std::span<const cplx> v);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // <a|b>
double norm2(std::span<const cplx> v);
ComplexMatrix outer(std::span<const cplx> a, std::span<const cplx> b);  // |a><b|
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||a - b||_F. Throws DimMismatch.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]

  CVector vector(std::size_t k) const;
};

/// Cyclic complex Jacobi. Input must be Hermitian to 1e-9 * ||m||_F or
/// NonHermitian is thrown.
EigResult hermitian_eig(const ComplexMatrix& m);

}  // namespace lmg
