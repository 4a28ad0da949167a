#include "lmg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lmg/kernels.hpp"

namespace lmg {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) {
    throw DimMismatch("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                      " is not dim^2 for dim " + std::to_string(dim_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw DimMismatch("ComplexMatrix: rows must form a square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

void ComplexMatrix::hermitize() {
  for (std::size_t r = 0; r < dim_; ++r) {
    (*this)(r, r) = (*this)(r, r).real();
    for (std::size_t c = r + 1; c < dim_; ++c) {
      const cplx avg = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
      (*this)(r, c) = avg;
      (*this)(c, r) = std::conj(avg);
    }
  }
}

void ComplexMatrix::set_zero() { std::fill(data_.begin(), data_.end(), cplx{}); }

namespace {
void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimMismatch(std::string(what) + ": dims " + std::to_string(a.dim()) + " and " +
                      std::to_string(b.dim()));
  }
}
}  // namespace

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_dim(*this, o, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_dim(*this, o, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

void ComplexMatrix::axpy(cplx s, const ComplexMatrix& o) {
  require_same_dim(*this, o, "axpy");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "operator*");
  ComplexMatrix c(a.dim());
  kernels::omp::gemm(a, b, c);
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim(), db = b.dim();
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t mu = 0; mu < db; ++mu)
        for (std::size_t nu = 0; nu < db; ++nu) out(i * db + mu, j * db + nu) = aij * b(mu, nu);
    }
  return out;
}

CVector kron(std::span<const cplx> a, std::span<const cplx> b) {
  CVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t mu = 0; mu < b.size(); ++mu) out[i * b.size() + mu] = a[i] * b[mu];
  return out;
}

CVector matvec(const ComplexMatrix& m, std::span<const cplx> v) {
  if (m.dim() != v.size()) throw DimMismatch("matvec: operator/vector dims differ");
  CVector out(v.size());
  for (std::size_t r = 0; r < m.dim(); ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < m.dim(); ++c) acc += m(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimMismatch("inner: vector dims differ");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm2(std::span<const cplx> v) { return std::sqrt(std::real(inner(v, v))); }

ComplexMatrix outer(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimMismatch("outer: vector dims differ");
  ComplexMatrix m(a.size());
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < b.size(); ++c) m(r, c) = a[r] * std::conj(b[c]);
  return m;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "frobenius_distance");
  double s = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += std::norm(da[i] - db[i]);
  return std::sqrt(s);
}

CVector EigResult::vector(std::size_t k) const {
  CVector v(eigenvectors.dim());
  for (std::size_t r = 0; r < v.size(); ++r) v[r] = eigenvectors(r, k);
  return v;
}

EigResult hermitian_eig(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw DimMismatch("hermitian_eig: empty matrix");
  const double scale = m.frobenius_norm();
  const double defect = m.hermiticity_defect();
  if (defect > 1e-9 * scale) {
    throw NonHermitian("hermitian_eig: hermiticity defect " + std::to_string(defect) +
                       " exceeds 1e-9 * ||m||_F");
  }

  ComplexMatrix a = m;
  a.hermitize();
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) s += std::norm(a(r, c));
    return std::sqrt(2.0 * s);
  };

  const double eps = std::numeric_limits<double>::epsilon();
  const double target = eps * scale;
  const double skip = eps * scale / static_cast<double>(n);
  constexpr int kMaxSweeps = 60;
  bool rotated = true;
  for (int sweep = 0; sweep < kMaxSweeps && rotated && off_norm() > target; ++sweep) {
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= skip || mag == 0.0) continue;
        rotated = true;

        // Phase D = diag(1, e^{-i phi}) makes the pivot real, then a real
        // Jacobi rotation R annihilates it. G = D R acts on columns p, q.
        const cplx phase = apq / mag;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx gpp = c, gpq = s, gqp = -s * std::conj(phase), gqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

}  // namespace lmg
