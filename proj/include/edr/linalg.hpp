#pragma once

// Dense complex linear algebra for small operators (d <= 16 in practice).
// Everything is value-semantic and pure; matrices are immutable once built
// except through explicit element access.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "edr/errors.hpp"

namespace edr {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxDim = 64;  // tensor products beyond this are rejected
inline constexpr double kHermTol = 1e-10;   // max |X - X^dag| accepted as Hermitian

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

  // Row-major brace construction: ComplexMatrix{{a, b}, {c, d}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InvalidInput("ComplexMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  cplx trace() const {
    if (!is_square()) throw InvalidInput("trace: matrix is not square");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  // Largest entry of |X - X^dag|; zero for exactly Hermitian matrices.
  double max_asymmetry() const {
    if (!is_square()) throw InvalidInput("max_asymmetry: matrix is not square");
    double m = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return m;
  }

  bool is_hermitian(double tol = kHermTol) const { return max_asymmetry() <= tol; }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    check_same_shape(rhs, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    check_same_shape(rhs, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(cplx scale) {
    for (cplx& v : data_) v *= scale;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(cplx scale, ComplexMatrix m) { return m *= scale; }
  friend ComplexMatrix operator*(ComplexMatrix m, cplx scale) { return m *= scale; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_)
      throw InvalidInput("operator*: inner dimensions differ (" + std::to_string(a.cols_) +
                         " vs " + std::to_string(b.rows_) + ")");
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx ark = a(r, k);
        if (ark == cplx{0.0, 0.0}) continue;
        for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += ark * b(k, c);
      }
    return out;
  }

 private:
  void check_same_shape(const ComplexMatrix& rhs, const char* who) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw InvalidInput(std::string(who) + ": shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput("max_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

// Kronecker product with index convention (i_a * rows_b + i_b).
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > kMaxDim || cols > kMaxDim)
    throw InvalidInput("tensor_product: result dimension exceeds d_max = " +
                       std::to_string(kMaxDim));
  ComplexMatrix out(rows, cols);
  for (std::size_t ra = 0; ra < a.rows(); ++ra)
    for (std::size_t ca = 0; ca < a.cols(); ++ca) {
      const cplx f = a(ra, ca);
      if (f == cplx{0.0, 0.0}) continue;
      for (std::size_t rb = 0; rb < b.rows(); ++rb)
        for (std::size_t cb = 0; cb < b.cols(); ++cb)
          out(ra * b.rows() + rb, ca * b.cols() + cb) = f * b(rb, cb);
    }
  return out;
}

enum class Keep { first, second };

// Trace over one tensor factor of a square matrix on a d1 x d2 product space.
inline ComplexMatrix partial_trace(const ComplexMatrix& x,
                                   std::pair<std::size_t, std::size_t> subsystem_dims,
                                   Keep keep) {
  const auto [d1, d2] = subsystem_dims;
  if (!x.is_square() || x.rows() != d1 * d2)
    throw InvalidInput("partial_trace: matrix is not square of size d1*d2 = " +
                       std::to_string(d1 * d2));
  if (keep == Keep::first) {
    ComplexMatrix out(d1, d1);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d1; ++j) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < d2; ++k) s += x(i * d2 + k, j * d2 + k);
        out(i, j) = s;
      }
    return out;
  }
  ComplexMatrix out(d2, d2);
  for (std::size_t k = 0; k < d2; ++k)
    for (std::size_t l = 0; l < d2; ++l) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < d1; ++i) s += x(i * d2 + k, i * d2 + l);
      out(k, l) = s;
    }
  return out;
}

struct HermitianEigen {
  std::vector<double> values;  // sorted descending
  ComplexMatrix vectors;       // column k is the unit eigenvector of values[k]
};

// Cyclic Jacobi diagonalization of a Hermitian matrix. Each rotation is the
// closed-form diagonalization of one 2x2 Hermitian block, so a 2x2 input is
// solved exactly in a single rotation. Eigenvectors within a degenerate
// cluster come out orthonormal but with unspecified individual directions.
inline HermitianEigen hermitian_eig(const ComplexMatrix& x) {
  if (!x.is_square()) throw InvalidInput("hermitian_eig: matrix is not square");
  const double asym = x.max_asymmetry();
  if (asym > kHermTol) {
    std::ostringstream msg;
    msg << "hermitian_eig: input is not Hermitian, max |X - X^dag| entry = " << asym;
    throw NumericError(msg.str());
  }
  const std::size_t n = x.rows();

  // Symmetrize to remove sub-tolerance noise before iterating.
  ComplexMatrix a = x;
  {
    ComplexMatrix xd = x.adjoint();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) a(r, c) = 0.5 * (a(r, c) + xd(r, c));
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double off_tol = 1e-14;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off < off_tol) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double absb = std::abs(apq);
        if (absb < 1e-18) continue;
        const cplx phase = apq / absb;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const double tau = (aqq - app) / (2.0 * absb);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Unitary rotation in the (p, q) plane absorbing the phase of a(p, q).
        ComplexMatrix r = ComplexMatrix::identity(n);
        r(p, p) = c;
        r(p, q) = s;
        r(q, p) = -s * std::conj(phase);
        r(q, q) = c * std::conj(phase);

        a = r.adjoint() * (a * r);
        v = v * r;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = std::real(a(i, i));
  std::stable_sort(order.begin(), order.end(),
                   [&diag](std::size_t i, std::size_t j) { return diag[i] > diag[j]; });

  HermitianEigen out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    // Fix the overall phase so the largest component is real and nonnegative.
    std::size_t imax = 0;
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double av = std::abs(v(i, order[k]));
      if (av > vmax) {
        vmax = av;
        imax = i;
      }
    }
    cplx rot = 1.0;
    if (vmax > 0.0) rot = std::conj(v(imax, order[k])) / vmax;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]) * rot;
  }
  return out;
}

// |X| = (X^dag X)^(1/2); Hermitian and positive semidefinite by construction.
// Gram eigenvalues below 1e-13 of the largest are rank noise and are zeroed,
// otherwise the square root would lift them from 1e-16 to 1e-8.
inline ComplexMatrix operator_abs(const ComplexMatrix& x) {
  if (!x.is_square()) throw InvalidInput("operator_abs: matrix is not square");
  const ComplexMatrix gram = x.adjoint() * x;
  const HermitianEigen eig = hermitian_eig(gram);
  const std::size_t n = x.rows();
  const double floor = std::max(eig.values.front(), 0.0) * 1e-13;
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.values[k] <= floor ? 0.0 : std::sqrt(std::max(eig.values[k], 0.0));
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lam * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return out;
}

// Square root of a positive semidefinite Hermitian matrix. Eigenvalues down
// to -neg_tol are treated as zero; anything lower is an error. Eigenvalues
// below 1e-13 of the largest are zeroed as rank noise: the square root would
// otherwise amplify them from 1e-16 to 1e-8.
inline ComplexMatrix sqrt_psd(const ComplexMatrix& x, double neg_tol = 1e-10) {
  const HermitianEigen eig = hermitian_eig(x);
  const std::size_t n = x.rows();
  const double floor = std::max(eig.values.front(), 0.0) * 1e-13;
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.values[k] < -neg_tol) {
      std::ostringstream msg;
      msg << "sqrt_psd: matrix has negative eigenvalue " << eig.values[k];
      throw NumericError(msg.str());
    }
    const double lam = eig.values[k] <= floor ? 0.0 : std::sqrt(eig.values[k]);
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lam * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return out;
}

inline double trace_norm(const ComplexMatrix& x) {
  return std::real(operator_abs(x).trace());
}

}  // namespace edr
