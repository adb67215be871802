#pragma once

// Shared test utilities: seeded random states and small independent
// reference routines. The raw_* helpers operate on nested vectors with plain
// loops so they stay independent of the library's matrix path.

#include <complex>
#include <random>
#include <vector>

#include "edr/edr.hpp"

namespace testutil {

using cmat = std::vector<std::vector<std::complex<double>>>;

inline cmat raw_mul(const cmat& a, const cmat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b[0].size();
  cmat out(n, std::vector<std::complex<double>>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < k; ++l) out[i][j] += a[i][l] * b[l][j];
  return out;
}

inline cmat raw_kron(const cmat& a, const cmat& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  cmat out(ar * br, std::vector<std::complex<double>>(ac * bc, 0.0));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t p = 0; p < br; ++p)
        for (std::size_t q = 0; q < bc; ++q) out[i * br + p][j * bc + q] = a[i][j] * b[p][q];
  return out;
}

inline cmat to_raw(const edr::ComplexMatrix& m) {
  cmat out(m.rows(), std::vector<std::complex<double>>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

inline edr::ComplexMatrix from_raw(const cmat& raw) {
  edr::ComplexMatrix out(raw.size(), raw[0].size());
  for (std::size_t r = 0; r < raw.size(); ++r)
    for (std::size_t c = 0; c < raw[0].size(); ++c) out(r, c) = raw[r][c];
  return out;
}

inline double raw_max_diff(const cmat& a, const cmat& b) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a[0].size(); ++c) m = std::max(m, std::abs(a[r][c] - b[r][c]));
  return m;
}

// Haar-uniform pure qubit state from a seeded engine.
inline edr::QubitPure random_pure_state(std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::complex<double> a{normal(gen), normal(gen)};
  std::complex<double> b{normal(gen), normal(gen)};
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  return edr::QubitPure(a / norm, b / norm);
}

inline edr::ComplexMatrix random_hermitian(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  edr::ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    m(r, r) = normal(gen);
    for (std::size_t c = r + 1; c < n; ++c) {
      const edr::cplx v{normal(gen), normal(gen)};
      m(r, c) = v;
      m(c, r) = std::conj(v);
    }
  }
  return m;
}

// Agreement test for RMS quantities. Away from zero this is an absolute
// tolerance on the value; at a vanishing true value the square root of a
// cancellation-limited square carries ~1e-8 of binary64 noise, so the
// comparison falls back to the squares.
inline bool rms_close(double a, double b, double tol = 1e-10, double sq_tol = 1e-12) {
  return std::abs(a - b) <= tol || std::abs(a * a - b * b) <= sq_tol;
}

// Full-rank random density matrix G G^dag / Tr.
inline edr::DensityState random_mixed_state(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  edr::ComplexMatrix g(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) g(r, c) = edr::cplx{normal(gen), normal(gen)};
  edr::ComplexMatrix rho = g * g.adjoint();
  rho *= edr::cplx{1.0 / std::real(rho.trace()), 0.0};
  return edr::DensityState(std::move(rho));
}

}  // namespace testutil
