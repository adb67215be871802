#pragma once

// Polarization qubit states and observables. Basis ordering is fixed as
// {|H>, |V>} = {(1,0), (0,1)} everywhere.

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "edr/linalg.hpp"

namespace edr {

inline ComplexMatrix identity2() { return ComplexMatrix::identity(2); }

inline ComplexMatrix sigma_x() {
  return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
}

inline ComplexMatrix sigma_y() {
  return ComplexMatrix{{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}};
}

inline ComplexMatrix sigma_z() {
  return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
}

inline ComplexMatrix pauli_by_name(const std::string& name) {
  if (name == "sigma_x") return sigma_x();
  if (name == "sigma_y") return sigma_y();
  if (name == "sigma_z") return sigma_z();
  throw InvalidInput("unknown observable name '" + name +
                     "' (valid: sigma_x, sigma_y, sigma_z)");
}

// Pure polarization state alpha|H> + beta|V>, normalized to 1e-12.
struct QubitPure {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};

  QubitPure() = default;
  QubitPure(cplx a, cplx b) : alpha(a), beta(b) {
    const double norm2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm2 - 1.0) > 1e-12)
      throw InvalidInput("QubitPure: amplitudes are not normalized");
  }

  ComplexMatrix ket() const {
    ComplexMatrix k(2, 1);
    k(0, 0) = alpha;
    k(1, 0) = beta;
    return k;
  }

  ComplexMatrix projector() const {
    ComplexMatrix p(2, 2);
    p(0, 0) = alpha * std::conj(alpha);
    p(0, 1) = alpha * std::conj(beta);
    p(1, 0) = beta * std::conj(alpha);
    p(1, 1) = beta * std::conj(beta);
    return p;
  }
};

// The six standard kets. Phase convention: alpha real and nonnegative.
inline QubitPure standard_state(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "H") return QubitPure(1.0, 0.0);
  if (name == "V") return QubitPure(0.0, 1.0);
  if (name == "D") return QubitPure(r, r);
  if (name == "A") return QubitPure(r, -r);
  if (name == "L") return QubitPure(r, cplx{0.0, r});
  if (name == "R") return QubitPure(r, cplx{0.0, -r});
  throw InvalidInput("unknown state name '" + name + "' (valid: H, V, D, A, L, R)");
}

// Density operator: Hermitian, unit trace, positive semidefinite
// (each within 1e-10).
class DensityState {
 public:
  explicit DensityState(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (!rho_.is_square()) throw InvalidInput("DensityState: matrix is not square");
    if (rho_.max_asymmetry() > 1e-10)
      throw NumericError("DensityState: matrix is not Hermitian");
    if (std::abs(rho_.trace() - cplx{1.0, 0.0}) > 1e-10)
      throw NumericError("DensityState: trace differs from 1");
    const HermitianEigen eig = hermitian_eig(rho_);
    if (eig.values.back() < -1e-10)
      throw NumericError("DensityState: negative eigenvalue " +
                         std::to_string(eig.values.back()));
  }

  static DensityState pure(const QubitPure& psi) { return DensityState(psi.projector()); }

  static DensityState maximally_mixed(std::size_t dim) {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= cplx{1.0 / static_cast<double>(dim), 0.0};
    return DensityState(std::move(m));
  }

  std::size_t dim() const { return rho_.rows(); }
  const ComplexMatrix& matrix() const { return rho_; }

  cplx expectation_c(const ComplexMatrix& op) const {
    if (op.rows() != dim() || op.cols() != dim())
      throw InvalidInput("expectation: operator dimension mismatch");
    return (rho_ * op).trace();
  }

  // Re Tr[rho op]; the full expectation value for Hermitian op.
  double expectation(const ComplexMatrix& op) const { return std::real(expectation_c(op)); }

 private:
  ComplexMatrix rho_;
};

inline DensityState tensor_state(const DensityState& a, const DensityState& b) {
  return DensityState(tensor_product(a.matrix(), b.matrix()));
}

// (<sigma_x>, <sigma_y>, <sigma_z>) of a qubit state.
inline std::array<double, 3> bloch_vector(const DensityState& rho) {
  if (rho.dim() != 2) throw InvalidInput("bloch_vector: state dimension is not 2");
  return {rho.expectation(sigma_x()), rho.expectation(sigma_y()), rho.expectation(sigma_z())};
}

// Hermitian observable with its spectral decomposition. Eigenvalues within
// 1e-8 of each other are merged into one spectral projector, so degenerate
// sectors are always handled through projectors rather than individual
// eigenvectors.
class Observable {
 public:
  explicit Observable(ComplexMatrix m, std::string name = "") : mat_(std::move(m)), name_(std::move(name)) {
    if (!mat_.is_square()) throw InvalidInput("Observable: matrix is not square");
    if (mat_.max_asymmetry() > kHermTol)
      throw NumericError("Observable: matrix is not Hermitian");
    const HermitianEigen eig = hermitian_eig(mat_);
    const std::size_t n = mat_.rows();
    std::size_t k = 0;
    while (k < n) {
      std::size_t end = k + 1;
      while (end < n && std::abs(eig.values[end] - eig.values[k]) < 1e-8) ++end;
      double lam = 0.0;
      ComplexMatrix proj(n, n);
      for (std::size_t j = k; j < end; ++j) {
        lam += eig.values[j];
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c)
            proj(r, c) += eig.vectors(r, j) * std::conj(eig.vectors(c, j));
      }
      spectrum_.push_back(lam / static_cast<double>(end - k));
      projectors_.push_back(std::move(proj));
      k = end;
    }
    // Completeness and reconstruction sanity.
    ComplexMatrix sum(n, n);
    ComplexMatrix rec(n, n);
    for (std::size_t j = 0; j < projectors_.size(); ++j) {
      sum += projectors_[j];
      rec += projectors_[j] * cplx{spectrum_[j], 0.0};
    }
    if (max_diff(sum, ComplexMatrix::identity(n)) > 1e-10 || max_diff(rec, mat_) > 1e-10)
      throw NumericError("Observable: spectral decomposition failed to reconstruct");
  }

  std::size_t dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& spectrum() const { return spectrum_; }
  const std::vector<ComplexMatrix>& projectors() const { return projectors_; }

  static Observable of_pauli(const std::string& name) { return Observable(pauli_by_name(name), name); }

 private:
  ComplexMatrix mat_;
  std::string name_;
  std::vector<double> spectrum_;          // distinct eigenvalues, descending
  std::vector<ComplexMatrix> projectors_; // matching spectral projectors
};

inline double stddev(const Observable& obs, const DensityState& rho) {
  if (obs.dim() != rho.dim()) throw InvalidInput("stddev: dimension mismatch");
  const double m2 = rho.expectation(obs.matrix() * obs.matrix());
  const double m1 = rho.expectation(obs.matrix());
  const double var = m2 - m1 * m1;
  if (var < -1e-12) throw NumericError("stddev: negative variance " + std::to_string(var));
  return std::sqrt(std::max(var, 0.0));
}

// Bloch unit vector of a +/-1 qubit observable (needed for the Busch bound).
inline std::array<double, 3> bloch_of_observable(const Observable& obs) {
  if (obs.dim() != 2) throw InvalidInput("bloch_of_observable: observable is not a qubit");
  if (obs.spectrum().size() != 2 || std::abs(obs.spectrum()[0] - 1.0) > 1e-10 ||
      std::abs(obs.spectrum()[1] + 1.0) > 1e-10)
    throw InvalidInput("bloch_of_observable: spectrum is not {+1, -1}");
  const ComplexMatrix& a = obs.matrix();
  return {0.5 * std::real((sigma_x() * a).trace()), 0.5 * std::real((sigma_y() * a).trace()),
          0.5 * std::real((sigma_z() * a).trace())};
}

// State literals for config files: a standard name ("L") or explicit
// amplitudes "[re,im],[re,im]". Explicit amplitudes may be off-normalized by
// up to 1e-6 and are rescaled exactly.
inline QubitPure parse_state_literal(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw InvalidInput("state literal is empty");
  if (s.size() == 1) return standard_state(s);

  double re0, im0, re1, im1;
  char tail = '\0';
  const int got =
      std::sscanf(s.c_str(), "[%lf,%lf],[%lf,%lf]%c", &re0, &im0, &re1, &im1, &tail);
  if (got != 4) throw InvalidInput("cannot parse state literal '" + text +
                                   "' (expected a name like L or [re,im],[re,im])");
  const double norm2 = re0 * re0 + im0 * im0 + re1 * re1 + im1 * im1;
  if (std::abs(norm2 - 1.0) > 1e-6)
    throw InvalidInput("state literal '" + text + "' is not normalized");
  const double scale = 1.0 / std::sqrt(norm2);
  return QubitPure(cplx{re0 * scale, im0 * scale}, cplx{re1 * scale, im1 * scale});
}

}  // namespace edr
