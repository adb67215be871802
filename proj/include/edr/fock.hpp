#pragma once

// Two-mode truncated Fock space and the quantized Stokes operators.
// Basis states |n, m> hold n photons in the x mode and m in the y mode and
// are ordered with n major: index(n, m) = n * (cutoff + 1) + m. Single-photon
// block extraction depends on this ordering.

#include <cmath>
#include <cstddef>

#include "edr/linalg.hpp"

namespace edr {

class FockSpace {
 public:
  // Default cutoff 2: the single-photon sector plus one guard level, so
  // truncation artifacts in the ladder products stay visible in tests.
  explicit FockSpace(std::size_t cutoff = 2) : cutoff_(cutoff), per_mode_(cutoff + 1) {
    if (dim() > kMaxDim) throw InvalidInput("FockSpace: dimension exceeds d_max");
  }

  std::size_t cutoff() const { return cutoff_; }
  std::size_t dim() const { return per_mode_ * per_mode_; }
  std::size_t index(std::size_t n, std::size_t m) const { return n * per_mode_ + m; }

 private:
  std::size_t cutoff_;
  std::size_t per_mode_;
};

enum class FockMode { x, y };

// a|n> = sqrt(n) |n-1> within the truncation; amplitudes above the cutoff are
// dropped, so a^dag annihilates the top level.
inline ComplexMatrix annihilation(const FockSpace& space, FockMode mode) {
  ComplexMatrix a(space.dim(), space.dim());
  const std::size_t top = space.cutoff();
  for (std::size_t n = 0; n <= top; ++n)
    for (std::size_t m = 0; m <= top; ++m) {
      if (mode == FockMode::x && n > 0)
        a(space.index(n - 1, m), space.index(n, m)) = std::sqrt(static_cast<double>(n));
      if (mode == FockMode::y && m > 0)
        a(space.index(n, m - 1), space.index(n, m)) = std::sqrt(static_cast<double>(m));
    }
  return a;
}

inline ComplexMatrix number_operator(const FockSpace& space, FockMode mode) {
  ComplexMatrix n_op(space.dim(), space.dim());
  const std::size_t top = space.cutoff();
  for (std::size_t n = 0; n <= top; ++n)
    for (std::size_t m = 0; m <= top; ++m)
      n_op(space.index(n, m), space.index(n, m)) = mode == FockMode::x
                                                       ? static_cast<double>(n)
                                                       : static_cast<double>(m);
  return n_op;
}

// s0 = nx + ny, s1 = nx - ny, s2 = ax^dag ay + ax ay^dag,
// s3 = -i (ax^dag ay - ax ay^dag).
inline ComplexMatrix stokes_operator(int index, const FockSpace& space) {
  switch (index) {
    case 0:
      return number_operator(space, FockMode::x) + number_operator(space, FockMode::y);
    case 1:
      return number_operator(space, FockMode::x) - number_operator(space, FockMode::y);
    case 2: {
      const ComplexMatrix ax = annihilation(space, FockMode::x);
      const ComplexMatrix ay = annihilation(space, FockMode::y);
      return ax.adjoint() * ay + ax * ay.adjoint();
    }
    case 3: {
      const ComplexMatrix ax = annihilation(space, FockMode::x);
      const ComplexMatrix ay = annihilation(space, FockMode::y);
      return (ax.adjoint() * ay - ax * ay.adjoint()) * cplx{0.0, -1.0};
    }
    default:
      throw InvalidInput("stokes_operator: index must be 0..3");
  }
}

// 2x2 block of an operator in the ordered single-photon basis
// {|1,0> = |H>, |0,1> = |V>}.
inline ComplexMatrix restrict_to_single_photon(const ComplexMatrix& x, const FockSpace& space) {
  if (x.rows() != space.dim() || x.cols() != space.dim())
    throw InvalidInput("restrict_to_single_photon: operator does not match the space");
  if (space.cutoff() < 1)
    throw InvalidInput("restrict_to_single_photon: cutoff 0 has no single-photon sector");
  const std::size_t h = space.index(1, 0);
  const std::size_t v = space.index(0, 1);
  ComplexMatrix out(2, 2);
  out(0, 0) = x(h, h);
  out(0, 1) = x(h, v);
  out(1, 0) = x(v, h);
  out(1, 1) = x(v, v);
  return out;
}

}  // namespace edr
