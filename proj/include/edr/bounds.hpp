#pragma once

// Error-disturbance and preparation uncertainty relations for one
// (epsilon, eta, sigma(A), sigma(B), C) tuple, plus the commutator bounds.
// A relation holds when lhs >= rhs - 1e-10.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "edr/instruments.hpp"
#include "edr/linalg.hpp"
#include "edr/qubit.hpp"

namespace edr {

enum class Relation {
  kennard_robertson,
  heisenberg_ed,
  ozawa0,
  ozawa,
  branciard1,
  branciard1a,
  branciard2,
  busch_qubit,
  buscemi_qubit,
};

inline const std::vector<Relation>& all_relations() {
  static const std::vector<Relation> all{
      Relation::kennard_robertson, Relation::heisenberg_ed, Relation::ozawa0,
      Relation::ozawa,             Relation::branciard1,    Relation::branciard1a,
      Relation::branciard2,        Relation::busch_qubit,   Relation::buscemi_qubit};
  return all;
}

inline const char* relation_name(Relation r) {
  switch (r) {
    case Relation::kennard_robertson: return "kennard_robertson";
    case Relation::heisenberg_ed: return "heisenberg_ed";
    case Relation::ozawa0: return "ozawa0";
    case Relation::ozawa: return "ozawa";
    case Relation::branciard1: return "branciard1";
    case Relation::branciard1a: return "branciard1a";
    case Relation::branciard2: return "branciard2";
    case Relation::busch_qubit: return "busch_qubit";
    case Relation::buscemi_qubit: return "buscemi_qubit";
  }
  return "?";
}

inline std::string valid_relation_names() {
  std::string names;
  for (Relation r : all_relations()) {
    if (!names.empty()) names += ", ";
    names += relation_name(r);
  }
  return names;
}

inline Relation relation_from_name(const std::string& name) {
  for (Relation r : all_relations())
    if (name == relation_name(r)) return r;
  throw InvalidInput("unknown relation '" + name + "' (valid: " + valid_relation_names() + ")");
}

inline constexpr double kSlackTol = 1e-10;

struct EdrReport {
  Relation relation;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;        // lhs - rhs
  bool satisfied = false;    // slack >= -1e-10
  bool out_of_model = false; // inputs outside the relation's model, clamped
};

// C = |<[A, B]>| / 2.
inline double commutator_bound_C(const Observable& a, const Observable& b,
                                 const DensityState& rho) {
  if (a.dim() != rho.dim() || b.dim() != rho.dim())
    throw InvalidInput("commutator_bound_C: dimension mismatch");
  return 0.5 * std::abs(rho.expectation_c(commutator(a.matrix(), b.matrix())));
}

// D = Tr| sqrt(rho) [A, B] sqrt(rho) | / 2; equals C on pure states and
// tightens the Branciard bounds for mixed ones.
inline double mixed_bound_D(const Observable& a, const Observable& b, const DensityState& rho) {
  if (a.dim() != rho.dim() || b.dim() != rho.dim())
    throw InvalidInput("mixed_bound_D: dimension mismatch");
  const ComplexMatrix root = sqrt_psd(rho.matrix());
  const double d = 0.5 * trace_norm(root * commutator(a.matrix(), b.matrix()) * root);
  const double c = commutator_bound_C(a, b, rho);
  if (d < c - 1e-10)
    throw NumericError("mixed_bound_D: D = " + std::to_string(d) + " fell below C = " +
                       std::to_string(c));
  return d;
}

// Left-hand side of the first universally valid relation:
//   eps eta + |<[N(A), B]> + <[A, D(B)]>| / 2,
// evaluated on the joint signal-probe input state.
inline double ozawa0_lhs(const HeisenbergPair& pair, const Observable& a, const Observable& b,
                         const DensityState& joint) {
  const std::size_t d = joint.dim();
  if (pair.na.rows() != d) throw InvalidInput("ozawa0_lhs: dimension mismatch");
  const std::size_t probe_dim = d / a.dim();
  const ComplexMatrix a_joint = tensor_product(a.matrix(), ComplexMatrix::identity(probe_dim));
  const ComplexMatrix b_joint = tensor_product(b.matrix(), ComplexMatrix::identity(probe_dim));
  const double eps = detail::rms_from_square(joint.expectation(pair.na * pair.na), "ozawa0_lhs");
  const double eta = detail::rms_from_square(joint.expectation(pair.db * pair.db), "ozawa0_lhs");
  const cplx corr = joint.expectation_c(commutator(pair.na, b_joint)) +
                    joint.expectation_c(commutator(a_joint, pair.db));
  return eps * eta + 0.5 * std::abs(corr);
}

struct RelationInputs {
  double eps = 0.0;
  double eta = 0.0;
  double sigma_a = 1.0;
  double sigma_b = 1.0;
  double c_bound = 1.0;  // C, or D for mixed signal states
  std::array<double, 3> bloch_a{0.0, 0.0, 1.0};
  std::array<double, 3> bloch_b{1.0, 0.0, 0.0};
  // Commutator correction |<[N(A), B]> + <[A, D(B)]>| / 2; required by ozawa0.
  std::optional<double> ozawa0_correction;
};

namespace detail {
inline double vec_norm(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}
}  // namespace detail

inline EdrReport evaluate_relation(Relation relation, const RelationInputs& in) {
  if (in.eps < 0.0 || in.eta < 0.0 || in.sigma_a < 0.0 || in.sigma_b < 0.0 || in.c_bound < 0.0)
    throw InvalidInput("evaluate_relation: inputs must be nonnegative");
  EdrReport report;
  report.relation = relation;
  switch (relation) {
    case Relation::kennard_robertson:
      report.lhs = in.sigma_a * in.sigma_b;
      report.rhs = in.c_bound;
      break;
    case Relation::heisenberg_ed:
      report.lhs = in.eps * in.eta;
      report.rhs = in.c_bound;
      break;
    case Relation::ozawa0: {
      if (!in.ozawa0_correction)
        throw InvalidInput("evaluate_relation: ozawa0 needs the commutator correction term");
      report.lhs = in.eps * in.eta + *in.ozawa0_correction;
      report.rhs = in.c_bound;
      break;
    }
    case Relation::ozawa:
      report.lhs = in.eps * in.eta + in.eps * in.sigma_b + in.sigma_a * in.eta;
      report.rhs = in.c_bound;
      break;
    case Relation::branciard1: {
      const double ss = in.sigma_a * in.sigma_a * in.sigma_b * in.sigma_b;
      const double radicand = ss - in.c_bound * in.c_bound;
      if (radicand < -1e-10)
        throw InvalidInput("evaluate_relation: branciard1 needs sigma(A) sigma(B) >= C");
      report.lhs = in.eps * in.eps * in.sigma_b * in.sigma_b +
                   in.sigma_a * in.sigma_a * in.eta * in.eta +
                   2.0 * in.eps * in.eta * std::sqrt(std::max(radicand, 0.0));
      report.rhs = in.c_bound * in.c_bound;
      break;
    }
    case Relation::branciard1a:
      report.lhs = in.eps * in.sigma_b + in.sigma_a * in.eta;
      report.rhs = in.c_bound;
      break;
    case Relation::branciard2: {
      if (in.c_bound > 1.0 + 1e-12)
        throw InvalidInput("evaluate_relation: branciard2 needs C <= 1");
      // Valid for +/-1 spectra, where eps, eta <= 2; noisy estimates beyond 2
      // clamp the tilde map and flag the report instead of failing the sweep.
      double rad_e = 1.0 - in.eps * in.eps / 4.0;
      double rad_n = 1.0 - in.eta * in.eta / 4.0;
      if (rad_e < 0.0 || rad_n < 0.0) report.out_of_model = true;
      const double eps_t = in.eps * std::sqrt(std::max(rad_e, 0.0));
      const double eta_t = in.eta * std::sqrt(std::max(rad_n, 0.0));
      const double root = std::sqrt(std::max(1.0 - in.c_bound * in.c_bound, 0.0));
      report.lhs = eps_t * eps_t + eta_t * eta_t + 2.0 * eps_t * eta_t * root;
      report.rhs = in.c_bound * in.c_bound;
      break;
    }
    case Relation::busch_qubit: {
      const double na = detail::vec_norm(in.bloch_a);
      const double nb = detail::vec_norm(in.bloch_b);
      if (std::abs(na - 1.0) > 1e-8 || std::abs(nb - 1.0) > 1e-8)
        throw InvalidInput("evaluate_relation: busch_qubit needs unit Bloch vectors");
      std::array<double, 3> diff{}, sum{};
      for (int i = 0; i < 3; ++i) {
        diff[i] = in.bloch_a[i] - in.bloch_b[i];
        sum[i] = in.bloch_a[i] + in.bloch_b[i];
      }
      report.lhs = in.eps * in.eps + in.eta * in.eta;
      report.rhs = std::sqrt(2.0) * (detail::vec_norm(diff) + detail::vec_norm(sum) - 2.0);
      break;
    }
    case Relation::buscemi_qubit: {
      report.lhs = (in.eps * in.eps + 1.0 / 3.0) * (in.eta * in.eta + 1.0 / 3.0);
      const double r = 4.0 / (M_PI * M_E);
      report.rhs = r * r;
      break;
    }
  }
  report.slack = report.lhs - report.rhs;
  report.satisfied = report.slack >= -kSlackTol;
  return report;
}

}  // namespace edr
