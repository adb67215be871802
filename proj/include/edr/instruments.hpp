#pragma once

// Measurement devices: projective measurement, the PBS acting as a CNOT
// between polarization and path, the strength-variable VPBS, its circuit
// model, and the generic indirect measurement model with noise and
// disturbance operators.
//
// Tensor layouts put the signal first: index = i_signal * probe_dim + i_probe.
// The path qubit basis {|+1>, |-1>} maps to probe indices {0, 1}.

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "edr/linalg.hpp"
#include "edr/qubit.hpp"

namespace edr {

struct Outcome {
  std::string label;
  double value;
};

// Outcome values paired with measurement (Kraus) operators on the signal
// space. POVM elements E_m = M_m^dag M_m are derived at construction and the
// completeness and positivity invariants are enforced.
class Instrument {
 public:
  Instrument(std::vector<Outcome> outcomes, std::vector<ComplexMatrix> kraus,
             double strength = std::numeric_limits<double>::quiet_NaN())
      : outcomes_(std::move(outcomes)), kraus_(std::move(kraus)), strength_(strength) {
    if (outcomes_.empty() || outcomes_.size() != kraus_.size())
      throw InvalidInput("Instrument: outcomes and kraus operators must pair up");
    const std::size_t d = kraus_.front().rows();
    ComplexMatrix sum(d, d);
    for (const ComplexMatrix& m : kraus_) {
      if (!m.is_square() || m.rows() != d)
        throw InvalidInput("Instrument: kraus operators must be square and same-sized");
      ComplexMatrix e = m.adjoint() * m;
      sum += e;
      povm_.push_back(std::move(e));
    }
    if (max_diff(sum, ComplexMatrix::identity(d)) > 1e-10)
      throw NumericError("Instrument: POVM elements do not sum to the identity");
    for (const ComplexMatrix& e : povm_) {
      const HermitianEigen eig = hermitian_eig(e);
      if (eig.values.back() < -1e-10)
        throw NumericError("Instrument: POVM element is not positive semidefinite");
    }
  }

  std::size_t dim() const { return kraus_.front().rows(); }
  std::size_t n_outcomes() const { return outcomes_.size(); }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  const std::vector<ComplexMatrix>& povm() const { return povm_; }
  double strength() const { return strength_; }

 private:
  std::vector<Outcome> outcomes_;
  std::vector<ComplexMatrix> kraus_;
  std::vector<ComplexMatrix> povm_;
  double strength_;
};

inline std::string value_label(double v) {
  if (v == 1.0) return "+1";
  if (v == -1.0) return "-1";
  std::ostringstream os;
  os << v;
  return os.str();
}

inline Instrument projective_instrument(const Observable& obs) {
  std::vector<Outcome> outcomes;
  std::vector<ComplexMatrix> kraus;
  for (std::size_t j = 0; j < obs.spectrum().size(); ++j) {
    outcomes.push_back({value_label(obs.spectrum()[j]), obs.spectrum()[j]});
    kraus.push_back(obs.projectors()[j]);
  }
  return Instrument(std::move(outcomes), std::move(kraus));
}

inline std::vector<double> outcome_probabilities(const Instrument& instr,
                                                 const DensityState& rho) {
  if (instr.dim() != rho.dim())
    throw InvalidInput("outcome_probabilities: dimension mismatch");
  std::vector<double> probs;
  probs.reserve(instr.n_outcomes());
  for (const ComplexMatrix& e : instr.povm()) probs.push_back(rho.expectation(e));
  return probs;
}

// Non-selective channel rho -> sum_m M_m rho M_m^dag.
inline DensityState apply_channel(const Instrument& instr, const DensityState& rho) {
  if (instr.dim() != rho.dim()) throw InvalidInput("apply_channel: dimension mismatch");
  ComplexMatrix out(rho.dim(), rho.dim());
  for (const ComplexMatrix& m : instr.kraus()) out += m * rho.matrix() * m.adjoint();
  return DensityState(std::move(out));
}

// PBS in the two-qubit basis {H1, H2, V1, V2}: phase on the transmitted
// polarization, path swap on the reflected one. At phi = 0 this is a CNOT
// with the polarization as control and the path as target.
inline ComplexMatrix pbs_unitary(double phi = 0.0) {
  ComplexMatrix u(4, 4);
  const cplx ph = std::exp(cplx{0.0, phi});
  u(0, 0) = ph;
  u(1, 1) = ph;
  u(2, 3) = 1.0;
  u(3, 2) = 1.0;
  return u;
}

// Strength-variable measurement of sigma_z:
//   M+ = cos(theta)|H><H| + sin(theta)|V><V|   (outcome +1)
//   M- = sin(theta)|H><H| + cos(theta)|V><V|   (outcome -1)
// Projective at theta = 0, null at theta = pi/4, strength s = cos(2 theta).
inline Instrument vpbs_instrument(double theta) {
  if (!(theta >= 0.0 && theta <= M_PI / 4.0 + 1e-12))
    throw InvalidInput("vpbs_instrument: theta must lie in [0, pi/4]");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<Outcome> outcomes{{"+1", 1.0}, {"-1", -1.0}};
  std::vector<ComplexMatrix> kraus{ComplexMatrix{{c, 0.0}, {0.0, s}},
                                   ComplexMatrix{{s, 0.0}, {0.0, c}}};
  return Instrument(std::move(outcomes), std::move(kraus), std::cos(2.0 * theta));
}

// VPBS with imperfect PBS extinction, modeled as amplitude leakage of each
// polarization into the wrong output port. The leak advances the working
// angle to theta' with
//   cos(theta') = (cos(theta) - sqrt(ext) sin(theta)) / sqrt(1 + ext)
//   sin(theta') = (sin(theta) + sqrt(ext) cos(theta)) / sqrt(1 + ext)
// i.e. theta' = theta + atan(sqrt(ext)), an exact rotation, so POVM
// completeness is preserved exactly. The model leaves a residual error at the
// projective setting and a residual disturbance at the null setting, and
// reduces to the ideal instrument at ext = 0.
inline Instrument imperfect_pbs_instrument(double theta, double extinction) {
  if (!(extinction >= 0.0 && extinction < 1.0))
    throw InvalidInput("imperfect_pbs_instrument: extinction must lie in [0, 1)");
  if (!(theta >= 0.0 && theta <= M_PI / 4.0 + 1e-12))
    throw InvalidInput("imperfect_pbs_instrument: theta must lie in [0, pi/4]");
  const double norm = std::sqrt(1.0 + extinction);
  const double leak = std::sqrt(extinction);
  const double c = (std::cos(theta) - leak * std::sin(theta)) / norm;
  const double s = (std::sin(theta) + leak * std::cos(theta)) / norm;
  std::vector<Outcome> outcomes{{"+1", 1.0}, {"-1", -1.0}};
  std::vector<ComplexMatrix> kraus{ComplexMatrix{{c, 0.0}, {0.0, s}},
                                   ComplexMatrix{{s, 0.0}, {0.0, c}}};
  return Instrument(std::move(outcomes), std::move(kraus), std::cos(2.0 * theta));
}

// Signal-probe coupling followed by projective readout on the probe.
struct IndirectModel {
  std::size_t signal_dim;
  std::size_t probe_dim;
  ComplexMatrix probe_ket;   // pure probe preparation, probe_dim x 1
  ComplexMatrix coupling;    // unitary on signal (x) probe
  Observable probe_readout;  // measured on the probe after the coupling

  IndirectModel(std::size_t sig_dim, std::size_t prb_dim, ComplexMatrix ket, ComplexMatrix u,
                Observable readout)
      : signal_dim(sig_dim),
        probe_dim(prb_dim),
        probe_ket(std::move(ket)),
        coupling(std::move(u)),
        probe_readout(std::move(readout)) {
    if (probe_ket.rows() != probe_dim || probe_ket.cols() != 1)
      throw InvalidInput("IndirectModel: probe ket has wrong shape");
    double norm2 = 0.0;
    for (std::size_t i = 0; i < probe_dim; ++i) norm2 += std::norm(probe_ket(i, 0));
    if (std::abs(norm2 - 1.0) > 1e-10)
      throw InvalidInput("IndirectModel: probe ket is not normalized");
    const std::size_t d = signal_dim * probe_dim;
    if (coupling.rows() != d || coupling.cols() != d)
      throw InvalidInput("IndirectModel: coupling dimension mismatch");
    if (max_diff(coupling.adjoint() * coupling, ComplexMatrix::identity(d)) > 1e-10)
      throw NumericError("IndirectModel: coupling is not unitary");
    if (probe_readout.dim() != probe_dim)
      throw InvalidInput("IndirectModel: probe readout dimension mismatch");
  }

  DensityState probe_state() const { return DensityState(probe_ket * probe_ket.adjoint()); }

  DensityState joint_input(const DensityState& psi) const {
    if (psi.dim() != signal_dim) throw InvalidInput("joint_input: signal dimension mismatch");
    return DensityState(tensor_product(psi.matrix(), probe_ket * probe_ket.adjoint()));
  }
};

// Probe rotation W(theta) followed by a CNOT (signal control, path target),
// probe prepared in |+1> and read out in sigma_z. Statistically equivalent to
// the VPBS for every theta.
inline IndirectModel lund_wiseman_model(double theta) {
  if (!(theta >= 0.0 && theta <= M_PI / 4.0 + 1e-12))
    throw InvalidInput("lund_wiseman_model: theta must lie in [0, pi/4]");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const ComplexMatrix w{{c, s}, {s, -c}};
  ComplexMatrix probe(2, 1);
  probe(0, 0) = 1.0;
  ComplexMatrix u = pbs_unitary(0.0) * tensor_product(identity2(), w);
  return IndirectModel(2, 2, std::move(probe), std::move(u),
                       Observable(sigma_z(), "sigma_z"));
}

// Kraus operators M_m = <m| U |xi>, one per (nondegenerate) readout outcome.
inline Instrument extract_instrument(const IndirectModel& model) {
  const std::size_t ds = model.signal_dim;
  const std::size_t dp = model.probe_dim;
  const HermitianEigen readout = hermitian_eig(model.probe_readout.matrix());
  std::vector<Outcome> outcomes;
  std::vector<ComplexMatrix> kraus;
  for (std::size_t m = 0; m < dp; ++m) {
    ComplexMatrix op(ds, ds);
    for (std::size_t i = 0; i < ds; ++i)
      for (std::size_t j = 0; j < ds; ++j) {
        cplx sum = 0.0;
        for (std::size_t k = 0; k < dp; ++k)
          for (std::size_t l = 0; l < dp; ++l)
            sum += std::conj(readout.vectors(k, m)) * model.coupling(i * dp + k, j * dp + l) *
                   model.probe_ket(l, 0);
        op(i, j) = sum;
      }
    outcomes.push_back({value_label(readout.values[m]), readout.values[m]});
    kraus.push_back(std::move(op));
  }
  return Instrument(std::move(outcomes), std::move(kraus));
}

// Canonical indirect model for an arbitrary instrument: the probe dimension
// equals the outcome count, the coupling maps |psi>|0> to
// sum_m (M_m |psi>) |m>, and the remaining columns are completed by
// Gram-Schmidt. Requires distinct outcome values so the probe readout
// separates the outcomes.
inline IndirectModel dilate_instrument(const Instrument& instr) {
  const std::size_t ds = instr.dim();
  const std::size_t dp = instr.n_outcomes();
  const std::size_t d = ds * dp;
  for (std::size_t i = 0; i < dp; ++i)
    for (std::size_t j = i + 1; j < dp; ++j)
      if (instr.outcomes()[i].value == instr.outcomes()[j].value)
        throw InvalidInput("dilate_instrument: outcome values must be distinct");

  ComplexMatrix u(d, d);
  for (std::size_t j = 0; j < ds; ++j)
    for (std::size_t m = 0; m < dp; ++m)
      for (std::size_t i = 0; i < ds; ++i) u(i * dp + m, j * dp + 0) = instr.kraus()[m](i, j);

  // Complete the isometry to a unitary, filling the probe-input slots p > 0.
  std::vector<std::size_t> filled;
  for (std::size_t j = 0; j < ds; ++j) filled.push_back(j * dp + 0);
  std::size_t next_slot = 0;
  auto advance_slot = [&]() {
    while (next_slot < d && next_slot % dp == 0) ++next_slot;
    return next_slot;
  };
  for (std::size_t cand = 0; cand < d && filled.size() < d; ++cand) {
    std::vector<cplx> col(d, cplx{0.0, 0.0});
    col[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once for stability
      for (std::size_t fc : filled) {
        cplx overlap = 0.0;
        for (std::size_t i = 0; i < d; ++i) overlap += std::conj(u(i, fc)) * col[i];
        for (std::size_t i = 0; i < d; ++i) col[i] -= overlap * u(i, fc);
      }
    }
    double norm2 = 0.0;
    for (const cplx& v : col) norm2 += std::norm(v);
    if (norm2 < 1e-12) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    const std::size_t slot = advance_slot();
    for (std::size_t i = 0; i < d; ++i) u(i, slot) = col[i] * inv;
    filled.push_back(slot);
    ++next_slot;
  }
  if (filled.size() != d) throw NumericError("dilate_instrument: completion failed");

  ComplexMatrix readout(dp, dp);
  for (std::size_t m = 0; m < dp; ++m) readout(m, m) = instr.outcomes()[m].value;
  ComplexMatrix probe(dp, 1);
  probe(0, 0) = 1.0;
  return IndirectModel(ds, dp, std::move(probe), std::move(u),
                       Observable(std::move(readout), "probe_readout"));
}

// Heisenberg-picture observables of the indirect model and their deviations
// from the target observables.
struct HeisenbergPair {
  ComplexMatrix ma;  // U^dag (I (x) M) U
  ComplexMatrix mb;  // U^dag (B (x) I) U
  ComplexMatrix na;  // ma - A (x) I
  ComplexMatrix db;  // mb - B (x) I
};

inline HeisenbergPair heisenberg_observables(const IndirectModel& model, const Observable& a,
                                             const Observable& b) {
  if (a.dim() != model.signal_dim || b.dim() != model.signal_dim)
    throw InvalidInput("heisenberg_observables: observable dimension mismatch");
  const ComplexMatrix& u = model.coupling;
  const ComplexMatrix ud = u.adjoint();
  HeisenbergPair pair{
      ud * tensor_product(ComplexMatrix::identity(model.signal_dim),
                          model.probe_readout.matrix()) *
          u,
      ud * tensor_product(b.matrix(), ComplexMatrix::identity(model.probe_dim)) * u,
      ComplexMatrix{}, ComplexMatrix{}};
  pair.na = pair.ma - tensor_product(a.matrix(), ComplexMatrix::identity(model.probe_dim));
  pair.db = pair.mb - tensor_product(b.matrix(), ComplexMatrix::identity(model.probe_dim));
  for (const ComplexMatrix* m : {&pair.ma, &pair.mb, &pair.na, &pair.db})
    if (m->max_asymmetry() > 1e-10)
      throw NumericError("heisenberg_observables: operator is not Hermitian");
  return pair;
}

namespace detail {
inline double rms_from_square(double square, const char* who) {
  if (square < -1e-12)
    throw NumericError(std::string(who) + ": negative mean square " + std::to_string(square));
  return std::sqrt(std::max(square, 0.0));
}
}  // namespace detail

// epsilon(A) = sqrt(<N(A)^2>) on psi (x) xi.
inline double error_direct(const IndirectModel& model, const Observable& a,
                           const DensityState& psi) {
  const HeisenbergPair pair = heisenberg_observables(model, a, a);
  const DensityState joint = model.joint_input(psi);
  return detail::rms_from_square(joint.expectation(pair.na * pair.na), "error_direct");
}

// eta(B) = sqrt(<D(B)^2>) on psi (x) xi.
inline double disturbance_direct(const IndirectModel& model, const Observable& b,
                                 const DensityState& psi) {
  const HeisenbergPair pair = heisenberg_observables(model, b, b);
  const DensityState joint = model.joint_input(psi);
  return detail::rms_from_square(joint.expectation(pair.db * pair.db), "disturbance_direct");
}

// Same quantities evaluated from the instrument alone:
//   <M_A^2> = sum_m mu_m^2 <E_m>,  <M_A A + A M_A> = 2 sum_m mu_m Re<E_m A>.
inline double error_direct(const Instrument& instr, const Observable& a,
                           const DensityState& psi) {
  if (instr.dim() != a.dim() || instr.dim() != psi.dim())
    throw InvalidInput("error_direct: dimension mismatch");
  double m2 = 0.0;
  double cross = 0.0;
  for (std::size_t m = 0; m < instr.n_outcomes(); ++m) {
    const double mu = instr.outcomes()[m].value;
    m2 += mu * mu * psi.expectation(instr.povm()[m]);
    cross += 2.0 * mu * std::real(psi.expectation_c(instr.povm()[m] * a.matrix()));
  }
  const double a2 = psi.expectation(a.matrix() * a.matrix());
  return detail::rms_from_square(m2 + a2 - cross, "error_direct");
}

//   <M_B^2> = sum_m <M_m^dag B^2 M_m>,  <M_B B + B M_B> = 2 sum_m Re<M_m^dag B M_m B>.
inline double disturbance_direct(const Instrument& instr, const Observable& b,
                                 const DensityState& psi) {
  if (instr.dim() != b.dim() || instr.dim() != psi.dim())
    throw InvalidInput("disturbance_direct: dimension mismatch");
  double m2 = 0.0;
  double cross = 0.0;
  const ComplexMatrix bsq = b.matrix() * b.matrix();
  for (const ComplexMatrix& m : instr.kraus()) {
    m2 += psi.expectation(m.adjoint() * bsq * m);
    cross += 2.0 * std::real(psi.expectation_c(m.adjoint() * b.matrix() * m * b.matrix()));
  }
  const double b2 = psi.expectation(bsq);
  return detail::rms_from_square(m2 + b2 - cross, "disturbance_direct");
}

}  // namespace edr
