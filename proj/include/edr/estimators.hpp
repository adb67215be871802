#pragma once

// The three experimental routes to the measurement error and disturbance:
// conjugated-state methods (three-state, two-state), weak-valued joint
// probabilities, and the weak-probe cascade, together with a finite-shot
// Monte Carlo sampler for the cascade statistics.
//
// The conjugated states (I +/- A) psi (I +/- A) and A psi A are quadratic
// forms and enter unnormalized; renormalizing them would break the
// identities they satisfy.

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "edr/instruments.hpp"
#include "edr/linalg.hpp"
#include "edr/qubit.hpp"
#include "edr/rng.hpp"

namespace edr {

// A measurement seen through its statistics only: outcome values paired with
// POVM effects.
struct PovmEffect {
  double value;
  ComplexMatrix effect;
};

inline std::vector<PovmEffect> measurement_effects(const Instrument& instr) {
  std::vector<PovmEffect> out;
  out.reserve(instr.n_outcomes());
  for (std::size_t m = 0; m < instr.n_outcomes(); ++m)
    out.push_back({instr.outcomes()[m].value, instr.povm()[m]});
  return out;
}

// Effects of measuring B projectively after the instrument's back-action:
// F_b = sum_m M_m^dag Pi_b M_m with value beta_b.
inline std::vector<PovmEffect> disturbed_effects(const Instrument& instr, const Observable& b) {
  if (instr.dim() != b.dim()) throw InvalidInput("disturbed_effects: dimension mismatch");
  std::vector<PovmEffect> out;
  for (std::size_t j = 0; j < b.spectrum().size(); ++j) {
    ComplexMatrix f(instr.dim(), instr.dim());
    for (const ComplexMatrix& m : instr.kraus()) f += m.adjoint() * b.projectors()[j] * m;
    out.push_back({b.spectrum()[j], std::move(f)});
  }
  return out;
}

namespace detail {

enum class CrossMethod { three_state, two_state };

inline double unnormalized_mean(const std::vector<PovmEffect>& effects, const ComplexMatrix& state) {
  double sum = 0.0;
  for (const PovmEffect& e : effects) sum += e.value * std::real((state * e.effect).trace());
  return sum;
}

// RMS deviation between the measured observable (given through its effects)
// and the target, with the cross term evaluated from conjugated signal
// states.
inline double rms_deviation(const std::vector<PovmEffect>& effects, const Observable& target,
                            const DensityState& psi, CrossMethod method, const char* who) {
  if (target.dim() != psi.dim() || effects.front().effect.rows() != psi.dim())
    throw InvalidInput(std::string(who) + ": dimension mismatch");
  const ComplexMatrix& rho = psi.matrix();
  const ComplexMatrix& t = target.matrix();
  const ComplexMatrix eye = ComplexMatrix::identity(psi.dim());

  double m2 = 0.0;
  for (const PovmEffect& e : effects)
    m2 += e.value * e.value * std::real((rho * e.effect).trace());
  const double t2 = psi.expectation(t * t);

  double cross = 0.0;
  if (method == CrossMethod::three_state) {
    const ComplexMatrix plus = (eye + t) * rho * (eye + t);
    const ComplexMatrix conj_t = t * rho * t;
    cross = unnormalized_mean(effects, plus) - unnormalized_mean(effects, conj_t) -
            unnormalized_mean(effects, rho);
  } else {
    const ComplexMatrix plus = (eye + t) * rho * (eye + t);
    const ComplexMatrix minus = (eye - t) * rho * (eye - t);
    cross = 0.5 * (unnormalized_mean(effects, plus) - unnormalized_mean(effects, minus));
  }
  return rms_from_square(m2 + t2 - cross, who);
}

}  // namespace detail

inline double three_state_error(const Instrument& instr, const Observable& a,
                                const DensityState& psi) {
  return detail::rms_deviation(measurement_effects(instr), a, psi,
                               detail::CrossMethod::three_state, "three_state_error");
}

inline double two_state_error(const Instrument& instr, const Observable& a,
                              const DensityState& psi) {
  return detail::rms_deviation(measurement_effects(instr), a, psi,
                               detail::CrossMethod::two_state, "two_state_error");
}

inline double three_state_disturbance(const Instrument& instr, const Observable& b,
                                      const DensityState& psi) {
  return detail::rms_deviation(disturbed_effects(instr, b), b, psi,
                               detail::CrossMethod::three_state, "three_state_disturbance");
}

inline double two_state_disturbance(const Instrument& instr, const Observable& b,
                                    const DensityState& psi) {
  return detail::rms_deviation(disturbed_effects(instr, b), b, psi,
                               detail::CrossMethod::two_state, "two_state_disturbance");
}

// Weak-valued joint quasi-probabilities P_W(j, m) = Re<E_m Pi_j>. Entries may
// be negative; both marginals are proper probabilities.
struct WeakJointTable {
  std::vector<double> target_values;   // lambda_j, descending
  std::vector<double> outcome_values;  // mu_m, instrument order
  std::vector<double> p;               // row-major over (j, m)

  double at(std::size_t j, std::size_t m) const { return p[j * outcome_values.size() + m]; }
};

inline WeakJointTable weak_joint_probabilities(const Instrument& instr, const Observable& a,
                                               const DensityState& psi) {
  if (instr.dim() != a.dim() || instr.dim() != psi.dim())
    throw InvalidInput("weak_joint_probabilities: dimension mismatch");
  WeakJointTable table;
  table.target_values = a.spectrum();
  for (const Outcome& o : instr.outcomes()) table.outcome_values.push_back(o.value);
  for (const ComplexMatrix& proj : a.projectors())
    for (const ComplexMatrix& e : instr.povm())
      table.p.push_back(std::real(psi.expectation_c(e * proj)));
  return table;
}

// epsilon(A)^2 = sum_{j,m} (mu_m - lambda_j)^2 P_W(j, m).
inline double error_from_weak_joint(const WeakJointTable& table) {
  double sum = 0.0;
  for (std::size_t j = 0; j < table.target_values.size(); ++j)
    for (std::size_t m = 0; m < table.outcome_values.size(); ++m) {
      const double d = table.outcome_values[m] - table.target_values[j];
      sum += d * d * table.at(j, m);
    }
  return detail::rms_from_square(sum, "error_from_weak_joint");
}

// Re <A>_W conditioned on one instrument outcome. May lie outside the
// spectrum of A.
inline double weak_value(const Instrument& instr, std::size_t outcome_index, const Observable& a,
                         const DensityState& psi) {
  if (outcome_index >= instr.n_outcomes()) throw InvalidInput("weak_value: no such outcome");
  const ComplexMatrix& e = instr.povm()[outcome_index];
  const double pm = psi.expectation(e);
  if (pm <= 1e-12)
    throw InvalidInput("weak_value: conditioning probability is zero, weak value undefined");
  return std::real(psi.expectation_c(e * a.matrix())) / pm;
}

// Weak probe of a +/-1 observable: Kraus pair
//   W_+/- = (cos(g) I +/- sin(g) target) / sqrt(2),
// complete because target^2 = I. Strength sin(2g); exact at any g.
class WeakProbe {
 public:
  WeakProbe(Observable target, double g) : target_(std::move(target)), g_(g) {
    if (!(g >= 0.0 && g < M_PI / 2.0)) throw InvalidInput("WeakProbe: g must lie in [0, pi/2)");
    const ComplexMatrix sq = target_.matrix() * target_.matrix();
    if (max_diff(sq, ComplexMatrix::identity(target_.dim())) > 1e-10)
      throw InvalidInput("WeakProbe: target observable must square to the identity");
    const double inv = 1.0 / std::sqrt(2.0);
    const ComplexMatrix eye = ComplexMatrix::identity(target_.dim());
    kraus_[0] = (eye * cplx{std::cos(g), 0.0} + target_.matrix() * cplx{std::sin(g), 0.0}) * inv;
    kraus_[1] = (eye * cplx{std::cos(g), 0.0} - target_.matrix() * cplx{std::sin(g), 0.0}) * inv;
  }

  static WeakProbe from_strength(Observable target, double strength) {
    if (!(strength >= 0.0 && strength <= 1.0))
      throw InvalidInput("WeakProbe: strength must lie in [0, 1]");
    return WeakProbe(std::move(target), 0.5 * std::asin(strength));
  }

  const Observable& target() const { return target_; }
  double g() const { return g_; }
  double strength() const { return std::sin(2.0 * g_); }
  const ComplexMatrix& kraus_plus() const { return kraus_[0]; }
  const ComplexMatrix& kraus_minus() const { return kraus_[1]; }

  // Non-selective back-action rho -> W+ rho W+ + W- rho W-.
  DensityState apply_nonselective(const DensityState& rho) const {
    if (rho.dim() != target_.dim()) throw InvalidInput("WeakProbe: state dimension mismatch");
    ComplexMatrix out = kraus_[0] * rho.matrix() * kraus_[0].adjoint() +
                        kraus_[1] * rho.matrix() * kraus_[1].adjoint();
    return DensityState(std::move(out));
  }

 private:
  Observable target_;
  double g_;
  std::array<ComplexMatrix, 2> kraus_;
};

struct Axis {
  std::string name;
  std::vector<double> values;
};

// Dense joint distribution over a few ordered outcome axes, stored row-major
// with the last axis fastest. Normalized within 1e-10; entries above -1e-12.
class JointDistribution {
 public:
  JointDistribution(std::vector<Axis> axes, std::vector<double> probs)
      : axes_(std::move(axes)), probs_(std::move(probs)) {
    std::size_t expect = 1;
    for (const Axis& ax : axes_) expect *= ax.values.size();
    if (expect != probs_.size() || probs_.empty())
      throw InvalidInput("JointDistribution: probability table shape mismatch");
    double sum = 0.0;
    for (double p : probs_) {
      if (p < -1e-12) throw NumericError("JointDistribution: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw NumericError("JointDistribution: probabilities sum to " + std::to_string(sum));
  }

  const std::vector<Axis>& axes() const { return axes_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

  // Marginal over the axes NOT listed in keep (ascending axis indices).
  JointDistribution marginal(const std::vector<std::size_t>& keep) const {
    std::vector<Axis> new_axes;
    for (std::size_t k : keep) {
      if (k >= axes_.size()) throw InvalidInput("marginal: axis index out of range");
      new_axes.push_back(axes_[k]);
    }
    std::vector<std::size_t> strides(axes_.size());
    std::size_t s = 1;
    for (std::size_t i = axes_.size(); i-- > 0;) {
      strides[i] = s;
      s *= axes_[i].values.size();
    }
    std::size_t new_size = 1;
    for (const Axis& ax : new_axes) new_size *= ax.values.size();
    std::vector<double> out(new_size, 0.0);
    for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
      std::size_t idx = 0;
      for (std::size_t k : keep)
        idx = idx * axes_[k].values.size() + (flat / strides[k]) % axes_[k].values.size();
      out[idx] += probs_[flat];
    }
    return JointDistribution(std::move(new_axes), std::move(out));
  }

 private:
  std::vector<Axis> axes_;
  std::vector<double> probs_;
};

// Exact Born probabilities of the weak probe -> main instrument -> projective
// post measurement cascade:
//   P(w, m, b) = Tr[ Pi_b M_m W_w psi W_w^dag M_m^dag Pi_b ].
inline JointDistribution cascade_distribution(const WeakProbe& probe, const Instrument& main,
                                              const Observable& post, const DensityState& psi) {
  if (probe.target().dim() != psi.dim() || main.dim() != psi.dim() || post.dim() != psi.dim())
    throw InvalidInput("cascade_distribution: dimension mismatch");
  if (post.spectrum().size() != 2 || std::abs(post.spectrum()[0] - 1.0) > 1e-10 ||
      std::abs(post.spectrum()[1] + 1.0) > 1e-10)
    throw InvalidInput("cascade_distribution: post observable must have outcomes +1 and -1");

  std::vector<Axis> axes;
  axes.push_back({"w", {1.0, -1.0}});
  Axis main_axis{"m", {}};
  for (const Outcome& o : main.outcomes()) main_axis.values.push_back(o.value);
  axes.push_back(std::move(main_axis));
  axes.push_back({"b", post.spectrum()});

  std::vector<double> probs;
  probs.reserve(2 * main.n_outcomes() * 2);
  const std::array<const ComplexMatrix*, 2> ws{&probe.kraus_plus(), &probe.kraus_minus()};
  for (const ComplexMatrix* w : ws) {
    const ComplexMatrix after_probe = (*w) * psi.matrix() * w->adjoint();
    for (const ComplexMatrix& m : main.kraus()) {
      const ComplexMatrix after_main = m * after_probe * m.adjoint();
      for (const ComplexMatrix& proj : post.projectors())
        probs.push_back(std::real((after_main * proj).trace()));
    }
  }
  return JointDistribution(std::move(axes), std::move(probs));
}

namespace detail {

// Correlation statistic T = sum w * value * P over a two-axis distribution
// whose first axis is the weak-probe outcome w = +/-1.
inline double weak_correlation(const JointDistribution& dist) {
  if (dist.axes().size() != 2 || dist.axes()[0].values != std::vector<double>{1.0, -1.0})
    throw InvalidInput("weak estimator: expected axes (w, outcome) with w = +/-1");
  const std::vector<double>& vals = dist.axes()[1].values;
  double t = 0.0;
  for (std::size_t w = 0; w < 2; ++w)
    for (std::size_t m = 0; m < vals.size(); ++m) {
      const double sign = w == 0 ? 1.0 : -1.0;
      t += sign * vals[m] * dist.probs()[w * vals.size() + m];
    }
  return t;
}

}  // namespace detail

// epsilon^2 = <M_A^2> + <A^2> - (2 / sin 2g) sum_{w,m} w mu_m P(w, m),
// exact for any g when the probed observable squares to the identity.
// Pass the (w, m) marginal of the cascade. The default moments cover +/-1
// outcome values.
inline double weak_probe_error(const JointDistribution& wm, double strength,
                               double m2_moment = 1.0, double a2_moment = 1.0) {
  if (strength <= 1e-9)
    throw InvalidInput("weak_probe_error: probe strength too small to invert");
  const double square = m2_moment + a2_moment - (2.0 / strength) * detail::weak_correlation(wm);
  if (square < -1e-9)
    throw NumericError("weak_probe_error: inconsistent estimate, epsilon^2 = " +
                       std::to_string(square));
  return std::sqrt(std::max(square, 0.0));
}

// Same statistic on the (w, b) marginal, with the main outcome traced out.
inline double weak_probe_disturbance(const JointDistribution& wb, double strength,
                                     double m2_moment = 1.0, double b2_moment = 1.0) {
  if (strength <= 1e-9)
    throw InvalidInput("weak_probe_disturbance: probe strength too small to invert");
  const double square = m2_moment + b2_moment - (2.0 / strength) * detail::weak_correlation(wb);
  if (square < -1e-9)
    throw NumericError("weak_probe_disturbance: inconsistent estimate, eta^2 = " +
                       std::to_string(square));
  return std::sqrt(std::max(square, 0.0));
}

// Counts over the joint outcomes of a distribution, from a deterministic
// counter-based stream: draw i is a pure function of (seed, i), so any
// partition of [0, shots) across workers merges to the same counts.
struct ShotRecord {
  std::vector<Axis> axes;
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

// Counts for the shot window [first, first + count): workers can sample
// disjoint windows of the same stream and add their counts.
inline ShotRecord sample_shots_range(const JointDistribution& dist, std::uint64_t first,
                                     std::uint64_t count, std::uint64_t seed) {
  if (count == 0) throw InvalidInput("sample_shots: shots must be positive");
  std::vector<double> cdf;
  cdf.reserve(dist.size());
  double acc = 0.0;
  for (double p : dist.probs()) {
    acc += std::max(p, 0.0);
    cdf.push_back(acc);
  }
  ShotRecord rec;
  rec.axes = dist.axes();
  rec.counts.assign(dist.size(), 0);
  rec.shots = count;
  rec.seed = seed;
  const CounterRng rng(seed);
  const std::size_t last = dist.size() - 1;
  for (std::uint64_t i = first; i < first + count; ++i) {
    const double u = rng.uniform(i) * acc;
    std::size_t bin = 0;
    while (bin < last && u >= cdf[bin]) ++bin;
    ++rec.counts[bin];
  }
  return rec;
}

inline ShotRecord sample_shots(const JointDistribution& dist, std::uint64_t shots,
                               std::uint64_t seed) {
  return sample_shots_range(dist, 0, shots, seed);
}

struct Estimate {
  double value;
  double std_error;
};

enum class EstimateMode { error, disturbance };

// Plug empirical frequencies into the weak-probe estimator. The standard
// error propagates the multinomial variance of the linear statistic
// T = sum w * value * P through the square root. Shot noise can push the
// squared estimate below zero near a vanishing true value; dips within the
// noise scale clamp to zero, dips far beyond it are treated as misuse.
inline Estimate estimate_from_counts(const ShotRecord& rec, double strength,
                                     EstimateMode mode) {
  if (strength <= 1e-9)
    throw InvalidInput("estimate_from_counts: probe strength too small to invert");
  if (rec.shots == 0) throw InvalidInput("estimate_from_counts: empty record");

  // Reduce to the (w, x) marginal: x is the main outcome for the error, the
  // post outcome for the disturbance. Two-axis records are used as-is.
  std::vector<std::size_t> keep;
  if (rec.axes.size() == 3)
    keep = mode == EstimateMode::error ? std::vector<std::size_t>{0, 1}
                                       : std::vector<std::size_t>{0, 2};
  else if (rec.axes.size() == 2)
    keep = {0, 1};
  else
    throw InvalidInput("estimate_from_counts: record must have 2 or 3 axes");

  std::vector<std::size_t> strides(rec.axes.size());
  std::size_t s = 1;
  for (std::size_t i = rec.axes.size(); i-- > 0;) {
    strides[i] = s;
    s *= rec.axes[i].values.size();
  }
  const std::vector<double>& w_vals = rec.axes[keep[0]].values;
  const std::vector<double>& x_vals = rec.axes[keep[1]].values;
  if (w_vals != std::vector<double>{1.0, -1.0})
    throw InvalidInput("estimate_from_counts: first axis must be the weak outcome +/-1");
  std::vector<double> freq(w_vals.size() * x_vals.size(), 0.0);
  for (std::size_t flat = 0; flat < rec.counts.size(); ++flat) {
    const std::size_t iw = (flat / strides[keep[0]]) % w_vals.size();
    const std::size_t ix = (flat / strides[keep[1]]) % x_vals.size();
    freq[iw * x_vals.size() + ix] += static_cast<double>(rec.counts[flat]);
  }
  const double n = static_cast<double>(rec.shots);
  for (double& f : freq) f /= n;

  double t_hat = 0.0;
  double t2_hat = 0.0;
  double m2_hat = 0.0;
  for (std::size_t iw = 0; iw < 2; ++iw)
    for (std::size_t ix = 0; ix < x_vals.size(); ++ix) {
      const double coeff = (iw == 0 ? 1.0 : -1.0) * x_vals[ix];
      const double p = freq[iw * x_vals.size() + ix];
      t_hat += coeff * p;
      t2_hat += coeff * coeff * p;
      m2_hat += x_vals[ix] * x_vals[ix] * p;
    }
  const double var_t = std::max(t2_hat - t_hat * t_hat, 0.0) / n;
  const double se_square = (2.0 / strength) * std::sqrt(var_t);

  const double square = m2_hat + 1.0 - (2.0 / strength) * t_hat;
  if (square < -std::max(1e-9, 6.0 * se_square))
    throw NumericError("estimate_from_counts: estimate inconsistent with the model, square = " +
                       std::to_string(square));
  const double value = std::sqrt(std::max(square, 0.0));
  // Delta method away from zero; conservative noise floor when the squared
  // estimate is buried in its own standard error.
  const double std_error =
      square > se_square && value > 0.0 ? se_square / (2.0 * value) : std::sqrt(se_square);
  return {value, std_error};
}

}  // namespace edr
