// edr-lab: strength-variable qubit measurement simulations from the command
// line. Subcommands: sweep, bounds, shots, fock-check.
//
// Exit codes: 0 success, 1 config error, 2 numerical invariant failure,
// 3 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "edr/edr.hpp"

namespace {

using namespace edr;

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides) {
  SweepConfig cfg;
  if (!config_path.empty()) cfg = parse_config_file(config_path);
  for (const std::string& assignment : overrides) apply_override(cfg, assignment);
  const std::vector<SweepRow> rows = run_sweep(cfg);
  emit_table(cfg, rows, cfg.format, cfg.output);
  if (cfg.output != "-")
    std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), cfg.output.c_str());
  return 0;
}

int cmd_bounds(double eps, double eta, double c, double sigma_a, double sigma_b) {
  RelationInputs in;
  in.eps = eps;
  in.eta = eta;
  in.c_bound = c;
  in.sigma_a = sigma_a;
  in.sigma_b = sigma_b;
  std::printf("%-18s %14s %14s %14s  %s\n", "relation", "lhs", "rhs", "slack", "status");
  for (Relation r : all_relations()) {
    if (r == Relation::ozawa0) continue;  // needs the full model, reported by `sweep`
    const EdrReport rep = evaluate_relation(r, in);
    std::printf("%-18s %14.6g %14.6g %14.6g  %s\n", relation_name(r), rep.lhs, rep.rhs,
                rep.slack, rep.satisfied ? "satisfied" : "VIOLATED");
  }
  return 0;
}

int cmd_shots(double theta, std::uint64_t shots, std::uint64_t seed, double strength,
              const std::string& state, double extinction) {
  const DensityState psi = DensityState::pure(parse_state_literal(state));
  const Observable a = Observable::of_pauli("sigma_z");
  const Observable b = Observable::of_pauli("sigma_x");
  const Instrument instr = extinction > 0.0 ? imperfect_pbs_instrument(theta, extinction)
                                            : vpbs_instrument(theta);
  const WeakProbe probe_a = WeakProbe::from_strength(a, strength);
  const WeakProbe probe_b = WeakProbe::from_strength(b, strength);

  const JointDistribution cascade_err = cascade_distribution(probe_a, instr, b, psi);
  const JointDistribution cascade_dis = cascade_distribution(probe_b, instr, b, psi);
  const ShotRecord rec_e = sample_shots(cascade_err, shots, CounterRng::derive(seed, 0));
  const ShotRecord rec_d = sample_shots(cascade_dis, shots, CounterRng::derive(seed, 1));
  const Estimate est_e = estimate_from_counts(rec_e, strength, EstimateMode::error);
  const Estimate est_d = estimate_from_counts(rec_d, strength, EstimateMode::disturbance);

  std::printf("theta = %.6f, s = %.6f, shots = %llu, seed = %llu\n", theta,
              std::cos(2.0 * theta), static_cast<unsigned long long>(shots),
              static_cast<unsigned long long>(seed));
  std::printf("eps: direct = %.9f, estimate = %.9f +/- %.9f\n",
              error_direct(instr, a, psi), est_e.value, est_e.std_error);
  std::printf("eta: direct = %.9f, estimate = %.9f +/- %.9f\n",
              disturbance_direct(instr, b, psi), est_d.value, est_d.std_error);
  return 0;
}

int cmd_fock_check() {
  const FockSpace space(2);
  const ComplexMatrix pauli[3] = {sigma_z(), sigma_x(), sigma_y()};
  for (int i = 1; i <= 3; ++i) {
    const ComplexMatrix block = restrict_to_single_photon(stokes_operator(i, space), space);
    const double diff = max_diff(block, pauli[i - 1]);
    std::printf("s%d restricted to the single-photon sector: max deviation %g\n", i, diff);
    if (diff != 0.0)
      throw NumericError("fock-check: stokes operator s" + std::to_string(i) +
                         " does not restrict to the Pauli matrix");
  }

  std::mt19937_64 gen(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    cplx alpha{normal(gen), normal(gen)};
    cplx beta{normal(gen), normal(gen)};
    const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    alpha /= norm;
    beta /= norm;
    ComplexMatrix ket(space.dim(), 1);
    ket(space.index(1, 0), 0) = alpha;
    ket(space.index(0, 1), 0) = beta;
    double means[4];
    for (int s = 0; s < 4; ++s)
      means[s] = std::real((ket.adjoint() * stokes_operator(s, space) * ket)(0, 0));
    worst = std::max(worst, std::abs(means[1] * means[1] + means[2] * means[2] +
                                     means[3] * means[3] - means[0] * means[0]));
  }
  std::printf("poincare sphere identity over 100 random states: max deviation %g\n", worst);
  if (worst > 1e-12)
    throw NumericError("fock-check: poincare sphere identity violated");
  std::printf("fock-check passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"error-disturbance measurement lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  CLI::App* sweep = app.add_subcommand("sweep", "run a measurement-strength sweep");
  sweep->add_option("--config", config_path, "key = value config file");
  sweep->add_option("--set", overrides, "override a config key, e.g. --set shots=100000");

  double eps = 0.0, eta = 0.0, c = 1.0, sigma_a = 1.0, sigma_b = 1.0;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the relations for one point");
  bounds->add_option("--eps", eps, "measurement error")->required();
  bounds->add_option("--eta", eta, "disturbance")->required();
  bounds->add_option("--C", c, "commutator bound")->required();
  bounds->add_option("--sigma-a", sigma_a, "standard deviation of A (default 1)");
  bounds->add_option("--sigma-b", sigma_b, "standard deviation of B (default 1)");

  double theta = 0.0, strength = 0.104, extinction = 0.0;
  std::uint64_t shots = 1000000, seed = 0;
  std::string state = "L";
  CLI::App* shots_cmd = app.add_subcommand("shots", "simulate one photon-counting run");
  shots_cmd->add_option("--theta", theta, "measurement angle in [0, pi/4]")->required();
  shots_cmd->add_option("--shots", shots, "number of photons (default 1e6)");
  shots_cmd->add_option("--seed", seed, "counting-noise seed");
  shots_cmd->add_option("--probe-strength", strength, "weak probe strength (default 0.104)");
  shots_cmd->add_option("--state", state, "signal state literal (default L)");
  shots_cmd->add_option("--extinction", extinction, "PBS extinction parameter");

  app.add_subcommand("fock-check", "verify the Stokes-to-Pauli reduction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("sweep")) return cmd_sweep(config_path, overrides);
    if (app.got_subcommand("bounds")) return cmd_bounds(eps, eta, c, sigma_a, sigma_b);
    if (app.got_subcommand("shots"))
      return cmd_shots(theta, shots, seed, strength, state, extinction);
    if (app.got_subcommand("fock-check")) return cmd_fock_check();
  } catch (const edr::InvalidInput& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const edr::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const edr::NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 0;
}
