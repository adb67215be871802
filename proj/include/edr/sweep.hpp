#pragma once

// Measurement-strength sweep: runs the selected estimators and relation
// reports over a theta grid and emits plot-ready CSV or JSON tables.
// Output is deterministic for a given config, including the shot noise,
// whose per-row seeds are derived from the config seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "edr/bounds.hpp"
#include "edr/estimators.hpp"
#include "edr/instruments.hpp"
#include "edr/qubit.hpp"
#include "edr/rng.hpp"

namespace edr {

enum class Method { direct, three_state, two_state, weak_exact, weak_shots };

inline const std::vector<Method>& all_methods() {
  static const std::vector<Method> all{Method::direct, Method::three_state, Method::two_state,
                                       Method::weak_exact, Method::weak_shots};
  return all;
}

inline const char* method_name(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::three_state: return "three_state";
    case Method::two_state: return "two_state";
    case Method::weak_exact: return "weak_exact";
    case Method::weak_shots: return "weak_shots";
  }
  return "?";
}

inline std::string valid_method_names() {
  std::string names;
  for (Method m : all_methods()) {
    if (!names.empty()) names += ", ";
    names += method_name(m);
  }
  return names;
}

inline Method method_from_name(const std::string& name) {
  for (Method m : all_methods())
    if (name == method_name(m)) return m;
  throw InvalidInput("unknown method '" + name + "' (valid: " + valid_method_names() + ")");
}

struct SweepConfig {
  std::string signal_state = "L";
  std::string observable_a = "sigma_z";
  std::string observable_b = "sigma_x";
  std::string instrument = "vpbs";   // vpbs | projective | imperfect_vpbs
  int theta_points = 101;            // uniform grid over [0, pi/4]
  std::vector<double> theta_list;    // explicit grid, overrides theta_points
  std::vector<std::string> methods = {"direct", "three_state", "two_state", "weak_exact",
                                      "weak_shots"};
  double probe_strength = 0.104;
  std::uint64_t shots = 1000000;
  std::uint64_t seed = 0;
  double extinction = 0.0;
  std::vector<std::string> relations = {
      "kennard_robertson", "heisenberg_ed", "ozawa0",      "ozawa",       "branciard1",
      "branciard1a",       "branciard2",    "busch_qubit", "buscemi_qubit"};
  std::string format = "csv";
  std::string output = "-";

  std::vector<double> grid() const {
    if (!theta_list.empty()) {
      for (std::size_t i = 0; i < theta_list.size(); ++i) {
        if (theta_list[i] < 0.0 || theta_list[i] > M_PI / 4.0 + 1e-12)
          throw InvalidInput("theta_list: grid points must lie in [0, pi/4]");
        if (i > 0 && theta_list[i] <= theta_list[i - 1])
          throw InvalidInput("theta_list: grid points must be strictly increasing");
      }
      return theta_list;
    }
    if (theta_points < 2) throw InvalidInput("theta_points must be at least 2");
    std::vector<double> grid(theta_points);
    for (int i = 0; i < theta_points; ++i)
      grid[i] = (M_PI / 4.0) * static_cast<double>(i) / static_cast<double>(theta_points - 1);
    return grid;
  }
};

struct MethodResult {
  double eps = 0.0;
  double eta = 0.0;
  std::optional<double> eps_stderr;
  std::optional<double> eta_stderr;
};

struct SweepRow {
  double theta = 0.0;
  double strength = 0.0;  // cos(2 theta)
  MethodResult direct;    // always computed, reference truth
  std::vector<MethodResult> methods;  // aligned with the requested method list
  std::vector<EdrReport> reports;     // aligned with the requested relation list
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("config: cannot parse '" + value + "' as a number for " + key);
  }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("config: cannot parse '" + value + "' as an integer for " + key);
  }
}

}  // namespace detail

inline void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "signal_state") cfg.signal_state = value;
  else if (key == "A" || key == "a") cfg.observable_a = value;
  else if (key == "B" || key == "b") cfg.observable_b = value;
  else if (key == "instrument") cfg.instrument = value;
  else if (key == "theta_points")
    cfg.theta_points = static_cast<int>(detail::parse_u64(key, value));
  else if (key == "theta_list") {
    cfg.theta_list.clear();
    for (const std::string& item : detail::split_list(value))
      cfg.theta_list.push_back(detail::parse_double(key, item));
  } else if (key == "methods")
    cfg.methods = detail::split_list(value);
  else if (key == "probe_strength") cfg.probe_strength = detail::parse_double(key, value);
  else if (key == "shots") cfg.shots = detail::parse_u64(key, value);
  else if (key == "seed") cfg.seed = detail::parse_u64(key, value);
  else if (key == "extinction") cfg.extinction = detail::parse_double(key, value);
  else if (key == "relations") cfg.relations = detail::split_list(value);
  else if (key == "format") cfg.format = value;
  else if (key == "output") cfg.output = value;
  else
    throw InvalidInput(
        "config: unknown key '" + key +
        "' (valid: signal_state, A, B, instrument, theta_points, theta_list, methods, "
        "probe_strength, shots, seed, extinction, relations, format, output)");
}

// key = value lines; blank lines and lines starting with # are skipped.
inline SweepConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  SweepConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config: line " + std::to_string(lineno) + " is not 'key = value'");
    apply_setting(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
  }
  return cfg;
}

// "key=value" as passed to --set.
inline void apply_override(SweepConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw InvalidInput("--set expects key=value, got '" + assignment + "'");
  apply_setting(cfg, detail::trim(assignment.substr(0, eq)),
                detail::trim(assignment.substr(eq + 1)));
}

inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  // Validate names up front so a bad config fails before any work.
  std::vector<Method> methods;
  for (const std::string& name : cfg.methods) methods.push_back(method_from_name(name));
  std::vector<Relation> relations;
  for (const std::string& name : cfg.relations) relations.push_back(relation_from_name(name));
  if (!(cfg.probe_strength > 0.0 && cfg.probe_strength <= 1.0))
    throw InvalidInput("probe_strength must lie in (0, 1]");
  if (!(cfg.extinction >= 0.0 && cfg.extinction < 1.0))
    throw InvalidInput("extinction must lie in [0, 1)");
  if (cfg.shots == 0) throw InvalidInput("shots must be positive");
  if (cfg.format != "csv" && cfg.format != "json")
    throw InvalidInput("format must be csv or json");
  if (cfg.instrument != "vpbs" && cfg.instrument != "projective" &&
      cfg.instrument != "imperfect_vpbs")
    throw InvalidInput("unknown instrument '" + cfg.instrument +
                       "' (valid: vpbs, projective, imperfect_vpbs)");
  if (cfg.extinction > 0.0 && cfg.instrument != "imperfect_vpbs")
    throw InvalidInput("extinction > 0 requires instrument = imperfect_vpbs");

  const DensityState psi = DensityState::pure(parse_state_literal(cfg.signal_state));
  const Observable obs_a = Observable::of_pauli(cfg.observable_a);
  const Observable obs_b = Observable::of_pauli(cfg.observable_b);
  const std::vector<double> grid = cfg.grid();

  const WeakProbe probe_a = WeakProbe::from_strength(obs_a, cfg.probe_strength);
  const WeakProbe probe_b = WeakProbe::from_strength(obs_b, cfg.probe_strength);

  RelationInputs inputs;
  inputs.sigma_a = stddev(obs_a, psi);
  inputs.sigma_b = stddev(obs_b, psi);
  inputs.c_bound = commutator_bound_C(obs_a, obs_b, psi);
  inputs.bloch_a = bloch_of_observable(obs_a);
  inputs.bloch_b = bloch_of_observable(obs_b);

  const bool need_weak = std::find(methods.begin(), methods.end(), Method::weak_exact) !=
                             methods.end() ||
                         std::find(methods.begin(), methods.end(), Method::weak_shots) !=
                             methods.end();
  const bool need_ozawa0 =
      std::find(relations.begin(), relations.end(), Relation::ozawa0) != relations.end();

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double theta = grid[i];
    SweepRow row;
    row.theta = theta;
    row.strength = std::cos(2.0 * theta);

    // The projective instrument is the theta = 0 limit of the VPBS and does
    // not vary along the grid.
    const Instrument instr = cfg.instrument == "imperfect_vpbs"
                                 ? imperfect_pbs_instrument(theta, cfg.extinction)
                             : cfg.instrument == "projective" ? vpbs_instrument(0.0)
                                                              : vpbs_instrument(theta);
    const IndirectModel model = cfg.instrument == "imperfect_vpbs"
                                    ? dilate_instrument(instr)
                                : cfg.instrument == "projective" ? lund_wiseman_model(0.0)
                                                                 : lund_wiseman_model(theta);

    row.direct.eps = error_direct(model, obs_a, psi);
    row.direct.eta = disturbance_direct(model, obs_b, psi);

    std::optional<JointDistribution> cascade_err;
    std::optional<JointDistribution> cascade_dis;
    if (need_weak) {
      cascade_err = cascade_distribution(probe_a, instr, obs_b, psi);
      cascade_dis = cascade_distribution(probe_b, instr, obs_b, psi);
    }

    for (Method m : methods) {
      MethodResult res;
      switch (m) {
        case Method::direct:
          res = row.direct;
          break;
        case Method::three_state:
          res.eps = three_state_error(instr, obs_a, psi);
          res.eta = three_state_disturbance(instr, obs_b, psi);
          break;
        case Method::two_state:
          res.eps = two_state_error(instr, obs_a, psi);
          res.eta = two_state_disturbance(instr, obs_b, psi);
          break;
        case Method::weak_exact:
          res.eps = weak_probe_error(cascade_err->marginal({0, 1}), cfg.probe_strength);
          res.eta = weak_probe_disturbance(cascade_dis->marginal({0, 2}), cfg.probe_strength);
          break;
        case Method::weak_shots: {
          const ShotRecord rec_e =
              sample_shots(*cascade_err, cfg.shots, CounterRng::derive(cfg.seed, 2 * i));
          const ShotRecord rec_d =
              sample_shots(*cascade_dis, cfg.shots, CounterRng::derive(cfg.seed, 2 * i + 1));
          const Estimate est_e =
              estimate_from_counts(rec_e, cfg.probe_strength, EstimateMode::error);
          const Estimate est_d =
              estimate_from_counts(rec_d, cfg.probe_strength, EstimateMode::disturbance);
          res.eps = est_e.value;
          res.eta = est_d.value;
          res.eps_stderr = est_e.std_error;
          res.eta_stderr = est_d.std_error;
          break;
        }
      }
      row.methods.push_back(res);
    }

    inputs.eps = row.direct.eps;
    inputs.eta = row.direct.eta;
    if (need_ozawa0) {
      const HeisenbergPair pair = heisenberg_observables(model, obs_a, obs_b);
      const DensityState joint = model.joint_input(psi);
      const ComplexMatrix a_joint =
          tensor_product(obs_a.matrix(), ComplexMatrix::identity(model.probe_dim));
      const ComplexMatrix b_joint =
          tensor_product(obs_b.matrix(), ComplexMatrix::identity(model.probe_dim));
      const cplx corr = joint.expectation_c(commutator(pair.na, b_joint)) +
                        joint.expectation_c(commutator(a_joint, pair.db));
      inputs.ozawa0_correction = 0.5 * std::abs(corr);
    }
    for (Relation r : relations) row.reports.push_back(evaluate_relation(r, inputs));

    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

// Stable column list: theta, s, the direct reference columns, the requested
// methods in order (shot-based ones with their standard errors), then one
// (lhs, rhs, slack) triple per requested relation.
inline std::vector<std::string> table_columns(const SweepConfig& cfg) {
  std::vector<std::string> cols{"theta", "s", "eps_direct", "eta_direct"};
  for (const std::string& name : cfg.methods) {
    if (name == "direct") continue;
    cols.push_back("eps_" + name);
    if (name == "weak_shots") cols.push_back("eps_" + name + "_stderr");
    cols.push_back("eta_" + name);
    if (name == "weak_shots") cols.push_back("eta_" + name + "_stderr");
  }
  for (const std::string& name : cfg.relations) {
    cols.push_back("rel_" + name + "_lhs");
    cols.push_back("rel_" + name + "_rhs");
    cols.push_back("rel_" + name + "_slack");
  }
  return cols;
}

inline std::vector<double> table_values(const SweepConfig& cfg, const SweepRow& row) {
  std::vector<double> vals{row.theta, row.strength, row.direct.eps, row.direct.eta};
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    if (cfg.methods[m] == "direct") continue;
    const MethodResult& res = row.methods[m];
    vals.push_back(res.eps);
    if (res.eps_stderr) vals.push_back(*res.eps_stderr);
    vals.push_back(res.eta);
    if (res.eta_stderr) vals.push_back(*res.eta_stderr);
  }
  for (const EdrReport& rep : row.reports) {
    vals.push_back(rep.lhs);
    vals.push_back(rep.rhs);
    vals.push_back(rep.slack);
  }
  return vals;
}

inline void write_csv(const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                      std::ostream& out) {
  const std::vector<std::string> cols = table_columns(cfg);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const SweepRow& row : rows) {
    const std::vector<double> vals = table_values(cfg, row);
    for (std::size_t c = 0; c < vals.size(); ++c)
      out << (c ? "," : "") << detail::format_number(vals[c]);
    out << '\n';
  }
}

inline void write_json(const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                       std::ostream& out) {
  const std::vector<std::string> cols = table_columns(cfg);
  out << "[\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::vector<double> vals = table_values(cfg, rows[r]);
    out << "  {";
    for (std::size_t c = 0; c < cols.size(); ++c)
      out << (c ? "," : "") << "\"" << cols[c] << "\":" << detail::format_number(vals[c]);
    out << "}" << (r + 1 < rows.size() ? "," : "") << "\n";
  }
  out << "]\n";
}

// destination "-" writes to standard output.
inline void emit_table(const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                       const std::string& format, const std::string& destination) {
  if (rows.empty()) throw InvalidInput("emit_table: no rows to write");
  if (format != "csv" && format != "json")
    throw InvalidInput("emit_table: format must be csv or json");
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (destination != "-") {
    file.open(destination, std::ios::binary);
    if (!file) throw IoError("cannot write to '" + destination + "'");
    out = &file;
  }
  if (format == "csv")
    write_csv(cfg, rows, *out);
  else
    write_json(cfg, rows, *out);
  out->flush();
  if (out != &std::cout && !*out) throw IoError("write failed for '" + destination + "'");
}

}  // namespace edr
