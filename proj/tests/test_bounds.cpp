#include <catch2/catch_amalgamated.hpp>

#include "edr/bounds.hpp"
#include "edr/estimators.hpp"
#include "helpers.hpp"

using namespace edr;

namespace {

const Observable& obs_z() {
  static const Observable z = Observable::of_pauli("sigma_z");
  return z;
}

const Observable& obs_x() {
  static const Observable x = Observable::of_pauli("sigma_x");
  return x;
}

const DensityState& state_l() {
  static const DensityState l = DensityState::pure(standard_state("L"));
  return l;
}

RelationInputs ideal_inputs(double theta) {
  RelationInputs in;
  in.eps = 2.0 * std::sin(theta);
  in.eta = 2.0 * std::sin(M_PI / 4.0 - theta);
  in.sigma_a = 1.0;
  in.sigma_b = 1.0;
  in.c_bound = 1.0;
  return in;
}

}  // namespace

TEST_CASE("commutator bound", "[bounds]") {
  SECTION("maximized by |L> for sigma_z, sigma_x") {
    CHECK(commutator_bound_C(obs_z(), obs_x(), state_l()) ==
          Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("vanishes on the maximally mixed state") {
    CHECK(commutator_bound_C(obs_z(), obs_x(), DensityState::maximally_mixed(2)) <
          1e-14);
  }

  SECTION("vanishes on |H>") {
    CHECK(commutator_bound_C(obs_z(), obs_x(), DensityState::pure(standard_state("H"))) <
          1e-14);
  }
}

TEST_CASE("mixed-state bound D", "[bounds]") {
  SECTION("equals C on pure states") {
    std::mt19937_64 gen(103);
    for (int rep = 0; rep < 20; ++rep) {
      const DensityState psi = DensityState::pure(testutil::random_pure_state(gen));
      CHECK(mixed_bound_D(obs_z(), obs_x(), psi) ==
            Catch::Approx(commutator_bound_C(obs_z(), obs_x(), psi)).margin(1e-10));
    }
  }

  SECTION("equals 1 on the maximally mixed state") {
    CHECK(mixed_bound_D(obs_z(), obs_x(), DensityState::maximally_mixed(2)) ==
          Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("diag(0.9, 0.1) against the closed form") {
    const ComplexMatrix rho{{0.9, 0.0}, {0.0, 0.1}};
    // sqrt(rho) [sz, sx] sqrt(rho) has singular values 2 sqrt(0.9 * 0.1) twice.
    const double want = 2.0 * std::sqrt(0.9 * 0.1);
    CHECK(mixed_bound_D(obs_z(), obs_x(), DensityState(rho)) ==
          Catch::Approx(want).margin(1e-12));
  }

  SECTION("dominates C on random mixed states") {
    std::mt19937_64 gen(107);
    for (int rep = 0; rep < 20; ++rep) {
      const DensityState rho = testutil::random_mixed_state(gen, 2);
      CHECK(mixed_bound_D(obs_z(), obs_x(), rho) >=
            commutator_bound_C(obs_z(), obs_x(), rho) - 1e-10);
    }
  }
}

TEST_CASE("ozawa0 left-hand side", "[bounds]") {
  SECTION("commutator term vanishes when A = B") {
    for (double theta : {0.0, 0.3, M_PI / 8.0}) {
      const IndirectModel model = lund_wiseman_model(theta);
      const HeisenbergPair pair = heisenberg_observables(model, obs_z(), obs_z());
      const DensityState joint = model.joint_input(state_l());
      const double eps = error_direct(model, obs_z(), state_l());
      const double eta = disturbance_direct(model, obs_z(), state_l());
      CHECK(ozawa0_lhs(pair, obs_z(), obs_z(), joint) ==
            Catch::Approx(eps * eta).margin(1e-12));
    }
  }

  SECTION("carries the bound at theta = pi/8 where eps eta < C") {
    const IndirectModel model = lund_wiseman_model(M_PI / 8.0);
    const HeisenbergPair pair = heisenberg_observables(model, obs_z(), obs_x());
    const DensityState joint = model.joint_input(state_l());
    const double eps = error_direct(model, obs_z(), state_l());
    const double eta = disturbance_direct(model, obs_x(), state_l());
    CHECK(eps * eta == Catch::Approx(2.0 - std::sqrt(2.0)).margin(1e-12));
    CHECK(ozawa0_lhs(pair, obs_z(), obs_x(), joint) >= 1.0 - 1e-10);
  }

  SECTION("carries the bound at the projective setting where eps = 0") {
    const IndirectModel model = lund_wiseman_model(0.0);
    const HeisenbergPair pair = heisenberg_observables(model, obs_z(), obs_x());
    const DensityState joint = model.joint_input(state_l());
    CHECK(error_direct(model, obs_z(), state_l()) < 1e-12);
    CHECK(ozawa0_lhs(pair, obs_z(), obs_x(), joint) >= 1.0 - 1e-10);
  }
}

TEST_CASE("relation evaluation", "[bounds]") {
  SECTION("heisenberg is violated at theta = pi/8 with C = 1") {
    const EdrReport rep = evaluate_relation(Relation::heisenberg_ed, ideal_inputs(M_PI / 8.0));
    CHECK(rep.lhs == Catch::Approx(2.0 - std::sqrt(2.0)).margin(1e-12));
    CHECK(rep.rhs == 1.0);
    CHECK_FALSE(rep.satisfied);
  }

  SECTION("branciard2 saturates along the ideal curve") {
    for (int i = 0; i <= 20; ++i) {
      const EdrReport rep = evaluate_relation(
          Relation::branciard2, ideal_inputs((M_PI / 4.0) * i / 20.0));
      CHECK(rep.lhs == Catch::Approx(1.0).margin(1e-12));
      CHECK(rep.rhs == Catch::Approx(1.0).margin(1e-15));
      CHECK(rep.satisfied);
    }
  }

  SECTION("busch bound for orthogonal Bloch axes") {
    const EdrReport rep = evaluate_relation(Relation::busch_qubit, ideal_inputs(M_PI / 8.0));
    CHECK(rep.rhs == Catch::Approx(2.0 * (2.0 - std::sqrt(2.0))).margin(1e-12));
    // The ideal curve touches this bound at theta = pi/8.
    CHECK(rep.lhs == Catch::Approx(rep.rhs).margin(1e-12));
  }

  SECTION("buscemi constant") {
    const EdrReport rep = evaluate_relation(Relation::buscemi_qubit, ideal_inputs(0.2));
    const double want = std::pow(4.0 / (M_PI * M_E), 2.0);
    CHECK(rep.rhs == Catch::Approx(want).margin(1e-15));
    CHECK(std::round(rep.rhs * 1000.0) / 1000.0 == Catch::Approx(0.219).margin(1e-12));
  }

  SECTION("kennard-robertson is a preparation statement") {
    RelationInputs in = ideal_inputs(0.1);
    in.sigma_a = 0.8;
    in.sigma_b = 0.9;
    in.c_bound = 0.5;
    const EdrReport rep = evaluate_relation(Relation::kennard_robertson, in);
    CHECK(rep.lhs == Catch::Approx(0.72).margin(1e-12));
    CHECK(rep.rhs == 0.5);
    CHECK(rep.satisfied);
  }

  SECTION("ozawa0 requires the correction term") {
    CHECK_THROWS_AS(evaluate_relation(Relation::ozawa0, ideal_inputs(0.1)), InvalidInput);
    RelationInputs in = ideal_inputs(0.1);
    in.ozawa0_correction = 0.9;
    const EdrReport rep = evaluate_relation(Relation::ozawa0, in);
    CHECK(rep.lhs == Catch::Approx(in.eps * in.eta + 0.9).margin(1e-12));
  }

  SECTION("branciard2 clamps and flags out-of-model estimates") {
    RelationInputs in = ideal_inputs(0.1);
    in.eps = 2.5;  // impossible for +/-1 spectra, possible from shot noise
    const EdrReport rep = evaluate_relation(Relation::branciard2, in);
    CHECK(rep.out_of_model);
  }

  SECTION("branciard1 guards its radicand") {
    RelationInputs in = ideal_inputs(0.1);
    in.sigma_a = 0.5;
    in.sigma_b = 0.5;
    in.c_bound = 1.0;
    CHECK_THROWS_AS(evaluate_relation(Relation::branciard1, in), InvalidInput);
  }

  SECTION("negative inputs are rejected") {
    RelationInputs in = ideal_inputs(0.1);
    in.eps = -0.1;
    CHECK_THROWS_AS(evaluate_relation(Relation::ozawa, in), InvalidInput);
  }

  SECTION("relation names round-trip") {
    for (Relation r : all_relations()) CHECK(relation_from_name(relation_name(r)) == r);
    CHECK_THROWS_AS(relation_from_name("ozawa3"), InvalidInput);
  }
}

TEST_CASE("universality over states and strengths", "[bounds]") {
  std::mt19937_64 gen(109);
  for (int i = 0; i <= 20; ++i) {
    const double theta = (M_PI / 4.0) * i / 20.0;
    const IndirectModel model = lund_wiseman_model(theta);
    const HeisenbergPair pair = heisenberg_observables(model, obs_z(), obs_x());
    for (int rep = 0; rep < 10; ++rep) {
      const DensityState psi = DensityState::pure(testutil::random_pure_state(gen));
      RelationInputs in;
      in.eps = error_direct(model, obs_z(), psi);
      in.eta = disturbance_direct(model, obs_x(), psi);
      in.sigma_a = stddev(obs_z(), psi);
      in.sigma_b = stddev(obs_x(), psi);
      in.c_bound = commutator_bound_C(obs_z(), obs_x(), psi);
      const DensityState joint = model.joint_input(psi);
      in.ozawa0_correction = ozawa0_lhs(pair, obs_z(), obs_x(), joint) - in.eps * in.eta;

      for (Relation r : {Relation::ozawa0, Relation::ozawa, Relation::branciard1,
                         Relation::branciard1a, Relation::branciard2}) {
        const EdrReport report = evaluate_relation(r, in);
        INFO(relation_name(r) << " at theta " << theta << " slack " << report.slack);
        CHECK(report.satisfied);
      }

      // The simpler expression that follows from branciard1.
      const EdrReport b1a = evaluate_relation(Relation::branciard1a, in);
      CHECK(b1a.slack >= -kSlackTol);
    }
  }
}

TEST_CASE("heisenberg violation region", "[bounds]") {
  for (int i = 1; i < 20; ++i) {
    const EdrReport rep =
        evaluate_relation(Relation::heisenberg_ed, ideal_inputs((M_PI / 4.0) * i / 20.0));
    CHECK(rep.slack < 0.0);
  }
}

TEST_CASE("branciard2 monotonicity in the tilde variables", "[bounds]") {
  // lhs as a function of (eps~, eta~) with C fixed; the tilde map peaks at
  // eps = sqrt(2), so probe the monotone segment eps in [0, sqrt(2)].
  const double c = 0.8;
  auto lhs_at = [&](double eps, double eta) {
    RelationInputs in;
    in.eps = eps;
    in.eta = eta;
    in.c_bound = c;
    return evaluate_relation(Relation::branciard2, in).lhs;
  };
  for (int i = 0; i + 1 <= 10; ++i) {
    const double e0 = std::sqrt(2.0) * i / 10.0;
    const double e1 = std::sqrt(2.0) * (i + 1) / 10.0;
    CHECK(lhs_at(e1, 0.7) >= lhs_at(e0, 0.7) - 1e-12);
    CHECK(lhs_at(0.7, e1) >= lhs_at(0.7, e0) - 1e-12);
  }
}
