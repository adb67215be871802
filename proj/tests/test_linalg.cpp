#include <catch2/catch_amalgamated.hpp>

#include "edr/linalg.hpp"
#include "edr/qubit.hpp"
#include "helpers.hpp"

using namespace edr;
using testutil::cmat;

TEST_CASE("tensor product identities", "[linalg]") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);

  SECTION("I2 (x) I2 = I4") {
    CHECK(max_diff(tensor_product(i2, i2), ComplexMatrix::identity(4)) == 0.0);
  }

  SECTION("sigma_z (x) I2 = diag(1,1,-1,-1)") {
    const ComplexMatrix got = tensor_product(sigma_z(), i2);
    ComplexMatrix want(4, 4);
    want(0, 0) = 1.0;
    want(1, 1) = 1.0;
    want(2, 2) = -1.0;
    want(3, 3) = -1.0;
    CHECK(max_diff(got, want) == 0.0);
  }

  SECTION("(sigma_x (x) sigma_x)^2 = I4, against a raw multiply") {
    const ComplexMatrix xx = tensor_product(sigma_x(), sigma_x());
    const cmat square = testutil::raw_mul(testutil::to_raw(xx), testutil::to_raw(xx));
    CHECK(testutil::raw_max_diff(square, testutil::to_raw(ComplexMatrix::identity(4))) == 0.0);
    CHECK(max_diff(xx * xx, ComplexMatrix::identity(4)) == 0.0);
  }

  SECTION("matches the raw Kronecker product on random input") {
    std::mt19937_64 gen(7);
    const ComplexMatrix a = testutil::random_hermitian(gen, 3);
    const ComplexMatrix b = testutil::random_hermitian(gen, 2);
    CHECK(testutil::raw_max_diff(testutil::to_raw(tensor_product(a, b)),
                                 testutil::raw_kron(testutil::to_raw(a), testutil::to_raw(b))) ==
          0.0);
  }

  SECTION("associative for integer-entried inputs") {
    const ComplexMatrix z = sigma_z(), x = sigma_x(), y = sigma_y();
    CHECK(max_diff(tensor_product(tensor_product(z, x), y),
                   tensor_product(z, tensor_product(x, y))) == 0.0);
  }

  SECTION("dimension overflow is rejected") {
    const ComplexMatrix big = ComplexMatrix::identity(16);
    CHECK_THROWS_AS(tensor_product(big, ComplexMatrix::identity(8)), InvalidInput);
  }
}

TEST_CASE("partial trace", "[linalg]") {
  std::mt19937_64 gen(11);

  SECTION("product state factorizes") {
    const DensityState rho = testutil::random_mixed_state(gen, 2);
    ComplexMatrix tau = testutil::random_hermitian(gen, 3);
    tau = tau * tau;  // positive
    const ComplexMatrix joint = tensor_product(rho.matrix(), tau);
    const ComplexMatrix kept = partial_trace(joint, {2, 3}, Keep::first);
    const ComplexMatrix want = rho.matrix() * tau.trace();
    CHECK(max_diff(kept, want) < 1e-12);
  }

  SECTION("I4/4 over (2,2) keeps I2/2") {
    ComplexMatrix quarter = ComplexMatrix::identity(4);
    quarter *= cplx{0.25, 0.0};
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= cplx{0.5, 0.0};
    CHECK(max_diff(partial_trace(quarter, {2, 2}, Keep::second), half) == 0.0);
  }

  SECTION("Bell state marginals are maximally mixed") {
    ComplexMatrix bell(4, 1);
    bell(0, 0) = 1.0 / std::sqrt(2.0);
    bell(3, 0) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix proj = bell * bell.adjoint();
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= cplx{0.5, 0.0};
    CHECK(max_diff(partial_trace(proj, {2, 2}, Keep::first), half) < 1e-15);
    CHECK(max_diff(partial_trace(proj, {2, 2}, Keep::second), half) < 1e-15);
  }

  SECTION("trace is preserved and bad shapes are rejected") {
    const ComplexMatrix h = testutil::random_hermitian(gen, 6);
    const ComplexMatrix reduced = partial_trace(h, {2, 3}, Keep::first);
    CHECK(std::abs(reduced.trace() - h.trace()) < 1e-12);
    CHECK_THROWS_AS(partial_trace(h, {2, 2}, Keep::first), InvalidInput);
  }
}

TEST_CASE("hermitian eigendecomposition", "[linalg]") {
  SECTION("sigma_z") {
    const HermitianEigen eig = hermitian_eig(sigma_z());
    REQUIRE(eig.values.size() == 2);
    CHECK(eig.values[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(eig.values[1] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(std::abs(eig.vectors(0, 0)) == Catch::Approx(1.0).margin(1e-14));
    CHECK(std::abs(eig.vectors(1, 1)) == Catch::Approx(1.0).margin(1e-14));
  }

  SECTION("sigma_x eigenvectors are the diagonal states") {
    const HermitianEigen eig = hermitian_eig(sigma_x());
    CHECK(eig.values[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(eig.values[1] == Catch::Approx(-1.0).margin(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(eig.vectors(0, 0) - r) < 1e-12);
    CHECK(std::abs(eig.vectors(1, 0) - r) < 1e-12);
    CHECK(std::abs(eig.vectors(0, 1) - r) < 1e-12);
    CHECK(std::abs(eig.vectors(1, 1) + r) < 1e-12);
  }

  SECTION("random Hermitian matrices reconstruct") {
    std::mt19937_64 gen(42);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t n = 2 + rep % 5;  // up to 6
      const ComplexMatrix h = testutil::random_hermitian(gen, n);
      const HermitianEigen eig = hermitian_eig(h);
      ComplexMatrix rec(n, n);
      ComplexMatrix gram(n, n);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            rec(i, j) += eig.values[k] * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
          }
      CHECK(max_diff(rec, h) < 1e-10);
      // Orthonormality of the eigenvector matrix.
      CHECK(max_diff(eig.vectors.adjoint() * eig.vectors, ComplexMatrix::identity(n)) < 1e-10);
      // Descending order.
      for (std::size_t k = 1; k < n; ++k) CHECK(eig.values[k - 1] >= eig.values[k]);
    }
  }

  SECTION("degenerate spectrum still gives an orthonormal frame") {
    const HermitianEigen eig = hermitian_eig(ComplexMatrix::identity(4));
    CHECK(max_diff(eig.vectors.adjoint() * eig.vectors, ComplexMatrix::identity(4)) < 1e-12);
    for (double v : eig.values) CHECK(v == Catch::Approx(1.0).margin(1e-14));
  }

  SECTION("non-Hermitian input is rejected with the asymmetry in the message") {
    ComplexMatrix bad(2, 2);
    bad(0, 1) = 0.5;
    try {
      hermitian_eig(bad);
      FAIL("expected NumericError");
    } catch (const NumericError& err) {
      CHECK(std::string(err.what()).find("0.5") != std::string::npos);
    }
  }
}

TEST_CASE("operator absolute value", "[linalg]") {
  SECTION("|sigma_y| = I") {
    CHECK(max_diff(operator_abs(sigma_y()), ComplexMatrix::identity(2)) < 1e-12);
  }

  SECTION("|diag(-3, 2)| = diag(3, 2)") {
    const ComplexMatrix d{{-3.0, 0.0}, {0.0, 2.0}};
    const ComplexMatrix want{{3.0, 0.0}, {0.0, 2.0}};
    CHECK(max_diff(operator_abs(d), want) < 1e-12);
  }

  SECTION("|i sigma_y| = I, matching the square-root oracle") {
    const ComplexMatrix m = sigma_y() * cplx{0.0, 1.0};
    // (i sigma_y)^dag (i sigma_y) = I, so the positive square root is I.
    const cmat gram = testutil::raw_mul(testutil::to_raw(m.adjoint()), testutil::to_raw(m));
    CHECK(testutil::raw_max_diff(gram, testutil::to_raw(ComplexMatrix::identity(2))) < 1e-15);
    CHECK(max_diff(operator_abs(m), ComplexMatrix::identity(2)) < 1e-12);
  }

  SECTION("result is PSD for random inputs") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
      ComplexMatrix m(3, 3);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) m(r, c) = cplx{normal(gen), normal(gen)};
      const HermitianEigen eig = hermitian_eig(operator_abs(m));
      CHECK(eig.values.back() >= -1e-12);
    }
  }
}

TEST_CASE("psd square root and trace norm", "[linalg]") {
  SECTION("sqrt of a diagonal") {
    const ComplexMatrix d{{4.0, 0.0}, {0.0, 9.0}};
    const ComplexMatrix want{{2.0, 0.0}, {0.0, 3.0}};
    CHECK(max_diff(sqrt_psd(d), want) < 1e-12);
  }

  SECTION("square of the root recovers the matrix") {
    std::mt19937_64 gen(5);
    const DensityState rho = testutil::random_mixed_state(gen, 4);
    const ComplexMatrix root = sqrt_psd(rho.matrix());
    CHECK(max_diff(root * root, rho.matrix()) < 1e-10);
  }

  SECTION("negative definite input is rejected") {
    const ComplexMatrix neg{{-1.0, 0.0}, {0.0, -1.0}};
    CHECK_THROWS_AS(sqrt_psd(neg), NumericError);
  }

  SECTION("trace norm of i sigma_y is 2") {
    CHECK(trace_norm(sigma_y() * cplx{0.0, 1.0}) == Catch::Approx(2.0).margin(1e-12));
  }
}
