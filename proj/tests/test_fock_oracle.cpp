#include <doctest.h>

#include <cmath>
#include <vector>

#include "cspi/errors.hpp"
#include "cspi/fock_oracle.hpp"
#include "support/oracles.hpp"

using namespace cspi;

TEST_SUITE("fock_oracle") {
  TEST_CASE("basis enumeration is lexicographic with mode 0 most significant") {
    const FockBasis basis(std::vector<unsigned>{2, 3});
    CHECK(basis.dimension() == 12);
    CHECK(basis.occupancy(0) == std::vector<unsigned>{0, 0});
    CHECK(basis.occupancy(1) == std::vector<unsigned>{0, 1});
    CHECK(basis.occupancy(4) == std::vector<unsigned>{1, 0});
    for (std::size_t i = 0; i < basis.dimension(); ++i) CHECK(basis.index(basis.occupancy(i)) == i);
    CHECK(basis.interior(1).size() == 2 * 3);
    CHECK_THROWS_AS(basis.occupancy(12), StructuralError);
    CHECK_THROWS_AS(FockBasis(std::vector<unsigned>{}), StructuralError);
  }

  TEST_CASE("operator matrices agree with products of ladder matrices") {
    const FockBasis basis(2, 4);
    const std::vector<Ladder> a0 = {Ladder::annihilate(0)};
    CHECK((operator_matrix(parse_operator("a_0", 2), basis) - testing::ladder_product(a0, basis)).norm() == 0.0);
    const std::vector<Ladder> hop = {Ladder::create(0), Ladder::annihilate(1)};
    CHECK((operator_matrix(parse_operator("ad_0*a_1"), basis) - testing::ladder_product(hop, basis)).norm() < 1e-14);
    const std::vector<Ladder> quartic = {Ladder::create(1), Ladder::create(1), Ladder::annihilate(1),
                                         Ladder::annihilate(1)};
    CHECK(interior_deviation(operator_matrix(parse_operator("ad_1^2*a_1^2"), basis),
                             testing::ladder_product(quartic, basis), basis, 2) < 1e-13);
    CHECK((ladder_matrix(6) - testing::mode_annihilator(FockBasis(1, 6), 0)).norm() == 0.0);
  }

  TEST_CASE("number operator is diagonal") {
    const FockBasis basis(1, 10);
    const Eigen::MatrixXcd n = operator_matrix(parse_operator("ad_0*a_0"), basis);
    for (Eigen::Index i = 0; i <= 10; ++i) CHECK(n(i, i) == Complex(static_cast<double>(i)));
    CHECK((n - Eigen::MatrixXcd(n.diagonal().asDiagonal())).norm() == 0.0);
  }

  TEST_CASE("Hamiltonian matrices must be Hermitian") {
    const FockBasis basis(1, 4);
    CHECK_THROWS_AS(hamiltonian_matrix(parse_operator("ad_0"), basis), RefusedError);
    CHECK_NOTHROW(hamiltonian_matrix(parse_operator("ad_0 + a_0"), basis));
    CHECK_THROWS_AS(operator_matrix(parse_operator("a_1"), basis), StructuralError);
  }

  TEST_CASE("partition function against the geometric series") {
    for (double beta_A : {0.1, 1.0, 4.0}) {
      const FockBasis basis(1, 300);
      const QuadraticModel model{beta_A, 1.0};
      const Eigen::MatrixXcd H = hamiltonian_matrix(model.A * parse_operator("ad_0*a_0"), basis);
      const double oracle = testing::geometric_log_partition(beta_A, 301);
      CHECK(std::abs(log_partition_function(H, 1.0) - oracle) <= 1e-11 * std::abs(oracle));
      CHECK(std::abs(harmonic_log_partition(model) - testing::geometric_log_partition(beta_A, 4000)) <= 1e-13);
    }
    const FockBasis two(2, 30);
    const Eigen::MatrixXcd H2 = hamiltonian_matrix(parse_operator("ad_0*a_0 + 2*ad_1*a_1"), two);
    const double sum = testing::geometric_log_partition(0.7, 31) + testing::geometric_log_partition(1.4, 31);
    CHECK(std::abs(log_partition_function(H2, 0.7) - sum) <= 1e-12);
  }

  TEST_CASE("exact dF/dA is the mean occupation") {
    for (double beta_A : {0.05, 1.0, 3.0, 30.0}) {
      const QuadraticModel model{beta_A / 2.0, 2.0};
      const double oracle = testing::geometric_mean_occupation(beta_A, 40000);
      CHECK(std::abs(exact_dFdA(model) - oracle) <= 1e-10 * oracle);
    }
    CHECK_THROWS_AS(exact_dFdA(QuadraticModel{0.0, 1.0}), SingularityError);
  }

  TEST_CASE("truncation_for keeps the first discarded weight below tolerance") {
    for (double beta_A : {0.2, 1.0, 5.0}) {
      const QuadraticModel model{beta_A, 1.0};
      for (double tol : {1e-6, 1e-12}) {
        const unsigned n = truncation_for(model, tol);
        CHECK(std::exp(-beta_A * (n + 1)) < tol);
        CHECK(std::exp(-beta_A * n) >= tol);
      }
    }
    CHECK_THROWS_AS(truncation_for(QuadraticModel{-1.0, 1.0}), SingularityError);
  }

  TEST_CASE("coherent overlap matches the truncated series") {
    for (int i = 0; i < 6; ++i) {
      const Complex z1(0.3 * i - 0.7, 0.2 * i), z2(1.1 - 0.25 * i, -0.4 + 0.1 * i);
      const Complex exact = coherent_overlap(std::span(&z2, 1), std::span(&z1, 1));
      CHECK(std::abs(exact - testing::overlap_series(z2, z1, 60)) <= 1e-14 * std::abs(exact) + 1e-15);
    }
    const std::vector<Complex> a = {Complex(0.5, 0.1), Complex(-0.2, 0.3)}, b = {Complex(1.0, -1.0), Complex(0.4)};
    CHECK(std::abs(coherent_overlap(a, b) - testing::overlap_series(a[0], b[0], 60) *
                                                testing::overlap_series(a[1], b[1], 60)) < 1e-14);
  }

  TEST_CASE("Gauss-Laguerre integrates polynomial moments exactly") {
    for (int n : {1, 2, 5, 10, 32, 64}) {
      const Quadrature q = gauss_laguerre(n);
      REQUIRE(q.nodes.size() == static_cast<std::size_t>(n));
      for (int k = 0; k < std::min(2 * n, 60); ++k) {
        long double sum = 0.0L;
        for (int i = 0; i < n; ++i) sum += q.weights[i] * std::pow(static_cast<long double>(q.nodes[i]), k);
        const long double factorial = std::tgamma(static_cast<long double>(k + 1));
        CHECK_MESSAGE(std::abs(sum / factorial - 1.0L) <= 1e-11L, "n=", n, " k=", k);
      }
    }
  }

  TEST_CASE("resolution of the identity") {
    CHECK(check_resolution_identity(FockBasis(1, 8), 64, 64, 2) <= 1e-6);
    CHECK(check_resolution_identity(FockBasis(2, 4), 32, 16, 1) <= 1e-6);
    CHECK(check_resolution_identity(FockBasis(1, 12), 64, 13, 0) <= 1e-6);
  }

  TEST_CASE("uniform angular grid cancels phases only above the interior occupancy") {
    const FockBasis basis(1, 8);
    // Interior occupancies reach 6, so e^{ijφ} with |j| ≤ 6 must cancel: K ≥ 7.
    CHECK(check_resolution_identity(basis, 64, 7, 2) <= 1e-6);
    CHECK(check_resolution_identity(basis, 64, 6, 2) > 0.1);
  }
}
