#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cspi/continuum_pi.hpp"
#include "cspi/errors.hpp"
#include "cspi/fit.hpp"
#include "support/oracles.hpp"

using namespace cspi;

TEST_SUITE("continuum_pi") {
  TEST_CASE("cutoff sum matches the naive Lorentzian sum") {
    for (double beta : {0.5, 1.0, 4.0}) {
      for (double A : {0.25, 1.0, -0.6}) {
        const QuadraticModel model{A, beta};
        for (std::int64_t b : {0, 1, 10, 1000}) {
          const double fast = cutoff_dFdA(model, CutoffSpec{b, beta}, Ordering::Normal);
          const auto oracle = static_cast<double>(testing::cutoff_sum_direct(b, beta * A));
          CHECK(std::abs(fast - oracle) <= 1e-13 * std::abs(oracle));
        }
      }
    }
  }

  TEST_CASE("ordering shifts are exact at every cutoff") {
    const QuadraticModel model{1.0, 1.0};
    CHECK(ordering_shift(Ordering::Normal) == 0.0);
    CHECK(ordering_shift(Ordering::AntiNormal) == -1.0);
    CHECK(ordering_shift(Ordering::Weyl) == -0.5);
    for (std::int64_t b : {0, 3, 1000, 100000}) {
      const CutoffSpec spec{b, 1.0};
      const double normal = cutoff_dFdA(model, spec, Ordering::Normal);
      CHECK(cutoff_dFdA(model, spec, Ordering::Weyl) - normal == -0.5);
      CHECK(cutoff_dFdA(model, spec, Ordering::AntiNormal) - normal == -1.0);
    }
  }

  TEST_CASE("normal cutoff converges to coth/2 with a 1/b tail") {
    for (double beta_A : {0.5, 1.0, 3.0}) {
      const QuadraticModel model{beta_A, 1.0};
      const double limit = continuum_normal_limit(model);
      CHECK(limit == doctest::Approx(0.5 / std::tanh(beta_A / 2)));
      std::vector<double> bs, diffs;
      for (std::int64_t b : {1000, 10000, 100000}) {
        const double diff = limit - cutoff_dFdA(model, CutoffSpec{b, 1.0}, Ordering::Normal);
        CHECK(diff > 0.0);
        // Σ_{ℓ>b} 2x/(x² + 4π²ℓ²) ≈ x/(2π² b)
        CHECK(diff * static_cast<double>(b) ==
              doctest::Approx(beta_A / (2 * std::numbers::pi * std::numbers::pi)).epsilon(2e-3));
        bs.push_back(static_cast<double>(b));
        diffs.push_back(diff);
      }
      CHECK(std::abs(fit_loglog(bs, diffs).slope + 1.0) <= 0.01);
    }
  }

  TEST_CASE("cutoff preconditions") {
    CHECK_THROWS_AS(cutoff_dFdA(QuadraticModel{1.0, 1.0}, CutoffSpec{5, 2.0}, Ordering::Normal), StructuralError);
    CHECK_THROWS_AS(cutoff_dFdA(QuadraticModel{1.0, 1.0}, CutoffSpec{-1, 1.0}, Ordering::Normal), StructuralError);
    CHECK_THROWS_AS(cutoff_dFdA(QuadraticModel{0.0, 1.0}, CutoffSpec{5, 1.0}, Ordering::Normal), SingularityError);
    CHECK_THROWS_AS(continuum_normal_limit(QuadraticModel{0.0, 1.0}), SingularityError);
  }

  TEST_CASE("closed prefactor against a direct log-factorial sum") {
    CHECK(prefactor_log_closed(0, 1.0, 1) == 0.0);
    for (std::int64_t b = 0; b <= 30; ++b) {
      for (double beta : {0.5, 1.0, 3.0}) {
        for (std::size_t M : {1u, 2u}) {
          const long double oracle =
              M * (-(2 * b + 1) * std::log(static_cast<long double>(beta)) +
                   2 * b * std::log(2 * std::numbers::pi_v<long double>) + 2 * testing::log_factorial_direct(b));
          CHECK(std::abs(prefactor_log_closed(b, beta, M) - static_cast<double>(oracle)) <=
                1e-12 * std::max(1.0L, std::abs(oracle)));
        }
      }
    }
  }

  TEST_CASE("empirical prefactor against a long-double shell product") {
    for (std::int64_t n : {11, 101, 1001, 10001}) {
      for (std::int64_t b : {0, 1, 4}) {
        for (double beta : {0.5, 2.0}) {
          for (std::size_t M : {1u, 3u}) {
            const auto oracle = static_cast<double>(testing::prefactor_empirical_direct(n, b, beta, M));
            CHECK(std::abs(prefactor_log_empirical(n, b, beta, M) - oracle) <= 1e-12 * std::max(1.0, std::abs(oracle)) +
                                                                                     1e-11);
          }
        }
      }
    }
  }

  TEST_CASE("b = 0 prefactor is exact at every odd N") {
    for (std::int64_t n = 1; n <= 2001; n += 2) {
      CHECK(std::abs(prefactor_log_empirical(n, 0, 1.0, 1) - prefactor_log_closed(0, 1.0, 1)) <= 1e-10);
    }
    CHECK(std::abs(prefactor_log_empirical(2001, 0, 3.0, 2) - prefactor_log_closed(0, 3.0, 2)) <= 1e-10);
  }

  TEST_CASE("empirical prefactor approaches the closed form") {
    const double closed = prefactor_log_closed(4, 1.0, 1);
    double previous = INFINITY;
    for (std::int64_t n : {1001, 10001, 100001}) {
      const double d = std::abs(prefactor_log_empirical(n, 4, 1.0, 1) - closed) / std::abs(closed);
      CHECK(d < previous);
      previous = d;
    }
    CHECK(previous <= 1e-2);
  }

  TEST_CASE("shell product preconditions") {
    CHECK_THROWS_AS(shell_product_log(10, 2, 1), RefusedError);
    CHECK_THROWS_AS(shell_product_log(11, 6, 1), StructuralError);
    CHECK(shell_product_log(11, 5, 2) == doctest::Approx(20 * std::numbers::ln2));
  }
}
