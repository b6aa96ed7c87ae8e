#pragma once

// Sharp-cutoff continuum Matsubara sums per ordering and the continuum
// normalisation prefactor, both in closed form and from the finite-N shell
// product.

#include <cstddef>
#include <cstdint>

#include "cspi/operator_algebra.hpp"
#include "cspi/quadratic_model.hpp"

namespace cspi {

// Keeps continuum frequencies ω_ℓ = 2πℓ/β with |ℓ| ≤ b.
struct CutoffSpec {
  std::int64_t b = 0;
  double beta = 1.0;

  void validate() const;
};

// Constant the ordering adds to ∂F/∂A for A a†a: symbol = A z̄z + shift·A.
double ordering_shift(Ordering ordering);

// Re Σ_{|ℓ|≤b} 1/(iβω_ℓ + βA) + ordering_shift, summed over ±ℓ pairs from
// the cutoff inward with ℓ = 0 last. spec.beta must match model.beta.
double cutoff_dFdA(const QuadraticModel& model, const CutoffSpec& spec, Ordering ordering);

// b → ∞ limit of the normal-order cutoff sum, (1/2) coth(βA/2).
double continuum_normal_limit(const QuadraticModel& model);

// M·[−(2b+1) ln β + 2b ln 2π + 2 ln b!].
double prefactor_log_closed(std::int64_t b, double beta, std::size_t modes);

// ln c_{B,b} = (N−1)M ln 2 − M Σ_{B'=b+1}^{B} ln(4 tan²(ω_{B'}/2)), N = 2B+1.
double shell_product_log(std::int64_t slices, std::int64_t b, std::size_t modes);

// ln[(N/β)^{(2b+1)M} c_{B,b}].
double prefactor_log_empirical(std::int64_t slices, std::int64_t b, double beta, std::size_t modes);

}  // namespace cspi
