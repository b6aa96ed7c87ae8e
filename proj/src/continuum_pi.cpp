#include "cspi/continuum_pi.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cspi/errors.hpp"
#include "cspi/summation.hpp"

namespace cspi {

namespace {

constexpr double kPi = std::numbers::pi;

void check_shells(std::int64_t slices, std::int64_t b) {
  if (slices < 1 || slices % 2 == 0) {
    throw RefusedError("shell product needs odd N, got " + std::to_string(slices));
  }
  if (b < 0 || b > (slices - 1) / 2) {
    throw StructuralError("cutoff b = " + std::to_string(b) + " outside [0, (N-1)/2]");
  }
}

}  // namespace

void CutoffSpec::validate() const {
  if (b < 0) throw StructuralError("cutoff index b must be non-negative");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw StructuralError("beta must be positive and finite");
}

double ordering_shift(Ordering ordering) {
  switch (ordering) {
    case Ordering::Normal:
      return 0.0;
    case Ordering::AntiNormal:
      return -1.0;
    case Ordering::Weyl:
      return -0.5;
  }
  return 0.0;
}

double cutoff_dFdA(const QuadraticModel& model, const CutoffSpec& spec, Ordering ordering) {
  model.validate();
  spec.validate();
  if (spec.beta != model.beta) throw StructuralError("cutoff spec and model disagree on beta");
  const double x = model.beta_A();
  if (x == 0.0) throw SingularityError("cutoff sum has a pole at βA = 0");

  // iβω_ℓ = 2πiℓ
  CompensatedComplexSum sum;
  for (std::int64_t l = spec.b; l >= 1; --l) {
    const double w = 2.0 * kPi * static_cast<double>(l);
    sum += 1.0 / Complex(x, w) + 1.0 / Complex(x, -w);
  }
  sum += 1.0 / x;
  const Complex value = sum.value();
  if (std::abs(value.imag()) > 1e-10) throw NumericError("imaginary residue in paired cutoff sum");
  return value.real() + ordering_shift(ordering);
}

double continuum_normal_limit(const QuadraticModel& model) {
  model.validate();
  const double x = model.beta_A();
  if (x == 0.0) throw SingularityError("coth diverges at βA = 0");
  return 0.5 / std::tanh(0.5 * x);
}

double prefactor_log_closed(std::int64_t b, double beta, std::size_t modes) {
  if (b < 0) throw StructuralError("cutoff index b must be non-negative");
  if (!(beta > 0.0)) throw StructuralError("beta must be positive");
  if (modes == 0) throw StructuralError("mode count must be positive");
  const double bd = static_cast<double>(b);
  const double per_mode =
      -(2.0 * bd + 1.0) * std::log(beta) + 2.0 * bd * std::log(2.0 * kPi) + 2.0 * std::lgamma(bd + 1.0);
  return static_cast<double>(modes) * per_mode;
}

double shell_product_log(std::int64_t slices, std::int64_t b, std::size_t modes) {
  check_shells(slices, b);
  const double n = static_cast<double>(slices);
  CompensatedSum log_c;
  log_c += (n - 1.0) * std::numbers::ln2;
  for (std::int64_t shell = b + 1; shell <= (slices - 1) / 2; ++shell) {
    const double t = std::tan(kPi * static_cast<double>(shell) / n);
    if (!(t > 0.0) || !std::isfinite(t)) throw SingularityError("tangent pole at shell " + std::to_string(shell));
    log_c -= 2.0 * std::log(2.0 * t);
  }
  return static_cast<double>(modes) * log_c.value();
}

double prefactor_log_empirical(std::int64_t slices, std::int64_t b, double beta, std::size_t modes) {
  if (!(beta > 0.0)) throw StructuralError("beta must be positive");
  if (modes == 0) throw StructuralError("mode count must be positive");
  const double scale = (2.0 * static_cast<double>(b) + 1.0) * static_cast<double>(modes) *
                       std::log(static_cast<double>(slices) / beta);
  return scale + shell_product_log(slices, b, modes);
}

}  // namespace cspi
