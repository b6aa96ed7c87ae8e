#include "cspi/discrete_pi.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cspi/errors.hpp"
#include "cspi/summation.hpp"

namespace cspi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kImagResidue = 1e-10;
constexpr double kPairResidue = 1e-12;

// e^{−2πik/N} for k = 0..N−1, each from an exactly reduced angle.
std::vector<Complex> twiddles(std::int64_t n) {
  std::vector<Complex> table(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    table[static_cast<std::size_t>(k)] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
  }
  return table;
}

std::int64_t wrap(std::int64_t k, std::int64_t n) {
  const std::int64_t r = k % n;
  return r < 0 ? r + n : r;
}

void check_path(const DiscretePath& path, const MatsubaraGrid& grid, std::size_t modes) {
  if (path.domain() != DiscretePath::Domain::Time) throw StructuralError("action expects a time-domain path");
  if (path.slices() != grid.slices()) {
    throw StructuralError("path has " + std::to_string(path.slices()) + " slices, grid has " +
                          std::to_string(grid.slices()));
  }
  if (path.modes() != modes) throw StructuralError("path and symbol mode counts differ");
}

void check_tag(const SymbolPoly& s, Ordering expected) {
  if (s.ordering() != expected) {
    throw RefusedError("action needs a " + std::string(to_string(expected)) + "-ordered symbol, got " +
                       std::string(to_string(s.ordering())));
  }
}

std::vector<Complex> row(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<Complex> conj_row(const Eigen::VectorXcd& v) {
  std::vector<Complex> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = std::conj(v(i));
  return out;
}

// Berry/kinetic term shared by normal and anti-normal order: Σ_l z_l†(z_l − z_{l+1}).
Complex kinetic(const DiscretePath& path) {
  CompensatedComplexSum sum;
  for (std::int64_t l = 0; l < path.slices(); ++l) {
    const Eigen::VectorXcd z = path.at(l);
    sum += z.dot(z - path.at(l + 1));  // Eigen's dot conjugates the left operand
  }
  return sum.value();
}

double half_tan(const MatsubaraGrid& grid, std::int64_t n) {
  return std::tan(kPi * static_cast<double>(n) / static_cast<double>(grid.slices()));
}

void require_positive_A(const QuadraticModel& model) {
  model.validate();
  if (!(model.A > 0.0)) throw SingularityError("Weyl Gaussian integral needs A > 0 for convergence");
}

}  // namespace

MatsubaraGrid::MatsubaraGrid(std::int64_t slices, double beta) : slices_(slices), beta_(beta) {
  if (slices < 1) throw StructuralError("slice count must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw StructuralError("beta must be positive and finite");
}

double MatsubaraGrid::frequency(std::int64_t n) const {
  return 2.0 * kPi * static_cast<double>(n) / static_cast<double>(slices_);
}

std::vector<std::int64_t> MatsubaraGrid::frequency_indices() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(slices_));
  for (std::int64_t n = min_index(); n <= max_index(); ++n) out.push_back(n);
  return out;
}

void MatsubaraGrid::require_odd(const char* what) const {
  if (!is_odd()) {
    throw RefusedError(std::string(what) + ": Weyl construction needs odd N (N = " + std::to_string(slices_) +
                       " makes the Berry determinant vanish)");
  }
}

DiscretePath::DiscretePath(Eigen::MatrixXcd values, Domain domain) : values_(std::move(values)), domain_(domain) {
  if (values_.rows() < 1 || values_.cols() < 1) throw StructuralError("path needs at least one slice and mode");
}

DiscretePath DiscretePath::zeros(std::int64_t slices, std::size_t modes) {
  return DiscretePath(Eigen::MatrixXcd::Zero(slices, static_cast<Eigen::Index>(modes)));
}

DiscretePath DiscretePath::constant(std::int64_t slices, std::span<const Complex> value) {
  Eigen::MatrixXcd m(slices, static_cast<Eigen::Index>(value.size()));
  for (std::int64_t l = 0; l < slices; ++l) {
    for (std::size_t i = 0; i < value.size(); ++i) m(l, static_cast<Eigen::Index>(i)) = value[i];
  }
  return DiscretePath(std::move(m));
}

Eigen::VectorXcd DiscretePath::at(std::int64_t slice) const {
  return values_.row(wrap(slice, slices())).transpose();
}

DiscretePath DiscretePath::cyclic_shift(std::int64_t shift) const {
  Eigen::MatrixXcd m(values_.rows(), values_.cols());
  for (std::int64_t l = 0; l < slices(); ++l) m.row(l) = values_.row(wrap(l + shift, slices()));
  return DiscretePath(std::move(m), domain_);
}

DiscretePath dft(const DiscretePath& path) {
  if (path.domain() != DiscretePath::Domain::Time) throw StructuralError("dft expects a time-domain path");
  const std::int64_t n = path.slices();
  const MatsubaraGrid grid(n, 1.0);
  const auto table = twiddles(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, path.values().cols());
  for (std::int64_t j = 0; j < n; ++j) {
    const std::int64_t freq = grid.min_index() + j;
    for (std::int64_t l = 0; l < n; ++l) {
      out.row(j) += table[static_cast<std::size_t>(wrap(freq * l, n))] * path.values().row(l);
    }
  }
  return DiscretePath(out * norm, DiscretePath::Domain::Frequency);
}

DiscretePath inverse_dft(const DiscretePath& spectrum) {
  if (spectrum.domain() != DiscretePath::Domain::Frequency) {
    throw StructuralError("inverse_dft expects a frequency-domain path");
  }
  const std::int64_t n = spectrum.slices();
  const MatsubaraGrid grid(n, 1.0);
  const auto table = twiddles(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, spectrum.values().cols());
  for (std::int64_t l = 0; l < n; ++l) {
    for (std::int64_t j = 0; j < n; ++j) {
      const std::int64_t freq = grid.min_index() + j;
      // e^{+iωl} = conj(e^{−iωl})
      out.row(l) += std::conj(table[static_cast<std::size_t>(wrap(freq * l, n))]) * spectrum.values().row(j);
    }
  }
  return DiscretePath(out * norm, DiscretePath::Domain::Time);
}

Complex action_normal(const DiscretePath& path, const SymbolPoly& normal_symbol, const MatsubaraGrid& grid) {
  check_tag(normal_symbol, Ordering::Normal);
  check_path(path, grid, normal_symbol.modes());
  CompensatedComplexSum hamiltonian;
  for (std::int64_t l = 0; l < path.slices(); ++l) {
    hamiltonian += normal_symbol.evaluate(conj_row(path.at(l)), row(path.at(l + 1)));
  }
  return -(kinetic(path) + grid.delta() * hamiltonian.value());
}

Complex action_antinormal(const DiscretePath& path, const SymbolPoly& antinormal_symbol,
                          const MatsubaraGrid& grid) {
  check_tag(antinormal_symbol, Ordering::AntiNormal);
  check_path(path, grid, antinormal_symbol.modes());
  CompensatedComplexSum hamiltonian;
  for (std::int64_t l = 0; l < path.slices(); ++l) {
    const Eigen::VectorXcd z = path.at(l);
    hamiltonian += antinormal_symbol.evaluate(conj_row(z), row(z));
  }
  return -(kinetic(path) + grid.delta() * hamiltonian.value());
}

Complex action_weyl(const DiscretePath& path, const SymbolPoly& weyl_symbol, const MatsubaraGrid& grid) {
  check_tag(weyl_symbol, Ordering::Weyl);
  check_path(path, grid, weyl_symbol.modes());
  grid.require_odd("action_weyl");

  const DiscretePath spectrum = dft(path);
  CompensatedSum berry;
  for (std::int64_t j = 0; j < spectrum.slices(); ++j) {
    berry += spectrum.values().row(j).squaredNorm() * half_tan(grid, grid.min_index() + j);
  }
  CompensatedComplexSum hamiltonian;
  for (std::int64_t l = 0; l < path.slices(); ++l) {
    const Eigen::VectorXcd z = path.at(l);
    hamiltonian += weyl_symbol.evaluate(conj_row(z), row(z));
  }
  return Complex(0.0, 2.0 * berry.value()) - grid.delta() * hamiltonian.value();
}

BerryDeterminant berry_determinant_log(std::int64_t slices, std::size_t modes) {
  if (slices < 1) throw StructuralError("slice count must be positive");
  if (slices % 2 == 0) return {true, 0.0};
  return {false, static_cast<double>(1 - slices) * static_cast<double>(modes) * std::numbers::ln2};
}

BerryDeterminant berry_determinant_log_direct(std::int64_t slices, std::size_t modes) {
  const MatsubaraGrid grid(slices, 1.0);
  auto factor = [&](std::int64_t n) { return 0.5 * (1.0 + std::polar(1.0, grid.frequency(n))); };

  CompensatedSum log_sum;
  if (!grid.is_odd()) {
    // ω = π pairs with itself.
    const Complex f = factor(grid.max_index());
    if (std::abs(f) < kPoleTolerance) return {true, 0.0};
    log_sum += std::log(std::abs(f));
  }
  for (std::int64_t n = (slices - 1) / 2; n >= 1; --n) {
    const Complex pair = factor(n) * factor(-n);
    if (std::abs(pair) < kPoleTolerance) return {true, 0.0};
    if (std::abs(pair.imag()) > kPairResidue * std::abs(pair.real())) {
      throw NumericError("Berry factor pair is not real at n = " + std::to_string(n));
    }
    log_sum += std::log(pair.real());
  }
  return {false, static_cast<double>(modes) * log_sum.value()};
}

double normal_discrete_dFdA(const MatsubaraGrid& grid, const QuadraticModel& model) {
  model.validate();
  const double n = static_cast<double>(grid.slices());
  const double x = model.beta_A() / n;
  auto term = [&](std::int64_t k) {
    const Complex denominator = n * (std::polar(1.0, -grid.frequency(k)) - 1.0 + x);
    if (std::abs(denominator) < kPoleTolerance) {
      throw SingularityError("pole in the normal-order frequency sum at n = " + std::to_string(k));
    }
    return 1.0 / denominator;
  };

  CompensatedComplexSum sum;
  if (!grid.is_odd()) sum += term(grid.max_index());
  for (std::int64_t k = (grid.slices() - 1) / 2; k >= 1; --k) sum += term(k) + term(-k);
  sum += term(0);

  const Complex value = sum.value();
  if (std::abs(value.imag()) > kImagResidue) {
    throw NumericError("imaginary residue " + std::to_string(value.imag()) + " in paired frequency sum");
  }
  return value.real();
}

double weyl_shell_log_integral(const MatsubaraGrid& grid, const QuadraticModel& model, std::int64_t max_shell) {
  grid.require_odd("weyl_shell_log_integral");
  require_positive_A(model);
  if (max_shell < 0 || max_shell > grid.max_index()) throw StructuralError("shell index out of range");
  const double x = model.beta_A() / static_cast<double>(grid.slices());

  CompensatedSum log_z;
  log_z += 0.5 * model.beta_A();
  for (std::int64_t n = max_shell; n >= 1; --n) {
    const double t = half_tan(grid, n);
    const Complex pair = Complex(x, -2.0 * t) * Complex(x, 2.0 * t);
    if (std::abs(pair.imag()) > kPairResidue * std::abs(pair.real())) {
      throw NumericError("Gaussian factor pair is not real at n = " + std::to_string(n));
    }
    log_z -= std::log(pair.real());
  }
  log_z -= std::log(x);
  return log_z.value();
}

std::vector<double> weyl_shell_log_integrals(const MatsubaraGrid& grid, const QuadraticModel& model) {
  grid.require_odd("weyl_shell_log_integrals");
  require_positive_A(model);
  const double x = model.beta_A() / static_cast<double>(grid.slices());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid.max_index() + 1));
  CompensatedSum log_z;
  log_z += 0.5 * model.beta_A();
  log_z -= std::log(x);
  out.push_back(log_z.value());
  for (std::int64_t n = 1; n <= grid.max_index(); ++n) {
    const double t = half_tan(grid, n);
    log_z -= std::log(x * x + 4.0 * t * t);
    out.push_back(log_z.value());
  }
  return out;
}

double weyl_discrete_logZ_quadratic(const MatsubaraGrid& grid, const QuadraticModel& model) {
  grid.require_odd("weyl_discrete_logZ_quadratic");
  const double prefactor = static_cast<double>(grid.slices() - 1) * std::numbers::ln2;
  return prefactor + weyl_shell_log_integral(grid, model, grid.max_index());
}

double weyl_discrete_dFdA(const MatsubaraGrid& grid, const QuadraticModel& model) {
  grid.require_odd("weyl_discrete_dFdA");
  require_positive_A(model);
  const double n = static_cast<double>(grid.slices());
  const double x = model.beta_A() / n;

  CompensatedComplexSum sum;
  for (std::int64_t k = grid.max_index(); k >= 1; --k) {
    const double t = half_tan(grid, k);
    sum += 1.0 / Complex(x, -2.0 * t) + 1.0 / Complex(x, 2.0 * t);
  }
  sum += 1.0 / x;
  const Complex value = sum.value();
  if (std::abs(value.imag()) > kImagResidue) throw NumericError("imaginary residue in Weyl frequency sum");
  return -0.5 + value.real() / n;
}

}  // namespace cspi
