#include "cspi/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cspi/errors.hpp"

namespace cspi {

FockBasis::FockBasis(std::size_t modes, unsigned n_max) : FockBasis(std::vector<unsigned>(modes, n_max)) {}

FockBasis::FockBasis(std::vector<unsigned> n_max) : n_max_(std::move(n_max)) {
  if (n_max_.empty()) throw StructuralError("Fock basis needs at least one mode");
  strides_.assign(n_max_.size(), 1);
  for (std::size_t i = n_max_.size(); i-- > 0;) {
    strides_[i] = dimension_;
    dimension_ *= static_cast<std::size_t>(n_max_[i]) + 1;
  }
}

std::vector<unsigned> FockBasis::occupancy(std::size_t index) const {
  if (index >= dimension_) throw StructuralError("basis index out of range");
  std::vector<unsigned> n(n_max_.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    n[i] = static_cast<unsigned>(index / strides_[i]);
    index %= strides_[i];
  }
  return n;
}

std::size_t FockBasis::index(std::span<const unsigned> occupancy) const {
  if (occupancy.size() != n_max_.size()) throw StructuralError("occupancy vector has wrong length");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < occupancy.size(); ++i) {
    if (occupancy[i] > n_max_[i]) throw StructuralError("occupancy exceeds n_max");
    idx += occupancy[i] * strides_[i];
  }
  return idx;
}

std::vector<std::size_t> FockBasis::interior(unsigned margin) const {
  std::vector<std::size_t> out;
  for (std::size_t idx = 0; idx < dimension_; ++idx) {
    const auto n = occupancy(idx);
    bool inside = true;
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n[i] + margin > n_max_[i]) inside = false;
    }
    if (inside) out.push_back(idx);
  }
  return out;
}

namespace {

// n!/(n-k)! as a double; exact while below 2^53.
double falling(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i) r *= static_cast<double>(n - i);
  return r;
}

Eigen::MatrixXcd weyl_mode_matrix(const Eigen::MatrixXcd& a, unsigned creations, unsigned annihilations) {
  const Eigen::MatrixXcd ad = a.adjoint();
  // false < true: arrangements enumerated as sequences of (is_creation).
  std::vector<bool> arrangement(creations + annihilations, false);
  std::fill(arrangement.begin() + annihilations, arrangement.end(), true);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(a.rows(), a.cols());
  long count = 0;
  do {
    Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    for (bool creation : arrangement) product = product * (creation ? ad : a);
    sum += product;
    ++count;
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  return sum / static_cast<double>(count);
}

Eigen::MatrixXcd mode_matrix(const Eigen::MatrixXcd& a, ModeExponents e, Ordering ordering) {
  const Eigen::MatrixXcd ad = a.adjoint();
  auto matrix_power = [&](const Eigen::MatrixXcd& m, unsigned k) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    for (unsigned i = 0; i < k; ++i) r = r * m;
    return r;
  };
  switch (ordering) {
    case Ordering::Normal:
      return matrix_power(ad, e.creation) * matrix_power(a, e.annihilation);
    case Ordering::AntiNormal:
      return matrix_power(a, e.annihilation) * matrix_power(ad, e.creation);
    case Ordering::Weyl:
      return weyl_mode_matrix(a, e.creation, e.annihilation);
  }
  return {};
}

void check_finite(const Eigen::MatrixXcd& H) {
  if (!H.allFinite()) throw NumericError("matrix has non-finite entries");
  if (H.rows() != H.cols() || H.rows() == 0) throw StructuralError("matrix must be square and non-empty");
}

Eigen::VectorXd hermitian_spectrum(const Eigen::MatrixXcd& H) {
  check_finite(H);
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw RefusedError("partition function requires a Hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  return solver.eigenvalues();
}

}  // namespace

Eigen::MatrixXcd operator_matrix(const BosonPoly& p, const FockBasis& basis) {
  if (p.modes() != basis.modes()) {
    throw StructuralError("operator acts on " + std::to_string(p.modes()) + " modes, basis has " +
                          std::to_string(basis.modes()));
  }
  const std::size_t dim = basis.dimension();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<unsigned> target(basis.modes());
  for (std::size_t col = 0; col < dim; ++col) {
    const auto n = basis.occupancy(col);
    for (const auto& [key, value] : p.terms()) {
      double weight_sq = 1.0;
      bool survives = true;
      for (std::size_t i = 0; i < key.size() && survives; ++i) {
        const auto [c, a] = key[i];
        if (n[i] < a || n[i] - a + c > basis.n_max(i)) {
          survives = false;
          break;
        }
        const unsigned lowered = n[i] - a;
        target[i] = lowered + c;
        weight_sq *= falling(n[i], a) * falling(target[i], c);
      }
      if (survives) out(static_cast<Eigen::Index>(basis.index(target)), static_cast<Eigen::Index>(col)) +=
          value * std::sqrt(weight_sq);
    }
  }
  return out;
}

Eigen::MatrixXcd hamiltonian_matrix(const BosonPoly& p, const FockBasis& basis, double hermiticity_tol) {
  if (!p.is_hermitian(hermiticity_tol)) throw RefusedError("Hamiltonian is not Hermitian: " + to_string(p));
  return operator_matrix(p, basis);
}

Eigen::MatrixXcd ladder_matrix(unsigned n_max) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (unsigned n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd ordered_symbol_matrix(const SymbolPoly& s, const FockBasis& basis) {
  if (s.modes() != basis.modes()) throw StructuralError("symbol and basis mode counts differ");
  std::vector<Eigen::MatrixXcd> ladders;
  for (std::size_t i = 0; i < basis.modes(); ++i) ladders.push_back(ladder_matrix(basis.n_max(i)));

  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, value] : s.terms()) {
    Eigen::MatrixXcd term = mode_matrix(ladders[0], key[0], s.ordering());
    for (std::size_t i = 1; i < key.size(); ++i) term = kronecker(term, mode_matrix(ladders[i], key[i], s.ordering()));
    out += value * term;
  }
  return out;
}

double interior_deviation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const FockBasis& basis,
                          unsigned margin) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  if (a.rows() != dim || a.cols() != dim || b.rows() != dim || b.cols() != dim) {
    throw StructuralError("matrix dimensions do not match the basis");
  }
  const auto idx = basis.interior(margin);
  if (idx.empty()) throw StructuralError("margin leaves no interior basis states");
  double worst = 0.0;
  for (auto i : idx) {
    for (auto j : idx) {
      worst = std::max(worst, std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                       b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
  }
  return worst;
}

double log_partition_function(const Eigen::MatrixXcd& H, double beta) {
  if (!(beta > 0.0)) throw StructuralError("beta must be positive");
  const Eigen::VectorXd spectrum = hermitian_spectrum(H);
  const double ground = spectrum.minCoeff();
  double sum = 0.0;
  // Ascending eigenvalues: largest Boltzmann weights first.
  for (Eigen::Index i = spectrum.size(); i-- > 0;) sum += std::exp(-beta * (spectrum(i) - ground));
  return -beta * ground + std::log(sum);
}

double partition_function(const Eigen::MatrixXcd& H, double beta) {
  const double value = std::exp(log_partition_function(H, beta));
  if (!std::isfinite(value)) throw NumericError("partition function overflows double precision");
  return value;
}

double exact_dFdA(const QuadraticModel& model) {
  model.validate();
  const double x = model.beta_A();
  if (x == 0.0) throw SingularityError("dF/dA diverges at A = 0");
  // (coth(x/2) − 1)/2 = 1/(e^x − 1)
  return 1.0 / std::expm1(x);
}

double harmonic_log_partition(const QuadraticModel& model) {
  model.validate();
  if (!(model.A > 0.0)) throw SingularityError("oscillator partition function needs A > 0");
  return -std::log1p(-std::exp(-model.beta_A()));
}

unsigned truncation_for(const QuadraticModel& model, double rel_tol) {
  model.validate();
  if (!(model.A > 0.0)) throw SingularityError("truncation needs a bounded-below spectrum (A > 0)");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw StructuralError("rel_tol must lie in (0, 1)");
  const double levels = -std::log(rel_tol) / model.beta_A();
  auto n_max = static_cast<unsigned>(std::max(0.0, std::ceil(levels) - 1.0));
  while (std::exp(-model.beta_A() * (n_max + 1.0)) >= rel_tol) ++n_max;
  return n_max;
}

Complex coherent_overlap(std::span<const Complex> z2, std::span<const Complex> z1) {
  if (z2.size() != z1.size()) throw StructuralError("coherent states have different mode counts");
  Complex exponent{};
  for (std::size_t i = 0; i < z1.size(); ++i) exponent += std::conj(z2[i]) * z1[i];
  return std::exp(exponent);
}

Quadrature gauss_laguerre(int n) {
  if (n < 1) throw StructuralError("quadrature needs at least one node");
  // Golub–Welsch for starting values, then Newton on L_n for full accuracy.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag(i) = 2.0 * i + 1.0;
  for (int i = 1; i < n; ++i) sub(i - 1) = i;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  // Returns (L_n(x), L_{n-1}(x)).
  auto laguerre = [](int order, double x) {
    double prev = 1.0;
    double cur = 1.0 - x;
    if (order == 0) return std::pair{1.0, 0.0};
    for (int k = 1; k < order; ++k) {
      const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
      prev = cur;
      cur = next;
    }
    return std::pair{cur, prev};
  };

  Quadrature q;
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int iter = 0; iter < 100; ++iter) {
      const auto [ln, lm] = laguerre(n, x);
      const double derivative = n * (ln - lm) / x;
      const double step = ln / derivative;
      x -= step;
      if (std::abs(step) <= 1e-15 * std::abs(x)) break;
    }
    const double next = laguerre(n + 1, x).first;
    q.nodes.push_back(x);
    q.weights.push_back(x / ((n + 1.0) * (n + 1.0) * next * next));
  }
  return q;
}

double check_resolution_identity(const FockBasis& basis, int radial_nodes, int angular_nodes, unsigned margin) {
  if (radial_nodes < 1 || angular_nodes < 1) throw StructuralError("quadrature sizes must be at least 1");
  const Quadrature radial = gauss_laguerre(radial_nodes);

  // The weight e^{−z̄z} and |z⟩⟨z| factorise over modes, so the integral is
  // the Kronecker product of single-mode integrals.
  Eigen::MatrixXcd total;
  for (std::size_t mode = 0; mode < basis.modes(); ++mode) {
    const unsigned cap = basis.n_max(mode);
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(cap + 1, cap + 1);
    for (unsigned n = 0; n <= cap; ++n) {
      for (unsigned m = 0; m <= cap; ++m) {
        const double log_norm = 0.5 * (std::lgamma(n + 1.0) + std::lgamma(m + 1.0));
        double r = 0.0;
        for (std::size_t j = 0; j < radial.nodes.size(); ++j) {
          r += radial.weights[j] * std::exp(0.5 * (n + m) * std::log(radial.nodes[j]) - log_norm);
        }
        Complex phase{};
        for (int k = 0; k < angular_nodes; ++k) {
          const double phi = 2.0 * std::numbers::pi * k / angular_nodes;
          phase += std::polar(1.0, (static_cast<double>(n) - static_cast<double>(m)) * phi);
        }
        q(n, m) = r * phase / static_cast<double>(angular_nodes);
      }
    }
    total = mode == 0 ? q : kronecker(total, q);
  }
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  return interior_deviation(total, Eigen::MatrixXcd::Identity(dim, dim), basis, margin);
}

}  // namespace cspi
