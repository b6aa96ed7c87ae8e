#pragma once

// Exact discrete coherent-state path integrals in normal, anti-normal and
// Weyl order: action evaluators on explicit periodic paths, Gaussian
// evaluation of the oscillator in the frequency domain, and the Berry
// determinant product identity.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cspi/operator_algebra.hpp"
#include "cspi/quadratic_model.hpp"

namespace cspi {

// Imaginary-time lattice of N slices over [0, β). Frequencies are
// ω_n = 2πn/N with n ∈ {−(N−1)/2, …, (N−1)/2} for odd N and
// n ∈ {−N/2+1, …, N/2} for even N.
class MatsubaraGrid {
 public:
  MatsubaraGrid(std::int64_t slices, double beta);

  std::int64_t slices() const { return slices_; }
  double beta() const { return beta_; }
  double delta() const { return beta_ / static_cast<double>(slices_); }
  bool is_odd() const { return slices_ % 2 == 1; }

  std::int64_t min_index() const { return -(slices_ - 1) / 2; }
  std::int64_t max_index() const { return slices_ / 2; }
  double frequency(std::int64_t n) const;
  std::vector<std::int64_t> frequency_indices() const;

  // Throws RefusedError for even N: the Weyl construction's determinant
  // Π(1+e^{iω})/2 vanishes there.
  void require_odd(const char* what) const;

 private:
  std::int64_t slices_;
  double beta_;
};

// A periodic path of complex amplitudes, rows = time slices (or frequencies,
// in ascending index order starting at MatsubaraGrid::min_index()),
// columns = modes.
class DiscretePath {
 public:
  enum class Domain { Time, Frequency };

  DiscretePath(Eigen::MatrixXcd values, Domain domain = Domain::Time);

  static DiscretePath zeros(std::int64_t slices, std::size_t modes);
  static DiscretePath constant(std::int64_t slices, std::span<const Complex> value);

  Domain domain() const { return domain_; }
  std::int64_t slices() const { return values_.rows(); }
  std::size_t modes() const { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXcd& values() const { return values_; }

  // Periodic slice access: at(N) == at(0), at(−1) == at(N−1).
  Eigen::VectorXcd at(std::int64_t slice) const;

  // Σ_l ‖z_l‖²
  double squared_norm() const { return values_.squaredNorm(); }

  // Path shifted so that new z_l = old z_{l+shift}.
  DiscretePath cyclic_shift(std::int64_t shift) const;

 private:
  Eigen::MatrixXcd values_;
  Domain domain_;
};

// z_ω = N^{−1/2} Σ_l z_l e^{−iωl}; unitary.
DiscretePath dft(const DiscretePath& path);
// z_l = N^{−1/2} Σ_ω z_ω e^{iωl}.
DiscretePath inverse_dft(const DiscretePath& spectrum);

// −Σ_l [z_l†(z_l − z_{l+1}) + Δ H(z_l†, z_{l+1})], H tagged Normal.
Complex action_normal(const DiscretePath& path, const SymbolPoly& normal_symbol, const MatsubaraGrid& grid);

// −Σ_l [z_l†(z_l − z_{l+1}) + Δ h(z_l†, z_l)], h tagged AntiNormal.
Complex action_antinormal(const DiscretePath& path, const SymbolPoly& antinormal_symbol,
                          const MatsubaraGrid& grid);

// 2i Σ_ω z_ω†z_ω tan(ω/2) − Σ_l Δ 𝓗(z_l†, z_l), 𝓗 tagged Weyl, N odd.
Complex action_weyl(const DiscretePath& path, const SymbolPoly& weyl_symbol, const MatsubaraGrid& grid);

struct BerryDeterminant {
  bool vanishes = false;
  double log_value = 0.0;  // ln of the (positive) value; meaningless when vanishes
};

// [Π_ω (1 + e^{iω})/2]^M from the roots-of-unity identity: 2^{(1−N)M} for
// odd N, zero for even N.
BerryDeterminant berry_determinant_log(std::int64_t slices, std::size_t modes);

// The same product accumulated factor by factor in log domain over ±ω pairs.
BerryDeterminant berry_determinant_log_direct(std::int64_t slices, std::size_t modes);

// Re Σ_ω 1/(N(e^{−iω} − 1 + βA/N)) for the normal-order discretisation of
// A a†a. Sums over ±ω pairs with ω = 0 last.
double normal_discrete_dFdA(const MatsubaraGrid& grid, const QuadraticModel& model);

// ln of ∫ over the Fourier amplitudes with |n| ≤ max_shell of
// exp[2i Σ |z_ω|² tan(ω/2) − Σ_l Δ(A|z_l|² − A/2)], i.e. e^{βA/2} times the
// Gaussian factors 1/(βA/N − 2i tan(ω/2)); the 2^{N−1} prefactor excluded.
double weyl_shell_log_integral(const MatsubaraGrid& grid, const QuadraticModel& model, std::int64_t max_shell);

// The same integral for every max_shell = 0..(N−1)/2 at once (entry s is
// max_shell = s), built as a running sum outward from ω = 0.
std::vector<double> weyl_shell_log_integrals(const MatsubaraGrid& grid, const QuadraticModel& model);

// ln Z_N of the Weyl-order discretisation with 𝓗 = A z̄z − A/2:
// (N−1) ln 2 + βA/2 − Σ_ω ln(−2i tan(ω/2) + βA/N). Requires odd N, A > 0.
double weyl_discrete_logZ_quadratic(const MatsubaraGrid& grid, const QuadraticModel& model);

// −(1/β) ∂_A ln Z_N of the above, evaluated analytically:
// −1/2 + (1/N) Σ_ω 1/(βA/N − 2i tan(ω/2)).
double weyl_discrete_dFdA(const MatsubaraGrid& grid, const QuadraticModel& model);

inline constexpr double kPoleTolerance = 1e-14;

}  // namespace cspi
