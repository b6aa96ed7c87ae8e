#pragma once

// Truncated Fock-space ground truth: operator matrices, exact partition
// functions, oscillator closed forms, coherent-state overlaps and a
// quadrature check of the coherent-state resolution of identity.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cspi/operator_algebra.hpp"
#include "cspi/quadratic_model.hpp"

namespace cspi {

// Occupancy basis |n_0, …, n_{M-1}⟩ with n_i ≤ n_max_i. Basis vectors are
// enumerated lexicographically in the occupancy vector, mode 0 most
// significant, so the full space is the Kronecker product mode 0 ⊗ mode 1 ⊗ ….
class FockBasis {
 public:
  FockBasis(std::size_t modes, unsigned n_max);
  explicit FockBasis(std::vector<unsigned> n_max);

  std::size_t modes() const { return n_max_.size(); }
  unsigned n_max(std::size_t mode) const { return n_max_.at(mode); }
  std::size_t dimension() const { return dimension_; }

  std::vector<unsigned> occupancy(std::size_t index) const;
  std::size_t index(std::span<const unsigned> occupancy) const;

  // Basis indices whose occupancies all satisfy n_i ≤ n_max_i − margin.
  std::vector<std::size_t> interior(unsigned margin) const;

 private:
  std::vector<unsigned> n_max_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

// ⟨m|p|n⟩ from closed-form ladder matrix elements. Components that leave the
// truncated space are dropped, so every returned entry is exact.
Eigen::MatrixXcd operator_matrix(const BosonPoly& p, const FockBasis& basis);

// operator_matrix restricted to Hermitian p; throws RefusedError otherwise.
Eigen::MatrixXcd hamiltonian_matrix(const BosonPoly& p, const FockBasis& basis,
                                    double hermiticity_tol = 1e-12);

// Truncated annihilation matrix of a single mode with occupancy cap n_max.
Eigen::MatrixXcd ladder_matrix(unsigned n_max);

// Builds the operator a symbol stands for by multiplying truncated ladder
// matrices in the order its tag prescribes (Weyl: average over all distinct
// arrangements). Entries are exact on interior(symbol degree).
Eigen::MatrixXcd ordered_symbol_matrix(const SymbolPoly& s, const FockBasis& basis);

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// max |a_ij − b_ij| over i, j ∈ basis.interior(margin).
double interior_deviation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, const FockBasis& basis,
                          unsigned margin);

// Tr exp(−βH) via Hermitian eigendecomposition.
double partition_function(const Eigen::MatrixXcd& H, double beta);
double log_partition_function(const Eigen::MatrixXcd& H, double beta);

// ∂F/∂A = (coth(βA/2) − 1)/2 for H = A a†a.
double exact_dFdA(const QuadraticModel& model);

// ln Z = −ln(1 − e^{−βA}); requires A > 0.
double harmonic_log_partition(const QuadraticModel& model);

// Smallest n_max with e^{−βA·(n_max+1)} < rel_tol, the relative weight of
// the first discarded level in the geometric series. Requires A > 0.
unsigned truncation_for(const QuadraticModel& model, double rel_tol = 1e-12);

// ⟨z₂|z₁⟩ = exp(z₂†z₁) for unnormalised coherent states.
Complex coherent_overlap(std::span<const Complex> z2, std::span<const Complex> z1);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss–Laguerre rule for ∫₀^∞ e^{−t} f(t) dt.
Quadrature gauss_laguerre(int n);

// Integrates |z⟩⟨z| e^{−z̄z}/π over each mode's complex plane with
// radial_nodes Gauss–Laguerre nodes in t = |z|² times a uniform grid of
// angular_nodes angles, and returns the max deviation from the identity on
// basis.interior(margin).
double check_resolution_identity(const FockBasis& basis, int radial_nodes, int angular_nodes,
                                 unsigned margin = 0);

}  // namespace cspi
