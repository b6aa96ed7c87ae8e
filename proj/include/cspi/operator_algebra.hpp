#pragma once

// Multi-mode bosonic operator polynomials in canonical normal order, their
// classical symbols under normal / anti-normal / Weyl ordering, and the
// maps between the two.

#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cspi {

using Complex = std::complex<double>;

enum class Ordering { Normal, AntiNormal, Weyl };

std::string_view to_string(Ordering ordering);

// Accepts "normal", "antinormal"/"anti-normal", "weyl"/"symmetric"
// (case-insensitive). Throws StructuralError otherwise.
Ordering parse_ordering(std::string_view text);

// Exponents of one mode inside a monomial. For an operator monomial this is
// (a†)^creation a^annihilation; for a symbol it is z̄^creation z^annihilation.
struct ModeExponents {
  unsigned creation = 0;
  unsigned annihilation = 0;

  unsigned degree() const { return creation + annihilation; }
  friend auto operator<=>(const ModeExponents&, const ModeExponents&) = default;
};

using MonomialKey = std::vector<ModeExponents>;

struct AlgebraOptions {
  unsigned max_degree = 16;
};

namespace detail {

// Sparse coefficient map shared by operator and symbol polynomials. Exact
// zeros are never stored.
class TermMap {
 public:
  using Map = std::map<MonomialKey, Complex>;

  TermMap() = default;
  explicit TermMap(std::size_t modes);

  std::size_t modes() const { return modes_; }
  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex coefficient(const MonomialKey& key) const;
  unsigned degree() const;

  void add(const MonomialKey& key, Complex value);
  void scale(Complex factor);
  void add_scaled(const TermMap& other, Complex factor);

  friend bool operator==(const TermMap&, const TermMap&) = default;

 private:
  void check_key(const MonomialKey& key) const;

  std::size_t modes_ = 0;
  Map terms_;
};

}  // namespace detail

class BosonPoly {
 public:
  explicit BosonPoly(std::size_t modes);

  static BosonPoly constant(std::size_t modes, Complex value);
  static BosonPoly creation(std::size_t modes, std::size_t mode);
  static BosonPoly annihilation(std::size_t modes, std::size_t mode);
  static BosonPoly monomial(MonomialKey key, Complex value = 1.0);

  std::size_t modes() const { return terms_.modes(); }
  const detail::TermMap::Map& terms() const { return terms_.terms(); }
  bool is_zero() const { return terms_.empty(); }
  Complex coefficient(const MonomialKey& key) const { return terms_.coefficient(key); }
  // Highest total degree over all stored monomials (0 for constants and zero).
  unsigned degree() const { return terms_.degree(); }
  unsigned max_creation_degree() const;

  void add_term(const MonomialKey& key, Complex value) { terms_.add(key, value); }

  // Formal adjoint: (a†)^c a^a -> (a†)^a a^c with conjugated coefficient.
  BosonPoly adjoint() const;
  // True when every coefficient matches its adjoint partner within `tol`
  // (absolute). tol = 0 demands exact equality.
  bool is_hermitian(double tol = 0.0) const;

  BosonPoly& operator+=(const BosonPoly& other);
  BosonPoly& operator-=(const BosonPoly& other);
  BosonPoly& operator*=(Complex factor);

  friend BosonPoly operator+(BosonPoly lhs, const BosonPoly& rhs) { return lhs += rhs; }
  friend BosonPoly operator-(BosonPoly lhs, const BosonPoly& rhs) { return lhs -= rhs; }
  friend BosonPoly operator*(BosonPoly lhs, Complex factor) { return lhs *= factor; }
  friend BosonPoly operator*(Complex factor, BosonPoly rhs) { return rhs *= factor; }
  friend bool operator==(const BosonPoly&, const BosonPoly&) = default;

 private:
  detail::TermMap terms_;
};

class SymbolPoly {
 public:
  SymbolPoly(std::size_t modes, Ordering ordering);

  std::size_t modes() const { return terms_.modes(); }
  Ordering ordering() const { return ordering_; }
  const detail::TermMap::Map& terms() const { return terms_.terms(); }
  bool is_zero() const { return terms_.empty(); }
  Complex coefficient(const MonomialKey& key) const { return terms_.coefficient(key); }
  unsigned degree() const { return terms_.degree(); }

  void add_term(const MonomialKey& key, Complex value) { terms_.add(key, value); }

  // Evaluates the symbol at independent conjugate / plain arguments:
  // s(w̄, z) = Σ c_{p,q} Π w̄_i^{p_i} z_i^{q_i}. The caller passes the w̄
  // values directly (already conjugated).
  Complex evaluate(std::span<const Complex> conj_args, std::span<const Complex> args) const;

  // Coefficient of (p,q) equals conj of coefficient of (q,p), within tol.
  bool is_self_conjugate(double tol = 0.0) const;

  SymbolPoly& operator+=(const SymbolPoly& other);
  SymbolPoly& operator*=(Complex factor);

  friend SymbolPoly operator+(SymbolPoly lhs, const SymbolPoly& rhs) { return lhs += rhs; }
  friend SymbolPoly operator*(SymbolPoly lhs, Complex factor) { return lhs *= factor; }
  friend bool operator==(const SymbolPoly&, const SymbolPoly&) = default;

 private:
  detail::TermMap terms_;
  Ordering ordering_;
};

// A single creation or annihilation operator, used as a symmetrizer slot.
struct Ladder {
  std::size_t mode = 0;
  bool creation = false;

  static Ladder create(std::size_t mode) { return {mode, true}; }
  static Ladder annihilate(std::size_t mode) { return {mode, false}; }

  friend auto operator<=>(const Ladder&, const Ladder&) = default;
};

// Operator product p·q in canonical normal order. Throws StructuralError on
// mode-count mismatch, DegreeCapError if deg p + deg q exceeds the cap.
BosonPoly multiply(const BosonPoly& p, const BosonPoly& q, const AlgebraOptions& options = {});

inline BosonPoly operator*(const BosonPoly& p, const BosonPoly& q) { return multiply(p, q); }

BosonPoly power(const BosonPoly& p, unsigned exponent, const AlgebraOptions& options = {});

// (1/n!) Σ_σ O_σ1 ⋯ O_σn, evaluated over the distinct arrangements of the
// factor multiset. An empty list gives the unit operator.
BosonPoly symmetrize(std::span<const Ladder> factors, std::size_t modes,
                     const AlgebraOptions& options = {});

// Symbol whose quantization under `target` reproduces p.
SymbolPoly to_ordered_form(const BosonPoly& p, Ordering target, const AlgebraOptions& options = {});

// Inverse of to_ordered_form.
BosonPoly quantize(const SymbolPoly& s, const AlgebraOptions& options = {});

// Operator text format: `ad_i`, `a_i`, real and imaginary literals (`2.5`,
// `3i`, `i`), `+`, `-`, `*`, `^k`, parentheses. modes = 0 infers the mode
// count from the largest index used (at least 1).
BosonPoly parse_operator(std::string_view text, std::size_t modes = 0,
                         const AlgebraOptions& options = {});

// Canonical text; parse_operator(to_string(p), p.modes()) == p exactly.
std::string to_string(const BosonPoly& p);

enum class SymbolStyle { Unicode, Ascii };

// Human-readable symbol, highest degree first, e.g. "z̄₀²z₀² − 2z̄₀z₀ + 1/2".
std::string to_string(const SymbolPoly& s, SymbolStyle style = SymbolStyle::Unicode);

}  // namespace cspi
