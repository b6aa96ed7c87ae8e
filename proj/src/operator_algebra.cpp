#include "cspi/operator_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>

#include "cspi/errors.hpp"

namespace cspi {

std::string_view to_string(Ordering ordering) {
  switch (ordering) {
    case Ordering::Normal:
      return "normal";
    case Ordering::AntiNormal:
      return "antinormal";
    case Ordering::Weyl:
      return "weyl";
  }
  return "unknown";
}

Ordering parse_ordering(std::string_view text) {
  std::string lowered;
  for (char c : text) {
    if (c != '-' && c != '_') lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lowered == "normal") return Ordering::Normal;
  if (lowered == "antinormal") return Ordering::AntiNormal;
  if (lowered == "weyl" || lowered == "symmetric") return Ordering::Weyl;
  throw StructuralError("unknown ordering '" + std::string(text) + "'");
}

namespace detail {

TermMap::TermMap(std::size_t modes) : modes_(modes) {
  if (modes == 0) throw StructuralError("polynomial needs at least one mode");
}

void TermMap::check_key(const MonomialKey& key) const {
  if (key.size() != modes_) {
    throw StructuralError("monomial has " + std::to_string(key.size()) + " modes, polynomial has " +
                          std::to_string(modes_));
  }
}

Complex TermMap::coefficient(const MonomialKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Complex{} : it->second;
}

unsigned TermMap::degree() const {
  unsigned result = 0;
  for (const auto& [key, value] : terms_) {
    unsigned d = 0;
    for (const auto& e : key) d += e.degree();
    result = std::max(result, d);
  }
  return result;
}

void TermMap::add(const MonomialKey& key, Complex value) {
  check_key(key);
  if (value == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

void TermMap::scale(Complex factor) {
  if (factor == Complex{}) {
    terms_.clear();
    return;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= factor;
    if (it->second == Complex{}) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

void TermMap::add_scaled(const TermMap& other, Complex factor) {
  if (other.modes_ != modes_) {
    throw StructuralError("mode-count mismatch: " + std::to_string(modes_) + " vs " +
                          std::to_string(other.modes_));
  }
  for (const auto& [key, value] : other.terms_) add(key, value * factor);
}

}  // namespace detail

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw DegreeCapError("reordering coefficient overflows 64-bit integer arithmetic");
  }
  return out;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // result * (n - k + i) is always divisible by i at this point.
    result = checked_mul(result, n - k + i) / i;
  }
  return result;
}

// Number of ways to contract k creation/annihilation pairs between n and m
// operators: k! C(n,k) C(m,k).
std::uint64_t contraction_count(unsigned n, unsigned m, unsigned k) {
  std::uint64_t falling = 1;
  for (unsigned i = 0; i < k; ++i) falling = checked_mul(falling, n - i);
  return checked_mul(falling, binomial(m, k));
}

struct ModeTerm {
  ModeExponents exponents;
  std::uint64_t count;
  unsigned contractions;
};

// Walks the Cartesian product of per-mode expansions, handing each combined
// monomial with its exact integer weight and total contraction number to fn.
template <class Fn>
void for_each_combination(const std::vector<std::vector<ModeTerm>>& per_mode, Fn&& fn) {
  MonomialKey key(per_mode.size());
  auto recurse = [&](auto&& self, std::size_t mode, std::uint64_t count, unsigned contractions) -> void {
    if (mode == per_mode.size()) {
      fn(key, count, contractions);
      return;
    }
    for (const auto& term : per_mode[mode]) {
      key[mode] = term.exponents;
      self(self, mode + 1, checked_mul(count, term.count), contractions + term.contractions);
    }
  };
  recurse(recurse, 0, 1, 0);
}

// Weight t^k for t in {±1, ±1/2}; exact in binary floating point.
double contraction_weight(int sign, bool half, unsigned k) {
  double w = half ? std::ldexp(1.0, -static_cast<int>(k)) : 1.0;
  return (sign < 0 && (k % 2 == 1)) ? -w : w;
}

// Applies Σ_k t^k k! C(c,k) C(a,k) (c-k, a-k) to every mode of every term.
// t = +1/2 maps a Weyl symbol to normal order, t = +1 an anti-normal one;
// the negative values are the inverse maps.
detail::TermMap contract(const detail::TermMap& in, int sign, bool half) {
  detail::TermMap out(in.modes());
  std::vector<std::vector<ModeTerm>> per_mode(in.modes());
  for (const auto& [key, value] : in.terms()) {
    for (std::size_t i = 0; i < key.size(); ++i) {
      per_mode[i].clear();
      const auto [c, a] = key[i];
      for (unsigned k = 0; k <= std::min(c, a); ++k) {
        per_mode[i].push_back({{c - k, a - k}, contraction_count(c, a, k), k});
      }
    }
    for_each_combination(per_mode, [&](const MonomialKey& k, std::uint64_t count, unsigned contractions) {
      out.add(k, value * (static_cast<double>(count) * contraction_weight(sign, half, contractions)));
    });
  }
  return out;
}

void check_degree(unsigned degree, const AlgebraOptions& options, const char* what) {
  if (degree > options.max_degree) {
    throw DegreeCapError(std::string(what) + ": degree " + std::to_string(degree) + " exceeds cap " +
                         std::to_string(options.max_degree));
  }
}

MonomialKey unit_key(std::size_t modes) { return MonomialKey(modes); }

}  // namespace

BosonPoly::BosonPoly(std::size_t modes) : terms_(modes) {}

BosonPoly BosonPoly::constant(std::size_t modes, Complex value) {
  BosonPoly p(modes);
  p.add_term(unit_key(modes), value);
  return p;
}

BosonPoly BosonPoly::creation(std::size_t modes, std::size_t mode) {
  if (mode >= modes) throw StructuralError("mode index " + std::to_string(mode) + " out of range");
  MonomialKey key(modes);
  key[mode].creation = 1;
  return monomial(std::move(key));
}

BosonPoly BosonPoly::annihilation(std::size_t modes, std::size_t mode) {
  if (mode >= modes) throw StructuralError("mode index " + std::to_string(mode) + " out of range");
  MonomialKey key(modes);
  key[mode].annihilation = 1;
  return monomial(std::move(key));
}

BosonPoly BosonPoly::monomial(MonomialKey key, Complex value) {
  BosonPoly p(key.size());
  p.add_term(key, value);
  return p;
}

unsigned BosonPoly::max_creation_degree() const {
  unsigned result = 0;
  for (const auto& [key, value] : terms()) {
    unsigned d = 0;
    for (const auto& e : key) d += e.creation;
    result = std::max(result, d);
  }
  return result;
}

BosonPoly BosonPoly::adjoint() const {
  BosonPoly out(modes());
  for (const auto& [key, value] : terms()) {
    MonomialKey flipped = key;
    for (auto& e : flipped) std::swap(e.creation, e.annihilation);
    out.add_term(flipped, std::conj(value));
  }
  return out;
}

bool BosonPoly::is_hermitian(double tol) const {
  const BosonPoly adj = adjoint();
  for (const auto& [key, value] : terms()) {
    if (std::abs(value - adj.coefficient(key)) > tol) return false;
  }
  for (const auto& [key, value] : adj.terms()) {
    if (std::abs(value - coefficient(key)) > tol) return false;
  }
  return true;
}

BosonPoly& BosonPoly::operator+=(const BosonPoly& other) {
  terms_.add_scaled(other.terms_, 1.0);
  return *this;
}

BosonPoly& BosonPoly::operator-=(const BosonPoly& other) {
  terms_.add_scaled(other.terms_, -1.0);
  return *this;
}

BosonPoly& BosonPoly::operator*=(Complex factor) {
  terms_.scale(factor);
  return *this;
}

SymbolPoly::SymbolPoly(std::size_t modes, Ordering ordering) : terms_(modes), ordering_(ordering) {}

Complex SymbolPoly::evaluate(std::span<const Complex> conj_args, std::span<const Complex> args) const {
  if (conj_args.size() != modes() || args.size() != modes()) {
    throw StructuralError("symbol evaluated with " + std::to_string(args.size()) + " arguments, expected " +
                          std::to_string(modes()));
  }
  Complex total{};
  for (const auto& [key, value] : terms()) {
    Complex term = value;
    for (std::size_t i = 0; i < key.size(); ++i) {
      for (unsigned k = 0; k < key[i].creation; ++k) term *= conj_args[i];
      for (unsigned k = 0; k < key[i].annihilation; ++k) term *= args[i];
    }
    total += term;
  }
  return total;
}

bool SymbolPoly::is_self_conjugate(double tol) const {
  auto partner = [](MonomialKey key) {
    for (auto& e : key) std::swap(e.creation, e.annihilation);
    return key;
  };
  for (const auto& [key, value] : terms()) {
    if (std::abs(value - std::conj(coefficient(partner(key)))) > tol) return false;
  }
  return true;
}

SymbolPoly& SymbolPoly::operator+=(const SymbolPoly& other) {
  if (other.ordering_ != ordering_) throw StructuralError("adding symbols of different orderings");
  terms_.add_scaled(other.terms_, 1.0);
  return *this;
}

SymbolPoly& SymbolPoly::operator*=(Complex factor) {
  terms_.scale(factor);
  return *this;
}

BosonPoly multiply(const BosonPoly& p, const BosonPoly& q, const AlgebraOptions& options) {
  if (p.modes() != q.modes()) {
    throw StructuralError("cannot multiply polynomials on " + std::to_string(p.modes()) + " and " +
                          std::to_string(q.modes()) + " modes");
  }
  check_degree(p.degree() + q.degree(), options, "multiply");

  BosonPoly out(p.modes());
  std::vector<std::vector<ModeTerm>> per_mode(p.modes());
  for (const auto& [lk, lv] : p.terms()) {
    for (const auto& [rk, rv] : q.terms()) {
      // (a†^c1 a^a1)(a†^c2 a^a2) = Σ_k k! C(a1,k) C(c2,k) a†^(c1+c2-k) a^(a1+a2-k)
      for (std::size_t i = 0; i < per_mode.size(); ++i) {
        per_mode[i].clear();
        const auto [c1, a1] = lk[i];
        const auto [c2, a2] = rk[i];
        for (unsigned k = 0; k <= std::min(a1, c2); ++k) {
          per_mode[i].push_back({{c1 + c2 - k, a1 + a2 - k}, contraction_count(a1, c2, k), k});
        }
      }
      const Complex factor = lv * rv;
      for_each_combination(per_mode, [&](const MonomialKey& key, std::uint64_t count, unsigned) {
        out.add_term(key, factor * static_cast<double>(count));
      });
    }
  }
  return out;
}

BosonPoly power(const BosonPoly& p, unsigned exponent, const AlgebraOptions& options) {
  check_degree(p.degree() * exponent, options, "power");
  BosonPoly result = BosonPoly::constant(p.modes(), 1.0);
  for (unsigned i = 0; i < exponent; ++i) result = multiply(result, p, options);
  return result;
}

BosonPoly symmetrize(std::span<const Ladder> factors, std::size_t modes, const AlgebraOptions& options) {
  check_degree(static_cast<unsigned>(factors.size()), options, "symmetrize");
  std::vector<Ladder> arrangement(factors.begin(), factors.end());
  for (const auto& f : arrangement) {
    if (f.mode >= modes) throw StructuralError("symmetrizer factor on mode " + std::to_string(f.mode) +
                                               " with only " + std::to_string(modes) + " modes");
  }
  std::sort(arrangement.begin(), arrangement.end());

  // Every distinct arrangement of the multiset occurs equally often among
  // the n! permutations, so averaging over distinct ones is the same mean.
  detail::TermMap sum(modes);
  std::uint64_t count = 0;
  do {
    BosonPoly product = BosonPoly::constant(modes, 1.0);
    for (const auto& f : arrangement) {
      product = multiply(product, f.creation ? BosonPoly::creation(modes, f.mode)
                                             : BosonPoly::annihilation(modes, f.mode),
                         options);
    }
    for (const auto& [key, value] : product.terms()) sum.add(key, value);
    ++count;
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));

  BosonPoly out(modes);
  for (const auto& [key, value] : sum.terms()) out.add_term(key, value / static_cast<double>(count));
  return out;
}

SymbolPoly to_ordered_form(const BosonPoly& p, Ordering target, const AlgebraOptions& options) {
  check_degree(p.degree(), options, "to_ordered_form");
  detail::TermMap in(p.modes());
  for (const auto& [key, value] : p.terms()) in.add(key, value);

  detail::TermMap mapped = [&] {
    switch (target) {
      case Ordering::Normal:
        return in;
      case Ordering::AntiNormal:
        return contract(in, -1, false);
      case Ordering::Weyl:
        return contract(in, -1, true);
    }
    return in;
  }();

  SymbolPoly out(p.modes(), target);
  for (const auto& [key, value] : mapped.terms()) out.add_term(key, value);
  return out;
}

BosonPoly quantize(const SymbolPoly& s, const AlgebraOptions& options) {
  check_degree(s.degree(), options, "quantize");
  detail::TermMap in(s.modes());
  for (const auto& [key, value] : s.terms()) in.add(key, value);

  detail::TermMap mapped = [&] {
    switch (s.ordering()) {
      case Ordering::Normal:
        return in;
      case Ordering::AntiNormal:
        return contract(in, +1, false);
      case Ordering::Weyl:
        return contract(in, +1, true);
    }
    return in;
  }();

  BosonPoly out(s.modes());
  for (const auto& [key, value] : mapped.terms()) out.add_term(key, value);
  return out;
}

}  // namespace cspi
