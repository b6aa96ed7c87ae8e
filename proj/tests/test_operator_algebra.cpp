#include <doctest.h>

#include <vector>

#include "cspi/errors.hpp"
#include "cspi/fock_oracle.hpp"
#include "cspi/operator_algebra.hpp"
#include "support/oracles.hpp"

using namespace cspi;

namespace {

BosonPoly op(const char* text) { return parse_operator(text); }

SymbolPoly symbol(std::size_t modes, Ordering o, std::initializer_list<std::pair<MonomialKey, Complex>> terms) {
  SymbolPoly s(modes, o);
  for (const auto& [key, value] : terms) s.add_term(key, value);
  return s;
}

// All multisets of single-mode ladder factors of the given length, as sorted lists.
std::vector<std::vector<Ladder>> single_mode_words(std::size_t length) {
  std::vector<std::vector<Ladder>> out;
  for (std::size_t creations = 0; creations <= length; ++creations) {
    std::vector<Ladder> w;
    for (std::size_t i = 0; i < creations; ++i) w.push_back(Ladder::create(0));
    for (std::size_t i = creations; i < length; ++i) w.push_back(Ladder::annihilate(0));
    out.push_back(w);
  }
  return out;
}

}  // namespace

TEST_SUITE("operator_algebra") {
  TEST_CASE("symbol text for documented examples") {
    CHECK(to_string(to_ordered_form(op("ad_0*a_0"), Ordering::Weyl)) == "z̄₀z₀ − 1/2");
    CHECK(to_string(to_ordered_form(op("ad_0^2*a_0^2"), Ordering::Weyl)) == "z̄₀²z₀² − 2z̄₀z₀ + 1/2");
    for (auto o : {Ordering::Normal, Ordering::AntiNormal, Ordering::Weyl}) {
      CHECK(to_string(to_ordered_form(op("1"), o)) == "1");
    }
    CHECK(to_string(to_ordered_form(op("ad_0*a_0"), Ordering::AntiNormal)) == "z̄₀z₀ − 1");
    CHECK(to_string(to_ordered_form(op("ad_0*a_0"), Ordering::Weyl), SymbolStyle::Ascii) == "zb_0*z_0 - 1/2");
  }

  TEST_CASE("oscillator symbols differ by the ordering constant") {
    for (double A : {0.5, 1.0, 3.0, -2.0}) {
      const BosonPoly H = A * op("ad_0*a_0");
      const MonomialKey zz = {{1, 1}}, one = {{0, 0}};
      CHECK(to_ordered_form(H, Ordering::Normal) == symbol(1, Ordering::Normal, {{zz, A}}));
      CHECK(to_ordered_form(H, Ordering::AntiNormal) == symbol(1, Ordering::AntiNormal, {{zz, A}, {one, -A}}));
      CHECK(to_ordered_form(H, Ordering::Weyl) == symbol(1, Ordering::Weyl, {{zz, A}, {one, -A / 2}}));
    }
  }

  TEST_CASE("canonical commutation") {
    CHECK(op("a_0*ad_0") == op("ad_0*a_0 + 1"));
    CHECK(op("a_0*ad_1") == op("ad_1*a_0"));
    for (unsigned k = 1; k <= 6; ++k) {
      const BosonPoly ak = power(op("ad_0"), k);
      const BosonPoly commutator = op("a_0") * ak - ak * op("a_0");
      CHECK(commutator == static_cast<double>(k) * power(op("ad_0"), k - 1));
    }
  }

  TEST_CASE("symmetrize closed forms") {
    const std::vector<Ladder> three = {Ladder::create(0), Ladder::create(0), Ladder::annihilate(0)};
    CHECK(symmetrize(three, 1) == op("ad_0^2*a_0 + ad_0"));
    const std::vector<Ladder> two = {Ladder::create(0), Ladder::annihilate(0)};
    CHECK(symmetrize(two, 1) == op("ad_0*a_0 + 0.5"));
    CHECK(symmetrize(std::vector<Ladder>{}, 2) == BosonPoly::constant(2, 1.0));
  }

  TEST_CASE("symmetrize matches the n! permutation average in Fock space") {
    const FockBasis basis(1, 12);
    for (std::size_t length = 1; length <= 5; ++length) {
      for (const auto& word : single_mode_words(length)) {
        const Eigen::MatrixXcd brute = testing::brute_force_symmetrized(word, basis);
        const Eigen::MatrixXcd fast = operator_matrix(symmetrize(word, 1), basis);
        CHECK(interior_deviation(brute, fast, basis, static_cast<unsigned>(length)) <= 1e-10);
      }
    }
    const FockBasis two(2, 5);
    const std::vector<Ladder> mixed = {Ladder::create(0), Ladder::annihilate(1), Ladder::annihilate(0),
                                       Ladder::create(1)};
    CHECK(interior_deviation(testing::brute_force_symmetrized(mixed, two), operator_matrix(symmetrize(mixed, 2), two),
                             two, 2) <= 1e-10);
  }

  TEST_CASE("Weyl symbols quantize back by brute-force symmetrization") {
    const FockBasis basis(1, 10);
    for (const char* text : {"ad_0^2*a_0^2", "ad_0*a_0", "ad_0^3*a_0 + a_0^2", "(ad_0 + a_0)^3"}) {
      const BosonPoly p = op(text);
      const Eigen::MatrixXcd brute = testing::brute_force_weyl_matrix(to_ordered_form(p, Ordering::Weyl), basis);
      CHECK_MESSAGE(interior_deviation(operator_matrix(p, basis), brute, basis, p.degree()) <= 1e-10, text);
    }
  }

  TEST_CASE("ordered symbols reproduce the operator under their own ordering") {
    const FockBasis basis(2, 7);
    for (const char* text : {"ad_0^2*a_1^2", "ad_0*a_0*ad_1*a_1 + 0.5i*ad_0 - 0.5i*a_0", "(ad_0 + a_1)^2"}) {
      const BosonPoly p = op(text);
      for (auto o : {Ordering::Normal, Ordering::AntiNormal, Ordering::Weyl}) {
        const double dev =
            interior_deviation(operator_matrix(p, basis), ordered_symbol_matrix(to_ordered_form(p, o), basis), basis,
                               p.degree());
        CHECK_MESSAGE(dev <= 1e-10, text, " ", to_string(o));
      }
    }
  }

  TEST_CASE("linear and constant terms carry no ordering correction") {
    for (auto o : {Ordering::Normal, Ordering::AntiNormal, Ordering::Weyl}) {
      const SymbolPoly s = to_ordered_form(op("2*ad_0 - 3i*a_1 + 0.5"), o);
      CHECK(s.coefficient({{1, 0}, {0, 0}}) == Complex(2.0));
      CHECK(s.coefficient({{0, 0}, {0, 1}}) == Complex(0.0, -3.0));
      CHECK(s.coefficient({{0, 0}, {0, 0}}) == Complex(0.5));
      CHECK(s.terms().size() == 3);
    }
  }

  TEST_CASE("symbol evaluation") {
    const SymbolPoly s = to_ordered_form(op("ad_0^2*a_0^2"), Ordering::Weyl);
    const Complex z(1.0, 2.0);
    const Complex zc = std::conj(z);
    const Complex expected = 25.0 - 2.0 * 5.0 + 0.5;
    CHECK(std::abs(s.evaluate(std::span(&zc, 1), std::span(&z, 1)) - expected) < 1e-13);
  }

  TEST_CASE("degree cap") {
    CHECK_THROWS_AS(power(op("ad_0 + a_0"), 17), DegreeCapError);
    AlgebraOptions wide;
    wide.max_degree = 20;
    CHECK(power(op("ad_0 + a_0"), 17, wide).degree() == 17);
    CHECK_THROWS_AS(parse_operator("(ad_0*a_0)^9"), DegreeCapError);
  }

  TEST_CASE("parse errors report the position") {
    try {
      parse_operator("ad_0*(a_0");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.position() == 9);
    }
    try {
      parse_operator("ad_0 + a0");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.position() == 8);
    }
    CHECK_THROWS_AS(parse_operator("ad_0^x"), ParseError);
    CHECK_THROWS_AS(parse_operator("ad_0^1.5"), ParseError);
    CHECK_THROWS_AS(parse_operator("a_3", 2), ParseError);
    CHECK_THROWS_AS(parse_operator(""), ParseError);
    CHECK_THROWS_AS(parse_operator("ad_0 $ a_0"), ParseError);
  }

  TEST_CASE("structural errors") {
    CHECK_THROWS_AS(multiply(BosonPoly::creation(1, 0), BosonPoly::creation(2, 0)), StructuralError);
    CHECK_THROWS_AS(BosonPoly::creation(2, 2), StructuralError);
    CHECK_THROWS_AS(parse_ordering("sideways"), StructuralError);
    CHECK(parse_ordering("anti-normal") == Ordering::AntiNormal);
    CHECK(parse_ordering("Weyl") == Ordering::Weyl);
  }

  TEST_CASE("text format round-trips exactly") {
    const BosonPoly p = op("0.1*ad_0*a_1 - (0.3+0.7i)*a_0^2 + 1e-300 - 2i");
    CHECK(parse_operator(to_string(p), p.modes()) == p);
    CHECK(to_string(op("0")) == "0");
    CHECK(to_string(op("ad_0*a_0 - 1")) == "-1 + ad_0*a_0");
  }

  TEST_CASE("adjoint and Hermiticity") {
    CHECK(op("ad_0^2*a_1").adjoint() == op("ad_1*a_0^2"));
    CHECK(op("2i*ad_0").adjoint() == op("-2i*a_0"));
    CHECK(op("ad_0*a_1 + ad_1*a_0").is_hermitian());
    CHECK_FALSE(op("ad_0").is_hermitian());
  }
}
