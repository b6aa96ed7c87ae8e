#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cspi/errors.hpp"
#include "cspi/operator_algebra.hpp"

namespace cspi {

namespace {

enum class TokenKind { Number, Imaginary, Creation, Annihilation, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
  TokenKind kind;
  std::size_t position;
  std::string text;
  double value = 0.0;
  std::size_t mode = 0;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    auto single = [&](TokenKind kind) {
      out.push_back({kind, start, std::string(1, c)});
      ++i;
    };
    switch (c) {
      case '+': single(TokenKind::Plus); continue;
      case '-': single(TokenKind::Minus); continue;
      case '*': single(TokenKind::Star); continue;
      case '^': single(TokenKind::Caret); continue;
      case '(': single(TokenKind::LParen); continue;
      case ')': single(TokenKind::RParen); continue;
      default: break;
    }
    if (is_digit(c) || c == '.') {
      while (i < s.size() && (is_digit(s[i]) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          i = j;
          while (i < s.size() && is_digit(s[i])) ++i;
        }
      }
      const std::string text(s.substr(start, i - start));
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("malformed number '" + text + "'", start);
      }
      TokenKind kind = TokenKind::Number;
      if (i < s.size() && s[i] == 'i') {
        kind = TokenKind::Imaginary;
        ++i;
      }
      out.push_back({kind, start, text, value});
      continue;
    }
    if (c == 'i') {
      out.push_back({TokenKind::Imaginary, start, "i", 1.0});
      ++i;
      continue;
    }
    if (c == 'a') {
      TokenKind kind = TokenKind::Annihilation;
      std::size_t j = i + 1;
      if (j < s.size() && s[j] == 'd') {
        kind = TokenKind::Creation;
        ++j;
      }
      if (j >= s.size() || s[j] != '_') throw ParseError("expected '_' after operator name", j);
      ++j;
      const std::size_t digits = j;
      while (j < s.size() && is_digit(s[j])) ++j;
      if (j == digits) throw ParseError("expected mode index", digits);
      std::size_t mode = 0;
      std::from_chars(s.data() + digits, s.data() + j, mode);
      out.push_back({kind, start, std::string(s.substr(start, j - start)), 0.0, mode});
      i = j;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({TokenKind::End, s.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t modes, const AlgebraOptions& options)
      : tokens_(std::move(tokens)), modes_(modes), options_(options) {}

  BosonPoly parse() {
    BosonPoly result = expression();
    if (peek().kind != TokenKind::End) throw ParseError("unexpected '" + peek().text + "'", peek().position);
    return result;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  BosonPoly expression() {
    BosonPoly sum = term();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      const bool minus = next().kind == TokenKind::Minus;
      BosonPoly rhs = term();
      if (minus) {
        sum -= rhs;
      } else {
        sum += rhs;
      }
    }
    return sum;
  }

  BosonPoly term() {
    BosonPoly product = factor();
    while (peek().kind == TokenKind::Star) {
      next();
      product = multiply(product, factor(), options_);
    }
    return product;
  }

  BosonPoly factor() {
    if (peek().kind == TokenKind::Minus) {
      next();
      return factor() * Complex(-1.0);
    }
    if (peek().kind == TokenKind::Plus) {
      next();
      return factor();
    }
    BosonPoly base = primary();
    if (peek().kind == TokenKind::Caret) {
      next();
      const Token& exp = next();
      unsigned exponent = 0;
      auto [ptr, ec] = std::from_chars(exp.text.data(), exp.text.data() + exp.text.size(), exponent);
      if (exp.kind != TokenKind::Number || ec != std::errc() || ptr != exp.text.data() + exp.text.size()) {
        throw ParseError("exponent must be a non-negative integer", exp.position);
      }
      return power(base, exponent, options_);
    }
    return base;
  }

  BosonPoly primary() {
    const Token& t = next();
    switch (t.kind) {
      case TokenKind::Number:
        return BosonPoly::constant(modes_, t.value);
      case TokenKind::Imaginary:
        return BosonPoly::constant(modes_, Complex(0.0, t.value));
      case TokenKind::Creation:
        return BosonPoly::creation(modes_, t.mode);
      case TokenKind::Annihilation:
        return BosonPoly::annihilation(modes_, t.mode);
      case TokenKind::LParen: {
        BosonPoly inner = expression();
        if (peek().kind != TokenKind::RParen) throw ParseError("expected ')'", peek().position);
        next();
        return inner;
      }
      case TokenKind::End:
        throw ParseError("unexpected end of expression", t.position);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.position);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t modes_;
  const AlgebraOptions& options_;
};

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_unit_monomial(const MonomialKey& key) {
  return std::all_of(key.begin(), key.end(), [](const ModeExponents& e) { return e.degree() == 0; });
}

std::string operator_monomial(const MonomialKey& key) {
  std::string out;
  auto append = [&](const char* name, std::size_t mode, unsigned exponent) {
    if (exponent == 0) return;
    if (!out.empty()) out += '*';
    out += name + std::to_string(mode);
    if (exponent > 1) out += '^' + std::to_string(exponent);
  };
  for (std::size_t i = 0; i < key.size(); ++i) {
    append("ad_", i, key[i].creation);
    append("a_", i, key[i].annihilation);
  }
  return out;
}

// Short rational form for coefficients such as 1/2 or -3/4; empty when the
// value is not a small-denominator rational.
std::string rational(double x) {
  for (int d : {1, 2, 3, 4, 6, 8, 16, 32, 64}) {
    const double y = x * d;
    if (std::abs(y) < 9.0e15 && y == std::round(y) && y / d == x) {
      const auto numerator = static_cast<long long>(std::llround(y));
      return d == 1 ? std::to_string(numerator) : std::to_string(numerator) + "/" + std::to_string(d);
    }
  }
  return {};
}

std::string real_text(double x) {
  std::string r = rational(x);
  return r.empty() ? format17(x) : r;
}

const char* const kSubscripts[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
const char* const kSuperscripts[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};

std::string digits_with(unsigned value, const char* const* table) {
  std::string out;
  for (char c : std::to_string(value)) out += table[c - '0'];
  return out;
}

std::string symbol_monomial(const MonomialKey& key, SymbolStyle style) {
  std::string out;
  auto append = [&](bool conj, std::size_t mode, unsigned exponent) {
    if (exponent == 0) return;
    if (style == SymbolStyle::Unicode) {
      out += conj ? "z̄" : "z";
      out += digits_with(static_cast<unsigned>(mode), kSubscripts);
      if (exponent > 1) out += digits_with(exponent, kSuperscripts);
    } else {
      if (!out.empty()) out += '*';
      out += (conj ? "zb_" : "z_") + std::to_string(mode);
      if (exponent > 1) out += '^' + std::to_string(exponent);
    }
  };
  for (std::size_t i = 0; i < key.size(); ++i) {
    append(true, i, key[i].creation);
    append(false, i, key[i].annihilation);
  }
  return out;
}

}  // namespace

BosonPoly parse_operator(std::string_view text, std::size_t modes, const AlgebraOptions& options) {
  std::vector<Token> tokens = tokenize(text);
  std::size_t needed = 1;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Creation || t.kind == TokenKind::Annihilation) {
      if (modes != 0 && t.mode >= modes) {
        throw ParseError("mode index " + std::to_string(t.mode) + " exceeds mode count " + std::to_string(modes),
                         t.position);
      }
      needed = std::max(needed, t.mode + 1);
    }
  }
  return Parser(std::move(tokens), modes == 0 ? needed : modes, options).parse();
}

std::string to_string(const BosonPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [key, value] : p.terms()) {
    const bool unit = is_unit_monomial(key);
    const std::string ops = operator_monomial(key);
    std::string coefficient;
    bool negative = false;
    if (value.imag() == 0.0) {
      negative = std::signbit(value.real());
      coefficient = format17(std::abs(value.real()));
    } else if (value.real() == 0.0) {
      negative = std::signbit(value.imag());
      coefficient = format17(std::abs(value.imag())) + "i";
    } else {
      coefficient = "(" + format17(value.real()) + (std::signbit(value.imag()) ? "-" : "+") +
                    format17(std::abs(value.imag())) + "i)";
    }
    std::string body;
    if (unit) {
      body = coefficient;
    } else if (coefficient == "1") {
      body = ops;
    } else {
      body = coefficient + "*" + ops;
    }
    if (out.empty()) {
      out = negative ? "-" + body : body;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

std::string to_string(const SymbolPoly& s, SymbolStyle style) {
  if (s.is_zero()) return "0";
  struct Entry {
    unsigned degree;
    const MonomialKey* key;
    Complex value;
  };
  std::vector<Entry> entries;
  for (const auto& [key, value] : s.terms()) {
    unsigned d = 0;
    for (const auto& e : key) d += e.degree();
    entries.push_back({d, &key, value});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    return *b.key < *a.key;
  });

  const bool unicode = style == SymbolStyle::Unicode;
  const std::string minus = unicode ? "−" : "-";
  std::string out;
  for (const auto& entry : entries) {
    const std::string mono = symbol_monomial(*entry.key, style);
    const Complex c = entry.value;
    bool negative = false;
    std::string coefficient;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      coefficient = real_text(std::abs(c.real()));
    } else {
      coefficient = "(" + real_text(c.real()) + (c.imag() < 0 ? minus : std::string("+")) +
                    real_text(std::abs(c.imag())) + "i)";
    }
    std::string body;
    if (mono.empty()) {
      body = coefficient;
    } else if (coefficient == "1") {
      body = mono;
    } else {
      body = coefficient + (unicode ? "" : "*") + mono;
    }
    if (out.empty()) {
      out = negative ? minus + body : body;
    } else {
      out += negative ? " " + minus + " " : " + ";
      out += body;
    }
  }
  return out;
}

}  // namespace cspi
