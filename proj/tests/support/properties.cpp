#include "properties.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cspi/cli/app.hpp"
#include "cspi/discrete_pi.hpp"
#include "cspi/fock_oracle.hpp"
#include "oracles.hpp"

namespace cspi::testing {

namespace {

constexpr Ordering kOrderings[] = {Ordering::Normal, Ordering::AntiNormal, Ordering::Weyl};

double max_coefficient_gap(const BosonPoly& p, const BosonPoly& q) {
  double worst = 0.0;
  for (const auto& [key, value] : p.terms()) worst = std::max(worst, std::abs(value - q.coefficient(key)));
  for (const auto& [key, value] : q.terms()) worst = std::max(worst, std::abs(value - p.coefficient(key)));
  return worst;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void PropertyResult::record(bool ok, double error, const std::string& what) {
  ++cases;
  if (std::isfinite(error)) worst = std::max(worst, error);
  if (!ok && pass) {
    pass = false;
    first_failure = what;
  }
}

std::vector<BosonPoly> enumerated_operators() {
  std::vector<BosonPoly> out;
  for (unsigned c = 0; c <= 4; ++c) {
    for (unsigned a = 0; a <= 4; ++a) out.push_back(BosonPoly::monomial({{c, a}}));
  }
  for (unsigned c0 = 0; c0 <= 2; ++c0) {
    for (unsigned a0 = 0; a0 <= 2; ++a0) {
      for (unsigned c1 = 0; c1 <= 2; ++c1) {
        for (unsigned a1 = 0; a1 <= 2; ++a1) out.push_back(BosonPoly::monomial({{c0, a0}, {c1, a1}}));
      }
    }
  }
  for (const char* text : {"2.5*ad_0*a_0 - 0.75*ad_0^2*a_0^2 + 1.5i*ad_0^3 - 0.25", "(ad_0 + a_0)^4",
                           "3i*ad_0*a_1 - 3i*ad_1*a_0 + 0.5*ad_0^2*a_1^2", "(a_0*ad_1 + 0.125)^3"}) {
    out.push_back(parse_operator(text));
  }
  return out;
}

PropertyResult check_ordering_round_trips() {
  PropertyResult r{"ordering round-trips"};
  for (const auto& p : enumerated_operators()) {
    for (auto o : kOrderings) {
      const double gap = max_coefficient_gap(quantize(to_ordered_form(p, o)), p);
      r.record(gap <= 1e-12, gap, to_string(p) + " via " + std::string(to_string(o)));
    }
    const bool text_ok = parse_operator(to_string(p), p.modes()) == p;
    r.record(text_ok, 0.0, "text round-trip of " + to_string(p));
  }
  return r;
}

PropertyResult check_symbol_hermiticity() {
  PropertyResult r{"Hermiticity of symbols"};
  for (const auto& p : enumerated_operators()) {
    const BosonPoly h = p + p.adjoint();
    for (auto o : kOrderings) {
      const bool ok = to_ordered_form(h, o).is_self_conjugate(1e-12);
      r.record(ok, 0.0, to_string(h) + " in " + std::string(to_string(o)));
    }
    if (h.modes() == 1) {
      const FockBasis basis(1, 8);
      const Eigen::MatrixXcd m = operator_matrix(h, basis);
      const double gap = (m - m.adjoint()).cwiseAbs().maxCoeff();
      r.record(gap <= 1e-12, gap, "Fock matrix of " + to_string(h));
    }
  }
  return r;
}

PropertyResult check_dft_unitarity() {
  PropertyResult r{"DFT unitarity and Parseval"};
  std::vector<std::int64_t> sizes;
  for (std::int64_t n = 1; n <= 40; ++n) sizes.push_back(n);
  for (std::int64_t n : {64, 101, 127, 256}) sizes.push_back(n);
  for (auto n : sizes) {
    for (int variant = 0; variant < 3; ++variant) {
      const DiscretePath path = enumerated_path(n, 1 + static_cast<std::size_t>(variant % 2), variant);
      const DiscretePath spectrum = dft(path);
      const double norm = path.squared_norm();
      const double parseval = std::abs(spectrum.squared_norm() - norm) / norm;
      r.record(parseval <= 1e-13, parseval, "Parseval at N=" + std::to_string(n));
      const double back = (inverse_dft(spectrum).values() - path.values()).cwiseAbs().maxCoeff();
      r.record(back <= 1e-13, back, "inverse at N=" + std::to_string(n));
    }
  }
  return r;
}

PropertyResult check_cyclic_shift_invariance() {
  PropertyResult r{"cyclic-shift invariance of actions"};
  const BosonPoly ops[] = {parse_operator("1.5*ad_0*a_0"), parse_operator("ad_0*a_0 + 0.3*ad_0^2*a_0^2"),
                           parse_operator("ad_0*a_0 + 2*ad_1*a_1 + 0.2*ad_0*a_1 + 0.2*ad_1*a_0")};
  for (const auto& p : ops) {
    const SymbolPoly normal = to_ordered_form(p, Ordering::Normal);
    const SymbolPoly anti = to_ordered_form(p, Ordering::AntiNormal);
    const SymbolPoly weyl = to_ordered_form(p, Ordering::Weyl);
    for (std::int64_t n : {5, 7, 9, 13}) {
      const MatsubaraGrid grid(n, 0.7);
      const DiscretePath path = enumerated_path(n, p.modes(), static_cast<int>(n));
      const Complex base[] = {action_normal(path, normal, grid), action_antinormal(path, anti, grid),
                              action_weyl(path, weyl, grid)};
      for (std::int64_t shift = 1; shift < n; ++shift) {
        const DiscretePath moved = path.cyclic_shift(shift);
        const Complex shifted[] = {action_normal(moved, normal, grid), action_antinormal(moved, anti, grid),
                                   action_weyl(moved, weyl, grid)};
        for (int k = 0; k < 3; ++k) {
          const double gap = std::abs(shifted[k] - base[k]) / std::max(1.0, std::abs(base[k]));
          r.record(gap <= 1e-12, gap, to_string(p) + " N=" + std::to_string(n) + " shift " + std::to_string(shift));
        }
      }
    }
  }
  return r;
}

PropertyResult check_cli_determinism() {
  PropertyResult r{"CLI determinism"};
  const auto dir = std::filesystem::temp_directory_path() / ("cspi_determinism_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::vector<std::vector<std::string>> runs = {
      {"free-energy", "--N", "101", "1001", "2000", "4001"},
      {"cutoff", "--b", "10", "100", "1000"},
      {"prefactor", "--N", "1001", "2001", "--b", "0", "2", "4"},
      {"flow", "--N", "1001", "--b", "20"},
      {"identity-check", "--n-max", "5", "--angular", "8", "16"},
      {"order", "(ad_0 + a_0)^4", "--ordering", "weyl", "--verify"},
  };
  const char* thread_settings[] = {"1", "3", "8"};
  for (const auto& args : runs) {
    std::string first_csv, first_json;
    for (std::size_t t = 0; t < std::size(thread_settings); ++t) {
      ::setenv("CSPI_THREADS", thread_settings[t], 1);
      std::ostringstream out, err;
      cli::run_cli(args, out, err);
      std::vector<std::string> json_args = args;
      const auto json_path = dir / ("run_" + std::to_string(t) + ".json");
      json_args.insert(json_args.end(), {"--out", json_path.string()});
      std::ostringstream ignored_out, ignored_err;
      cli::run_cli(json_args, ignored_out, ignored_err);
      const std::string json = read_file(json_path);
      if (t == 0) {
        first_csv = out.str();
        first_json = json;
        r.record(!first_csv.empty() && !first_json.empty(), 0.0, args.front() + " produced no output");
      } else {
        r.record(out.str() == first_csv, 0.0, args.front() + " CSV differs at CSPI_THREADS=" + thread_settings[t]);
        r.record(json == first_json, 0.0, args.front() + " JSON differs at CSPI_THREADS=" + thread_settings[t]);
      }
    }
  }
  ::unsetenv("CSPI_THREADS");
  std::filesystem::remove_all(dir);
  return r;
}

}  // namespace cspi::testing
