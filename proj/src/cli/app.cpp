#include "cspi/cli/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <map>

#include "cspi/cli/commands.hpp"
#include "cspi/cli/config.hpp"
#include "cspi/cli/report.hpp"

namespace cspi::cli {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitConfig = 2;

struct Overrides {
  std::string config_path;
  double A = 0.0;
  double beta = 0.0;
  std::vector<std::int64_t> N;
  std::vector<std::int64_t> b;
  std::string out;
  std::string expr;
  std::string ordering;
  std::vector<std::string> orderings;
  std::size_t modes = 1;
  std::int64_t b_floor = 0;
  unsigned n_max = 0;
  int radial_nodes = 0;
  std::vector<int> angular_nodes;
  unsigned margin = 0;
  bool verify = false;

  std::map<std::string, CLI::Option*> options;

  bool given(const std::string& name) const {
    const auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App* sub, Overrides& o) {
  o.options["config"] = sub->add_option("--config", o.config_path, "JSON run config");
  o.options["A"] = sub->add_option("--A", o.A, "energy coefficient of H = A a†a");
  o.options["beta"] = sub->add_option("--beta", o.beta, "inverse temperature");
  o.options["out"] = sub->add_option("--out", o.out, "output path; .json selects JSON, anything else CSV");
}

void add_for(Command command, CLI::App* sub, Overrides& o) {
  add_common(sub, o);
  switch (command) {
    case Command::Order:
      o.options["expr"] = sub->add_option("expr,--expr", o.expr, "operator expression, e.g. ad_0^2*a_0^2");
      o.options["ordering"] = sub->add_option("--ordering", o.ordering, "normal, antinormal or weyl");
      o.options["verify"] = sub->add_flag("--verify", o.verify, "check the symbol against the Fock oracle");
      o.options["n-max"] = sub->add_option("--n-max", o.n_max, "interior occupancy cap for --verify");
      break;
    case Command::FreeEnergy:
      o.options["N"] = sub->add_option("--N", o.N, "slice counts");
      break;
    case Command::Cutoff:
      o.options["b"] = sub->add_option("--b", o.b, "frequency cutoffs");
      o.options["ordering"] = sub->add_option("--ordering", o.orderings, "orderings to evaluate");
      break;
    case Command::Prefactor:
      o.options["N"] = sub->add_option("--N", o.N, "odd slice counts");
      o.options["b"] = sub->add_option("--b", o.b, "retained shells");
      o.options["modes"] = sub->add_option("--modes", o.modes, "mode count M");
      break;
    case Command::Flow:
      o.options["N"] = sub->add_option("--N", o.N, "odd slice counts");
      o.options["b"] = sub->add_option("--b,--b-floor", o.b_floor, "lowest shell kept");
      o.options["modes"] = sub->add_option("--modes", o.modes, "mode count M");
      break;
    case Command::IdentityCheck:
      o.options["n-max"] = sub->add_option("--n-max", o.n_max, "per-mode occupancy cap");
      o.options["radial"] = sub->add_option("--radial", o.radial_nodes, "Gauss-Laguerre nodes");
      o.options["angular"] = sub->add_option("--angular", o.angular_nodes, "angular grid sizes");
      o.options["margin"] = sub->add_option("--margin", o.margin, "excluded top occupancies");
      o.options["modes"] = sub->add_option("--modes", o.modes, "mode count");
      break;
  }
}

nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

RunConfig build_config(Command command, const Overrides& o) {
  RunConfig c = default_config(command);
  if (o.given("config")) apply_json(c, read_config_file(o.config_path));
  if (o.given("A")) c.A = o.A;
  if (o.given("beta")) c.beta = o.beta;
  if (o.given("out")) c.out = o.out;
  if (o.given("N")) c.N = o.N;
  if (command == Command::Flow) {
    if (o.given("b")) c.b_floor = o.b_floor;
  } else if (o.given("b")) {
    c.b = o.b;
  }
  if (o.given("expr")) c.expr = o.expr;
  try {
    if (o.given("ordering")) {
      if (command == Command::Order) {
        c.ordering = parse_ordering(o.ordering);
      } else {
        c.orderings.clear();
        for (const auto& name : o.orderings) c.orderings.push_back(parse_ordering(name));
      }
    }
  } catch (const StructuralError& e) {
    throw ConfigError(e.what());
  }
  if (o.given("verify")) c.verify = o.verify;
  if (o.given("modes")) c.modes = o.modes;
  if (o.given("n-max")) c.n_max = o.n_max;
  if (o.given("radial")) c.radial_nodes = o.radial_nodes;
  if (o.given("angular")) c.angular_nodes = o.angular_nodes;
  if (o.given("margin")) c.margin = o.margin;
  validate(c);
  return c;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string render(const Report& report, const std::string& path) {
  if (ends_with(path, ".json")) return to_json(report).dump(2) + "\n";
  return to_csv(report);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent-state path integral toolkit", "cspi"};
  app.require_subcommand(1);
  constexpr Command kAll[] = {Command::Order,     Command::FreeEnergy, Command::Cutoff,
                              Command::Prefactor, Command::Flow,       Command::IdentityCheck};
  std::map<Command, Overrides> overrides;
  std::map<Command, CLI::App*> subs;
  const std::map<Command, std::string> descriptions = {
      {Command::Order, "print the normal, anti-normal or Weyl symbol of an operator"},
      {Command::FreeEnergy, "discrete normal and Weyl dF/dA against the exact oscillator"},
      {Command::Cutoff, "sharp-cutoff continuum Matsubara sums per ordering"},
      {Command::Prefactor, "continuum normalisation prefactor, closed form vs shell product"},
      {Command::Flow, "frequency-shell renormalisation of the Weyl path integral"},
      {Command::IdentityCheck, "coherent-state resolution of the identity by quadrature"},
  };
  for (Command command : kAll) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(command)), descriptions.at(command));
    add_for(command, sub, overrides[command]);
    subs[command] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  Command command = Command::Order;
  for (const auto& [c, sub] : subs) {
    if (sub->parsed()) command = c;
  }

  Report report;
  RunConfig config;
  try {
    config = build_config(command, overrides.at(command));
    report = run_command(config, thread_limit());
  } catch (const ParseError& e) {
    err << "error: cannot parse expression: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  for (const auto& v : report.verdicts) err << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << "\n";

  if (config.out.empty()) {
    if (command == Command::Order) {
      out << std::get<std::string>(report.rows.front()[2]) << "\n";
      if (config.verify) out << "residual " << format_double(std::get<double>(report.rows.front()[3])) << "\n";
    } else {
      out << to_csv(report);
    }
  } else {
    std::ofstream file(config.out, std::ios::binary);
    file << render(report, config.out);
    if (!file) {
      err << "error: cannot write '" << config.out << "'\n";
      return kExitConfig;
    }
  }
  return report.passed() ? kExitPass : kExitVerdict;
}

}  // namespace cspi::cli
