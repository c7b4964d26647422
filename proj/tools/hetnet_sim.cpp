// hetnet-sim: command-line driver for sweeps, figures and config checks.
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hetnet/config.hpp"
#include "hetnet/figures.hpp"
#include "hetnet/sweep.hpp"
#include "hetnet/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

hetnet::Config load(const std::string& path) {
  const auto text = read_text(path);
  try {
    return hetnet::load_config(text);
  } catch (const hetnet::ConfigError& e) {
    throw ValidationFailure(fmt::format("{}: {}", path, e.what()));
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("HETNET_SIM_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  std::uint64_t seed = 0;
  const std::string_view s(v);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationFailure(fmt::format("HETNET_SIM_SEED is not an unsigned integer: '{}'", s));
  }
  return seed;
}

// var=lo:hi:n, n evenly spaced points including both ends.
std::pair<hetnet::SweepVariable, std::vector<double>> parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationFailure("--sweep expects var=lo:hi:n");
  const auto var = hetnet::parse_sweep_variable(text.substr(0, eq));
  if (!var) throw ValidationFailure(fmt::format("unknown sweep variable '{}'", text.substr(0, eq)));
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(eq + 1));
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ValidationFailure("--sweep expects var=lo:hi:n");
  double lo = 0, hi = 0;
  int n = 0;
  try {
    lo = hetnet::evaluate_expression(parts[0]);
    hi = hetnet::evaluate_expression(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ValidationFailure(fmt::format("bad sweep range '{}'", text));
  }
  if (n < 1) throw ValidationFailure("sweep needs at least one point");
  if (n > 1 && !(hi > lo)) throw ValidationFailure("sweep needs hi > lo");
  std::vector<double> values;
  for (int i = 0; i < n; ++i) values.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return {*var, values};
}

std::vector<hetnet::Engine> parse_engines(const std::string& name) {
  if (name == "both") return {hetnet::Engine::kMonteCarlo, hetnet::Engine::kAnalytic};
  const auto e = hetnet::parse_engine(name);
  if (!e) throw ValidationFailure(fmt::format("unknown engine '{}'", name));
  return {*e};
}

void print_failures(const hetnet::ResultTable& table) {
  for (const auto& f : table.metadata.failures) {
    std::cerr << fmt::format("warning: {} point {} failed: {}\n", f.engine, f.sweep_value, f.message);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offloading simulator for layered cooperative small-cell networks"};
  app.set_version_flag("--version", std::string(hetnet::kToolVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir, sweep_text, engine_name = "both";
  std::int64_t trials = 0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a parameter sweep and write CSV results");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--sweep", sweep_text, "Sweep as var=lo:hi:n (density_ratio, bias, theta)");
  auto* trials_opt = run->add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::Range(100, 1'000'000'000));
  auto* seed_opt = run->add_option("--seed", seed, "Master seed (overrides HETNET_SIM_SEED)");
  run->add_option("--engine", engine_name, "mc, analytic or both")->check(CLI::IsMember({"mc", "analytic", "both"}));
  run->add_option("--out", out_dir, "Output directory")->required();

  std::string figure_name;
  std::int64_t figure_trials = 20'000;
  std::int64_t figure_samples = 20'000;
  auto* figure = app.add_subcommand("figure", "Reproduce one result figure as CSV and SVG");
  figure->add_option("id", figure_name, "Figure id (e.g. OverallConnection or all)")->required();
  figure->add_option("--out", out_dir, "Output directory")->required();
  figure->add_option("--trials", figure_trials, "Monte Carlo trials per point")->check(CLI::Range(100, 1'000'000'000));
  figure->add_option("--samples", figure_samples, "Analytic importance samples")->check(CLI::PositiveNumber);
  auto* figure_seed_opt = figure->add_option("--seed", seed, "Master seed");

  auto* validate = app.add_subcommand("validate", "Check a configuration file");
  validate->add_option("--config", config_path, "Configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*validate) {
      const auto config = load(config_path);
      const auto report = hetnet::validate(config.system);
      if (!report.ok()) {
        std::cerr << report.to_string();
        return kExitInvalid;
      }
      std::cout << fmt::format("{}: ok ({} layers, window {:.0f} m)\n", config_path,
                               config.system.layer_count(), config.system.window_radius_m);
      return kExitOk;
    }

    if (*run) {
      const auto config = load(config_path);
      const auto report = hetnet::validate(config.system);
      if (!report.ok()) {
        std::cerr << report.to_string();
        return kExitInvalid;
      }
      hetnet::SweepSpec spec;
      spec.base = config.system;
      spec.trials = *trials_opt ? trials : config.run.trials;
      spec.seed = *seed_opt ? seed : env_seed().value_or(config.run.seed);
      spec.engines = parse_engines(engine_name);
      if (sweep_text.empty()) {
        spec.variable = hetnet::SweepVariable::kTheta;
        spec.values = {config.system.snr_threshold};
      } else {
        std::tie(spec.variable, spec.values) = parse_sweep(sweep_text);
      }
      try {
        hetnet::validate_spec(spec);
      } catch (const hetnet::SpecError& e) {
        throw ValidationFailure(e.what());
      }
      const auto table = hetnet::run_sweep(spec);
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      hetnet::write_file(dir / "results.csv", hetnet::emit_csv(table));
      hetnet::write_file(dir / "results.meta.json", hetnet::emit_metadata_json(table));
      print_failures(table);
      std::cout << fmt::format("wrote {} rows to {}\n", table.rows.size(), (dir / "results.csv").string());
      return kExitOk;
    }

    if (*figure) {
      std::vector<hetnet::FigureId> ids;
      if (figure_name == "all") {
        ids = hetnet::all_figures();
      } else if (const auto id = hetnet::parse_figure_id(figure_name)) {
        ids.push_back(*id);
      } else {
        throw ValidationFailure(fmt::format("unknown figure '{}'", figure_name));
      }
      hetnet::FigureOptions options;
      options.trials = figure_trials;
      options.analytic_samples = figure_samples;
      options.seed = *figure_seed_opt ? seed : env_seed().value_or(options.seed);
      for (auto id : ids) {
        const auto files = hetnet::reproduce_figure(id, out_dir, options);
        std::cout << fmt::format("{}: {} {}\n", hetnet::to_string(id), files.csv.string(), files.svg.string());
      }
      return kExitOk;
    }
  } catch (const ValidationFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const hetnet::InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
