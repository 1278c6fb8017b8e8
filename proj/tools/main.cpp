// fsoqkd: transmission-probability sweeps, Monte-Carlo validation and
// quadrature dumps.
//
// Exit status: 0 success, 1 usage or config error, 2 validation failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fsoqkd/config.hpp"
#include "fsoqkd/oracle.hpp"
#include "fsoqkd/sweep.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    stream = &file;
  }
};

fsoqkd::config::ScenarioConfig load(const std::string& path) {
  auto cfg = fsoqkd::config::load_config(path);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << path << ": " << w << '\n';
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission probabilities for FSO QKD links with pointing errors"};
  app.require_subcommand(1);

  std::string config_path;
  std::string target = "tplr";
  std::string variable = "theta-d";
  std::string range;
  std::string methods = "ghq";
  std::optional<int> order;
  std::optional<std::uint64_t> mc_samples;
  std::uint64_t seed = 1;
  std::string out_path;
  unsigned threads = 0;
  double perturb = 0.0;
  std::string kind = "hermite";

  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate methods over a parameter grid (CSV)");
  sweep_cmd->add_option("--config", config_path, "Scenario file")->required();
  sweep_cmd->add_option("--target", target, "tplr | tpe | tpre | tpre-rayleigh");
  sweep_cmd->add_option("--var", variable, "theta-d | theta-e | gd");
  sweep_cmd->add_option("--range", range, "start:stop:count[:log]")->required();
  sweep_cmd->add_option("--methods", methods,
                        "Comma list of ghq, robust, robust-consistent, asymptotic, exact, "
                        "turbulence, legendre, simplified");
  sweep_cmd->add_option("--order", order, "Quadrature order");
  sweep_cmd->add_option("--mc-samples", mc_samples, "Add Monte-Carlo columns with N samples");
  sweep_cmd->add_option("--seed", seed, "Monte-Carlo seed");
  sweep_cmd->add_option("--threads", threads, "Monte-Carlo worker threads (0 = all cores)");
  sweep_cmd->add_option("--out", out_path, "Write CSV here instead of stdout");

  auto* mc_cmd = app.add_subcommand("mc-validate", "Compare an analytic value with Monte Carlo");
  mc_cmd->add_option("--config", config_path, "Scenario file")->required();
  mc_cmd->add_option("--target", target, "tplr | tpe | tpre | tpre-rayleigh");
  mc_cmd->add_option("--order", order, "Quadrature order");
  mc_cmd->add_option("--mc-samples", mc_samples, "Sample count (default 1e7)");
  mc_cmd->add_option("--seed", seed, "Monte-Carlo seed");
  mc_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  mc_cmd->add_option("--perturb", perturb, "Offset added to the analytic value (self-test)");
  mc_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* nodes_cmd = app.add_subcommand("nodes", "Dump a quadrature rule as CSV");
  nodes_cmd->add_option("--kind", kind, "hermite | legendre")
      ->check(CLI::IsMember({"hermite", "legendre"}));
  nodes_cmd->add_option("--order", order, "Number of nodes")->required();
  nodes_cmd->add_option("--out", out_path, "Write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  namespace sw = fsoqkd::sweep;
  try {
    if (*sweep_cmd) {
      sw::SweepSpec spec;
      spec.target = sw::parse_target(target);
      spec.variable = sw::parse_variable(variable);
      spec.range = sw::parse_range(range);
      spec.methods = sw::parse_methods(methods);
      spec.order = order;
      spec.scenario = load(config_path);
      if (mc_samples) spec.mc = sw::McOptions{*mc_samples, seed};
      spec.threads = threads;
      spec.validate();
      Output out(out_path);
      sw::run_sweep(spec, *out.stream);
      return 0;
    }
    if (*mc_cmd) {
      const auto cfg = load(config_path);
      const auto report =
          sw::run_mc_validate(cfg, sw::parse_target(target),
                              mc_samples.value_or(fsoqkd::oracle::kDefaultSamples), seed, order,
                              perturb, threads);
      Output out(out_path);
      *out.stream << "target      " << target << '\n';
      sw::write_report(report, *out.stream);
      return report.passed ? 0 : kExitValidation;
    }
    if (*nodes_cmd) {
      const auto k = kind == "legendre" ? fsoqkd::quadrature::QuadratureKind::Legendre
                                        : fsoqkd::quadrature::QuadratureKind::Hermite;
      Output out(out_path);
      sw::dump_nodes(k, *order, *out.stream);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
