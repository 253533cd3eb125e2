// Command-line front end for the eeplan experiments.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "eeplan/experiments.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::string scheme;
  std::string bound;
  int deployments = 0;
  int draws = 0;
  std::string mode;
  std::vector<double> lambdas;
  std::vector<double> gammas;
  std::string projection;
  bool no_svg = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Config file (sectioned key = value)");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--scheme", o.scheme, "Restrict to one scheme")->check(CLI::IsMember({"mr", "zf", "mmse"}));
  cmd->add_option("--bound", o.bound, "SE bound")->check(CLI::IsMember({"t1", "uatf", "closed"}));
  cmd->add_option("--deployments", o.deployments, "MC deployments")->check(CLI::PositiveNumber);
  cmd->add_option("--draws", o.draws, "MC channel draws per deployment")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", o.mode, "Intercept mode")->check(CLI::IsMember({"literal", "continuity"}));
  cmd->add_option("--lambda", o.lambdas, "BS density list [BS/km^2]");
  cmd->add_option("--gamma", o.gammas, "Target SINR list (linear)");
  cmd->add_option("--projection", o.projection, "Integer projection")->check(CLI::IsMember({"nearest", "refit"}));
  cmd->add_flag("--no-svg", o.no_svg, "Skip SVG renderings");
}

eeplan::RunConfig resolve(const Overrides& o) {
  eeplan::RunConfig c = o.config.empty() ? eeplan::RunConfig{} : eeplan::load_config(o.config);
  if (o.seed) c.exp.seed = *o.seed;
  if (!o.scheme.empty()) c.exp.schemes = {eeplan::parse_scheme(o.scheme)};
  if (!o.bound.empty()) c.exp.bound = o.bound;
  if (o.deployments) c.exp.deployments = o.deployments;
  if (o.draws) c.exp.draws = o.draws;
  if (!o.mode.empty()) eeplan::apply_config_key(c, "slopes.mode", o.mode);
  if (!o.lambdas.empty()) c.exp.lambdas = o.lambdas;
  if (!o.gammas.empty()) c.exp.gammas = o.gammas;
  if (!o.projection.empty()) eeplan::apply_config_key(c, "experiment.projection", o.projection);
  c.system.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient dense network design: moments, Monte Carlo SE and EE optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(eeplan::kVersion));
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> kinds{
      {"moments", "Interference moments and mean uplink power per lambda"},
      {"mc-surface", "Monte Carlo EE over the (lambda, zeta) grid"},
      {"ee-vs-lambda", "EE versus BS density with per-lambda optimal zeta"},
      {"mk-surface", "EE over the (M, K) grid at the design density"},
      {"optimize", "Closed-form optimal design per (lambda, gamma)"},
      {"table4", "Optimal designs at the design density for gamma in {1, 3, 7}"}};
  for (const auto& [name, help] : kinds) add_common(app.add_subcommand(name, help), o);
  CLI11_PARSE(app, argc, argv);

  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = resolve(o);
    const auto result = eeplan::run_experiment(kind, cfg);
    for (const auto& path : eeplan::write_output(result, o.out, !o.no_svg, kind)) std::cout << path << "\n";
    std::cout << result.summary();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
