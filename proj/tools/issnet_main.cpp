// issnet: small-gain analysis of gain operators and network simulations
// driven by a key-value config file (see docs/config.md).

#include <CLI11.hpp>

#include <iostream>

#include "issnet/commands.hpp"
#include "issnet/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Small-gain certificates and ISS checks for networks of subsystems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::size_t n_max = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (default ./out)");
  app.add_option("--seed", seed, "Seed for randomized sampling");
  auto* n_opt = app.add_option("--n-max", n_max, "Largest iterate for the small-gain check")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Only set the exit status");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze", "Spectral-radius bounds from ||Gamma^k(1)||"},
      {"certify", "Synthesize and verify a point of strict decay"},
      {"graph-check", "Path-product / path-sum statistics against the operator"},
      {"simulate", "Simulate truncations of the example network and check V"},
      {"full-report", "Everything above for the example network"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : issnet::kExitUsage;
  }

  try {
    const auto cmd = issnet::parse_command(app.get_subcommands().front()->get_name());
    const auto cfg = issnet::load_config(config_path);
    issnet::RunOptions opts;
    opts.out_dir = out_opt->count() > 0 || !cfg.report.directory ? out_dir : *cfg.report.directory;
    opts.seed = seed;
    if (n_opt->count() > 0) opts.n_max = n_max;
    const auto outcome = issnet::run_command(cmd, cfg, opts);
    if (!quiet) {
      std::cout << outcome.summary;
      for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
    }
    return outcome.exit_code;
  } catch (const issnet::ConfigError& e) {
    std::cerr << "issnet: " << e.what() << '\n';
    return issnet::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "issnet: " << e.what() << '\n';
    return issnet::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "issnet: " << e.what() << '\n';
    return issnet::kExitFail;
  }
}
