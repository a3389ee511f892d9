// iiotsec command-line entry point.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "iiotsec/cli/commands.hpp"
#include "iiotsec/common/error.hpp"

namespace cli = iiotsec::cli;

int main(int argc, char** argv) {
  CLI::App app{"SDN/IIoT security toolkit: SCADA payload IDS, flow-rule ledger and detection node"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path, seed, mode, scenario, out;
  app.add_option("--config", config_path, "JSON run config");
  app.add_option("--seed", seed, "global seed");
  app.add_option("--mode", mode, "binary | multiclass")->check(CLI::IsMember({"binary", "multiclass"}));
  app.add_option("--scenario", scenario, "bundled scenario name or script path");
  app.add_option("--out", out, "output directory");

  app.add_subcommand("prepare", "split the data set and fit normalization");
  app.add_subcommand("train", "train the CNN for --mode");
  app.add_subcommand("eval", "evaluate the trained model on the test split");
  app.add_subcommand("compare", "CNN vs DT vs RSL-KNN accuracy table");
  app.add_subcommand("simulate", "run an SDN scenario with IDS, ledger and detection node");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  cli::RunConfig config;
  try {
    if (!config_path) {
      if (const char* env = std::getenv("IIOTSEC_CONFIG"); env && *env) config_path = env;
    }
    config = config_path ? cli::load_config(*config_path) : cli::default_config();
    cli::apply_overrides(config, cli::overrides_from_env());
    cli::apply_overrides(config, {seed, mode, out, scenario});
    config.validate();
  } catch (const iiotsec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return cli::run_command(command, config, std::cout, std::cerr);
}
