#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "virinv/cli/runner.hpp"

int main(int argc, char** argv) {
  namespace cli = virinv::cli;
  CLI::App app{"Time-dependent oscillators, Ermakov invariants and virial dynamics"};
  app.set_version_flag("--version", std::string(cli::kToolName) + " " + cli::kToolVersion);
  app.require_subcommand(1);

  cli::RunOptions options;
  std::string config, out;
  std::uint64_t seed = 0;
  for (const std::string& name : cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config, "INI configuration file");
    sub->add_option("-o,--out", out, "output directory");
    sub->add_option("-s,--seed", seed, "random seed override");
    sub->add_flag("-q,--quiet", options.quiet, "suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigFailure;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  options.subcommand = chosen->get_name();
  if (!config.empty()) options.config_path = config;
  if (!out.empty()) options.out_dir = out;
  if (chosen->count("--seed") > 0) options.seed = seed;
  return cli::run(options, std::cout, std::cerr);
}
