#include <cstdint>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ldnet/cli/commands.hpp"
#include "ldnet/cli/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rate-function toolkit for windowed stochastic networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed_override = 0;
  int threads = 1;

  const std::vector<std::string> names = {"simulate", "rate",     "rncheck",
                                          "entropy",  "converge", "sample-weights"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name, "");
    sub->add_option("--config", config_path, "JSON configuration file")
        ->required();
    sub->add_option("--seed", seed_override, "overrides the config seed");
    sub->add_option("--out", out_dir, "output directory (default .)");
    sub->add_option("--threads", threads, "worker threads (never affects results)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().at(0);
  try {
    ldnet::cli::RunConfig cfg = ldnet::cli::load_config(config_path);
    if (sub->count("--seed") > 0) cfg.seed = seed_override;
    ldnet::cli::RunOptions opt;
    opt.out_dir = out_dir;
    opt.threads = threads;
    return ldnet::cli::run_command(sub->get_name(), cfg, opt);
  } catch (const ldnet::cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
