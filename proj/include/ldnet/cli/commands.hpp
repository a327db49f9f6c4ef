#pragma once

#include <string>

#include "ldnet/cli/config.hpp"

namespace ldnet::cli {

inline constexpr char kVersion[] = "ldnet 0.1.0";

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
};

// Dispatches one subcommand, writes its artifacts under out_dir, prints the
// artifact paths to stdout and the wall-clock duration to stderr. The
// duration deliberately stays out of the artifacts so identical (config,
// seed) runs stay byte-identical. Throws on failure; returns 0.
int run_command(const std::string& name, const RunConfig& cfg,
                const RunOptions& opt);

}  // namespace ldnet::cli
