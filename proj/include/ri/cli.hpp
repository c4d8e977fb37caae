#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ri::cli {

/// Everything a run depends on. Serialized as the config snapshot of every run
/// directory; worker count and output directory are execution details and are
/// not part of it.
struct RunConfig {
  std::string generator = "z3";
  std::string center = "origin";
  int radius = 4;
  std::vector<int> radii{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  double level = 1.0;
  std::vector<double> levels{1.0, 10.0, 50.0, 200.0};
  std::vector<std::string> potential;  // "vertex:value"
  std::vector<std::string> k_set;      // vertices
  std::vector<std::string> coords;     // vertices; empty means the default battery
  double shift = 0.0;
  double rate = 10.0;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-3;
  double sigmas = 4.0;
  double alpha = 0.01;
  std::size_t pairs = 20;
  std::string sampler = "collapse";

  bool green = false;
  bool capacity = false;
  bool laplace = false;
  bool limit = false;
  bool resolvent = false;
  bool hitting = false;

  bool operator==(const RunConfig&) const = default;
};

/// A parsed command line: the subcommand, its config, and execution details.
struct Invocation {
  std::string command;           // window | exact | sample | verify | asymptotics
  std::string battery = "all";   // verify only
  RunConfig config;
  unsigned workers = 1;
  std::string out_dir;           // resolved run directory
};

/// Parses and runs one command line (args exclude the program name). Returns the
/// process exit code: 0 on success (and, for verification, iff every test
/// passed), 1 on a failed verification or runtime error, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a command line without running it. Throws UsageError on invalid values
/// and CLI::ParseError on malformed syntax.
Invocation parse(const std::vector<std::string>& args);

/// Config-file text for `config`; parse({"--config", file, ...}) reproduces it.
std::string to_config_text(const RunConfig& config);

}  // namespace ri::cli
