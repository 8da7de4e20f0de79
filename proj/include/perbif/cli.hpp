#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "perbif/io.hpp"

namespace perbif::cli {

enum ExitCode { ok = 0, config_error = 1, solver_incomplete = 2, partial_report = 3 };

struct Flags {
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  bool png = false;
  bool allow_outside = false;
  bool include_infinity = false;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 1;
  std::string versions;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;
};

json to_json(const RunManifest& m);

inline constexpr const char* kVersion = "perbif 1.0.0";

/// Subcommands: spectrum, lyapunov, field, bifmeasure, pern-roots, equidist, render.
int run_command(const std::string& command, const json& config, const Flags& flags,
                std::ostream& err);

/// Full command line entry point (argv[0] is the program name).
int main(int argc, char** argv);

}  // namespace perbif::cli
