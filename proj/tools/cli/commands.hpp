#pragma once

#include <iosfwd>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace zeroprop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct GlobalOptions {
  bool machine = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
};

struct ReproduceOptions {
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  bool corrupt_reference = false;  // test hook
};

struct OptimizeOptions {
  std::string config_path;
  std::optional<std::string> emit_config_path;
  int grid_resolution = 0;  // > 0 runs grid_scan instead of Nelder-Mead
};

int cmd_reproduce(const ReproduceOptions& opts, const GlobalOptions& global, std::ostream& out, std::ostream& err);
int cmd_eval(const std::string& config_path, const std::string& which, const GlobalOptions& global, std::ostream& out,
             std::ostream& err);
int cmd_optimize(const OptimizeOptions& opts, const GlobalOptions& global, std::ostream& out, std::ostream& err);
int cmd_selfcheck(const std::optional<std::string>& config_path, const GlobalOptions& global, std::ostream& out,
                  std::ostream& err);

/// Full command-line entry point; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zeroprop::cli
