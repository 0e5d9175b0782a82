#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "ctrack/config_io.hpp"

namespace ctrack {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitBadInput = 2,
  kExitBackend = 3,
  kExitValidation = 4,
};

/// Environment variable that replaces backend.url.
inline constexpr const char* kRemoteUrlEnv = "CTRACK_REMOTE_URL";

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
};

/// Runs track, evaluate, synthesize or diagnose. Errors are reported on err
/// and mapped to an exit code; nothing is written to the output directory
/// unless the command completes.
int run_command(std::string_view name, const CommandOptions& options, std::ostream& log, std::ostream& err);

/// Overlay frame: trajectory tail over the previous frames and the current
/// point as a dot when visible.
Image render_overlay(const Image& frame, const Track& track, int k, int tail = 5, Rgb dot = {255, 0, 0},
                     Rgb trail = {255, 230, 0});

}  // namespace ctrack
