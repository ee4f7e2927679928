#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace lorentz_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInconsistent = 3;
inline constexpr int kExitUsage = 64;

/// Fixed header of every constants sweep CSV.
inline constexpr const char* kConstantsHeader = "regime,part,value,finite,t_min,t_max,N,seed";

const std::vector<std::string>& command_names();

/// Runs one command over every resolved run and writes its reports under
/// settings.out. Returns the process exit code; summary lines go to `log`.
int run_command(const std::string& name, const Loaded& cfg, std::ostream& log);

/// Formats a double so that reruns are byte-identical and inf reads "inf".
std::string fmt(double x);

}  // namespace lorentz_lab::cli
