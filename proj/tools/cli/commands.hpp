#pragma once

#include "config.hpp"

#include <iosfwd>

namespace covshift::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFalsified = 2;

/// Each command writes its CSV files into config.out, prints a short summary
/// to `log` and returns the process exit code.
int cmd_figure1(const RunConfig& config, std::ostream& log);
int cmd_figure2(const RunConfig& config, std::ostream& log);
int cmd_theorem_check(const RunConfig& config, std::ostream& log);
int cmd_probing(const RunConfig& config, std::ostream& log);
int cmd_estimate(const RunConfig& config, std::ostream& log);

/// Argument parsing and dispatch; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace covshift::cli
