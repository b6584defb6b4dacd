#pragma once

#include <filesystem>
#include <iosfwd>

#include "hyperam/config.hpp"

namespace hyperam {

// Exit codes shared with the CLI: 0 success, 1 an asserted expectation
// failed, 2 usage or config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

int cmd_dynamics(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                 std::ostream& log);
int cmd_energy_trace(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                     std::ostream& log);
int cmd_image_recall(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                     std::ostream& log);
int cmd_verify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
               std::ostream& log);

/// Dispatches on cfg.kind, creating out_dir first.
int run_command(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                std::ostream& log);

}  // namespace hyperam
