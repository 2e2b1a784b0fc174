#pragma once

#include <filesystem>
#include <vector>

#include "kvlab/config.hpp"
#include "kvlab/rates.hpp"
#include "kvlab/trajectory.hpp"

namespace kvlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitTheoryViolation = 2;

inline constexpr const char* kTrajectoryHeader =
    "t,H,I,E,J_norm,omega_x,omega_y,l1_to_eq,sup_ratio,H_bound,L1_bound";

/// Writes the frozen CSV schema. envelopes may be empty (bounds written as nan)
/// or match the record count.
void emit_trajectory_csv(const Trajectory& trajectory, const std::vector<Envelope>& envelopes,
                         const std::filesystem::path& path);

/// Runs the configured command, writing outputs under config.output_dir.
/// Returns kExitOk, or kExitTheoryViolation if a checked statement failed.
int run_command(const RunConfig& config);

}  // namespace kvlab
