#pragma once

// Command-line driver: the equilibrium, run and diag subcommands, plus the
// library entry points they are built from.
//
// Output directory layout of a run:
//   config.cfg              resolved configuration
//   equilibrium.dat         stationary state used for the initial data
//   timeseries.csv          one diagnostics row per step
//   snapshots/              {ions,electrons,field}_tNNNNNN.NNNNNN.snap
//   checkpoints/            checkpoint_<step>.chk
// diag adds diag_timeseries.csv (and errors/ with --errors).

#include "sheath/config.hpp"
#include "sheath/diagnostics.hpp"
#include "sheath/equilibrium.hpp"
#include "sheath/io.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sheath {

/// Reads the config file (empty path: defaults) and applies the overrides in order.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides);

/// Loads the equilibrium file when given, checking its parameters against
/// cfg, otherwise solves on numerics.equilibrium_n cells.
EquilibriumSolution obtain_equilibrium(const RunConfig& cfg,
                                       const std::filesystem::path& equilibrium_path);

struct RunOutcome {
    SimState final_state;
    std::vector<DiagnosticsRecord> records; ///< full series, including rows kept from before a resume
    std::size_t snapshots_written = 0;
    std::filesystem::path last_checkpoint;
};

/// Runs the configured simulation, writing everything under cfg.io.output_dir.
/// A non-empty cfg.io.resume_path continues from that checkpoint.
RunOutcome run_simulation(const RunConfig& cfg, const std::filesystem::path& equilibrium_path);

/// Snapshot file sets in output_dir/snapshots, ordered by time.
std::vector<SnapshotFiles> list_snapshots(const std::filesystem::path& output_dir);

/// Recomputes one diagnostics record per snapshot and writes
/// diag_timeseries.csv. With write_errors, also writes the per-species
/// error fields against the first snapshot to errors/.
std::vector<DiagnosticsRecord> recompute_diagnostics(const std::filesystem::path& output_dir,
                                                     bool write_errors);

int main_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sheath
