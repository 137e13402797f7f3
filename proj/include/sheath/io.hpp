#pragma once

// Text file formats. Every real is written with 17 significant digits, so
// reading a file back reproduces the doubles bit for bit.
//
// Headers are "# key value" lines followed by whitespace-separated data.
//
//   timeseries.csv   header t,J0,energy,energy_kinetic,energy_field,
//                    ne_total,ni_total,ne_l1,ni_l1,ne_l2,ni_l2
//   snapshot         keys: species (ions|electrons|field), t, step, nx,
//                    x_lo, x_hi, nv, v_lo, v_hi; then nx+1 rows of nv+1
//                    values (field: one row of nx+1 values)
//   equilibrium      keys: N, phi_w, n0, eps, mu, rho0, eta, sigma, Z;
//                    then N+1 rows "x phi E"
//   checkpoint       keys: digest, step, t, grids; then labelled blocks

#include "sheath/boundary.hpp"
#include "sheath/diagnostics.hpp"
#include "sheath/equilibrium.hpp"
#include "sheath/mesh.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace sheath {

std::string format_real(double v);

inline constexpr const char* timeseries_header =
    "t,J0,energy,energy_kinetic,energy_field,ne_total,ni_total,ne_l1,ni_l1,ne_l2,ni_l2";

/// Streams diagnostics rows to a CSV file as they are produced.
class TimeseriesWriter {
  public:
    explicit TimeseriesWriter(const std::filesystem::path& path);
    void append(const DiagnosticsRecord& r);

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void write_timeseries(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_timeseries(const std::filesystem::path& path);

/// Zero-padded tag for snapshot k, e.g. t000000.010000 for t = 0.01.
std::string snapshot_tag(double t);

struct SnapshotFiles {
    std::filesystem::path ions;
    std::filesystem::path electrons;
    std::filesystem::path field;
};

SnapshotFiles write_snapshot(const std::filesystem::path& dir, const SimState& state, double t);
/// Same, with the file tag given directly.
SnapshotFiles write_snapshot(const std::filesystem::path& dir, const SimState& state, const std::string& tag);

struct Snapshot {
    std::string species;
    double t = 0.0;
    std::int64_t step = 0;
    PhaseGrid grid; ///< for the field file only grid.x is meaningful
    std::vector<double> values;
};

Snapshot read_snapshot(const std::filesystem::path& path);

/// Rebuilds a state from the three files of one snapshot.
SimState read_snapshot_state(const SnapshotFiles& files);

void write_equilibrium(const std::filesystem::path& path, const EquilibriumSolution& eq,
                       const PhysicalParams& p);

struct EquilibriumFile {
    EquilibriumSolution solution;
    PhysicalParams params;
};

EquilibriumFile read_equilibrium(const std::filesystem::path& path);

struct Checkpoint {
    SimState state;
    BoundaryData boundary;
    std::uint64_t digest = 0;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::filesystem::path& path);

} // namespace sheath
