#pragma once

// Run configuration in a sectioned key = value text format:
//
//   [physical]        mu, eps, rho0, eta, sigma, Z
//   [grid.ions]       nx, nv, v_lo, v_hi
//   [grid.electrons]  nx, nv, v_lo, v_hi
//   [numerics]        d, dt, t_final, v_scheme (spline | lagrange), equilibrium_n
//   [io]              output_dir, snapshot_interval, checkpoint_interval, resume_path
//
// '#' and ';' start comments. Outside a section, keys may be written in
// full ("numerics.d = 0"). Numbers accept a plain fraction such as 1/3672.
// Every key is optional; defaults reproduce the reference sheath run.

#include "sheath/mesh.hpp"
#include "sheath/transport.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace sheath {

struct SpeciesGrid {
    int nx = 2048;
    int nv = 4096;
    double v_lo = 0.0;
    double v_hi = 0.0;

    PhaseGrid phase_grid() const { return make_phase_grid(nx, nv, v_lo, v_hi); }
    bool operator==(const SpeciesGrid&) const = default;
};

struct NumericsConfig {
    int d = 8;
    double dt = 1e-5;
    double t_final = 8.03478;
    VelocityScheme v_scheme = VelocityScheme::PeriodicSpline;
    int equilibrium_n = 2048;

    bool operator==(const NumericsConfig&) const = default;
};

struct IoConfig {
    std::string output_dir = "output";
    double snapshot_interval = 0.01;
    double checkpoint_interval = 0.0;
    std::string resume_path;

    bool operator==(const IoConfig&) const = default;
};

struct RunConfig {
    PhysicalParams physical;
    SpeciesGrid ions{2048, 4096, -5.0, 5.0};
    SpeciesGrid electrons{2048, 4096, -200.0, 500.0};
    NumericsConfig numerics;
    IoConfig io;

    /// Throws ConfigError on any invariant violation.
    void validate() const;
    SplitConfig split() const;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates. Throws ParseError (with line) on unknown keys,
/// malformed values or failed validation.
RunConfig parse_config(std::string_view text);

/// Applies one "section.key=value" override, e.g. from the command line.
void apply_override(RunConfig& cfg, std::string_view assignment);

std::string serialize_config(const RunConfig& cfg);

/// FNV-1a digest of everything that determines a trajectory (physics,
/// grids, d, dt, velocity scheme, equilibrium resolution). Excludes
/// t_final and I/O so a run can be resumed with a later end time.
std::uint64_t config_digest(const RunConfig& cfg);

} // namespace sheath
