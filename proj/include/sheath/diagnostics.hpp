#pragma once

#include "sheath/mesh.hpp"

namespace sheath {

struct SpeciesNorms {
    double total_density = 0.0; ///< int int f
    double l1 = 0.0;            ///< int int |f|
    double l2 = 0.0;            ///< sqrt(int int f^2)

    bool operator==(const SpeciesNorms&) const = default;
};

struct EnergyBreakdown {
    double kinetic = 0.0; ///< 1/2 int int v^2 (f_e + f_i)
    double field = 0.0;   ///< 1/2 int E^2
    double total() const noexcept { return kinetic + field; }

    bool operator==(const EnergyBreakdown&) const = default;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double entry_current = 0.0;
    EnergyBreakdown energy;
    SpeciesNorms electrons;
    SpeciesNorms ions;

    bool operator==(const DiagnosticsRecord&) const = default;
};

// Phase-space integrals use the trapezoid rule in v, then in x.
EnergyBreakdown total_energy(const SimState& state);
SpeciesNorms norms(const DistributionField& f);
double entry_current(const SimState& state);
DiagnosticsRecord compute_record(const SimState& state);

struct ErrorField {
    DistributionField electrons;
    DistributionField ions;
};

/// reference - state, per species. Throws ConfigError on grid mismatch.
ErrorField error_field(const SimState& state, const SimState& reference);

} // namespace sheath
