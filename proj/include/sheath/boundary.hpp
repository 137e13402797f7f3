#pragma once

// Ghost values of a distribution outside [0, 1], needed by the spatial
// interpolation stencils.
//
// Entry (i < 0):  v_j >= 0 -> frozen inflow f(0, 0, v_j)
//                 v_j <  0 -> 2 f(0, v_j) - f(-i, v_j)
// Wall  (i > Nx): v_j >= 0 -> 2 f(Nx, v_j) - f(2 Nx - i, v_j)   (butterfly)
//                 v_j <  0 -> 0                                  (absorbing)

#include "sheath/mesh.hpp"

#include <span>
#include <vector>

namespace sheath {

/// Entry profile f_s(0, 0, v_j) of one species at t = 0; entries with v_j < 0 are unused.
struct InflowCache {
    std::vector<double> values;
};

/// Caches row x = 0 of the initial field (zero for v_j < 0).
InflowCache make_inflow_cache(const DistributionField& initial);

struct BoundaryData {
    InflowCache ions;
    InflowCache electrons;
};

double ghost_left(const DistributionField& f, long i, long j, const InflowCache& cache);
double ghost_right(const DistributionField& f, long i, long j);

/// f(i, j) for 0 <= i <= Nx, otherwise the ghost value.
inline double value_or_ghost(const DistributionField& f, long i, long j, const InflowCache& cache) {
    if (i < 0) {
        return ghost_left(f, i, j, cache);
    }
    if (i > f.nx()) {
        return ghost_right(f, i, j);
    }
    return f(i, j);
}

/// Writes the column j for x-indices first .. first + out.size() - 1,
/// ghosts included. The padded-buffer form of value_or_ghost.
void gather_column(const DistributionField& f, long j, long first, const InflowCache& cache,
                   std::span<double> out);

} // namespace sheath
