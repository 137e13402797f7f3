#include "sheath/boundary.hpp"

#include "sheath/errors.hpp"

#include <algorithm>
#include <string>

namespace sheath {

namespace {

[[noreturn]] void reach_error(long i, int nx) {
    throw ConfigError("ghost index " + std::to_string(i) + " reflects outside the grid of " +
                      std::to_string(nx) + " cells; refine the x-mesh or lower d");
}

} // namespace

InflowCache make_inflow_cache(const DistributionField& initial) {
    InflowCache cache;
    cache.values.assign(initial.row_length(), 0.0);
    const Mesh1D& v = initial.grid().v;
    for (int j = 0; j <= v.n_cells; ++j) {
        if (v.node(j) >= 0.0) {
            cache.values[static_cast<std::size_t>(j)] = initial(0, j);
        }
    }
    return cache;
}

double ghost_left(const DistributionField& f, long i, long j, const InflowCache& cache) {
    if (f.grid().v.node(j) >= 0.0) {
        return cache.values[static_cast<std::size_t>(j)];
    }
    if (-i > f.nx()) {
        reach_error(i, f.nx());
    }
    return 2.0 * f(0, j) - f(-i, j);
}

double ghost_right(const DistributionField& f, long i, long j) {
    if (f.grid().v.node(j) < 0.0) {
        return 0.0;
    }
    const long nx = f.nx();
    const long mirror = 2 * nx - i;
    if (mirror < 0) {
        reach_error(i, f.nx());
    }
    return 2.0 * f(nx, j) - f(mirror, j);
}

void gather_column(const DistributionField& f, long j, long first, const InflowCache& cache,
                   std::span<double> out) {
    const long nx = f.nx();
    const long last = first + static_cast<long>(out.size()) - 1;
    const bool incoming = f.grid().v.node(j) >= 0.0;
    if (incoming ? (2 * nx - last < 0) : (-first > nx)) {
        reach_error(incoming ? last : first, f.nx());
    }
    const long stride = static_cast<long>(f.row_length());
    const double* base = f.values().data() + j;
    const double edge_left = base[0];
    const double edge_right = base[nx * stride];
    const double inflow = cache.values[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < out.size(); ++k) {
        const long i = first + static_cast<long>(k);
        double value;
        if (i < 0) {
            value = incoming ? inflow : 2.0 * edge_left - base[-i * stride];
        } else if (i > nx) {
            value = incoming ? 2.0 * edge_right - base[(2 * nx - i) * stride] : 0.0;
        } else {
            value = base[i * stride];
        }
        out[k] = value;
    }
}

} // namespace sheath
