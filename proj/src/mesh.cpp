#include "sheath/mesh.hpp"

#include "sheath/errors.hpp"

#include <cmath>
#include <sstream>

namespace sheath {

void PhysicalParams::validate() const {
    auto require_positive = [](double value, const char* name) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw ConfigError(std::string(name) + " must be positive and finite");
        }
    };
    require_positive(mu, "mu");
    require_positive(eps, "eps");
    require_positive(eta, "eta");
    require_positive(sigma, "sigma");
    if (!std::isfinite(rho0) || !std::isfinite(Z)) {
        throw ConfigError("rho0 and Z must be finite");
    }
}

Mesh1D Mesh1D::make(double lo, double hi, int n_cells) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
        std::ostringstream msg;
        msg << "mesh bounds must satisfy lo < hi, got [" << lo << ", " << hi << "]";
        throw ConfigError(msg.str());
    }
    if (n_cells < 2) {
        throw ConfigError("mesh needs at least 2 cells, got " + std::to_string(n_cells));
    }
    return Mesh1D{lo, hi, n_cells, (hi - lo) / n_cells};
}

PhaseGrid make_phase_grid(int nx, int nv, double v_lo, double v_hi) {
    return PhaseGrid{Mesh1D::make(0.0, 1.0, nx), Mesh1D::make(v_lo, v_hi, nv)};
}

DistributionField::DistributionField(PhaseGrid grid, double fill)
    : grid_(grid), values_(static_cast<std::size_t>(grid.x.size()) * grid.v.size(), fill) {}

DistributionField sample_function(const PhaseGrid& grid,
                                  const std::function<double(double, double)>& fn) {
    DistributionField f(grid);
    for (int i = 0; i <= grid.nx(); ++i) {
        const double x = grid.x.node(i);
        for (int j = 0; j <= grid.nv(); ++j) {
            const double v = grid.v.node(j);
            const double value = fn(x, v);
            if (!std::isfinite(value)) {
                std::ostringstream msg;
                msg << "non-finite initial value at node (" << i << ", " << j << "), x = " << x
                    << ", v = " << v;
                throw NumericalError(msg.str());
            }
            f(i, j) = value;
        }
    }
    return f;
}

void SimState::validate() const {
    if (!(f_e.grid().x == f_i.grid().x)) {
        throw ConfigError("electron and ion fields must share the x-mesh");
    }
    if (efield.size() != static_cast<std::size_t>(f_e.grid().x.size())) {
        throw ConfigError("electric field length does not match the x-mesh");
    }
}

} // namespace sheath
