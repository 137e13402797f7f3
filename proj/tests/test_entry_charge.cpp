#include <doctest.h>

#include "sheath/equilibrium.hpp"

#include <cmath>

using namespace sheath;

TEST_CASE("discrete charge at the entrance on the reference grids") {
    const PhysicalParams p;
    const EquilibriumSolution eq = solve_equilibrium(p, 256);
    const PhaseGrid ions = make_phase_grid(2048, 4096, -5.0, 5.0);
    const PhaseGrid electrons = make_phase_grid(2048, 4096, -200.0, 500.0);
    auto row_integral = [](const Mesh1D& v, auto&& f) {
        double acc = 0.0;
        for (int j = 0; j <= v.n_cells; ++j) {
            acc += (j == 0 || j == v.n_cells ? 0.5 : 1.0) * f(v.node(j));
        }
        return acc * v.delta;
    };
    const double ni = row_integral(ions.v, [&](double v) { return eval_equilibrium_ion(0.0, v, eq, p); });
    const double ne = row_integral(electrons.v, [&](double v) { return eval_equilibrium_electron(0.0, v, eq, p); });
    CHECK(std::abs(ni - ne - p.rho0) < 1e-6);
}
