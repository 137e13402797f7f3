#include "sheath/diagnostics.hpp"

#include "sheath/errors.hpp"
#include "sheath/field_moments.hpp"

#include <cmath>
#include <vector>

namespace sheath {

namespace {

double trapezoid_x(const std::vector<double>& values, double dx) { return trapezoid(values, dx); }

double kinetic_integral(const DistributionField& f) {
    const Mesh1D& v = f.grid().v;
    std::vector<double> per_node(static_cast<std::size_t>(f.nx()) + 1);
    std::vector<double> weighted(f.row_length());
    for (int i = 0; i <= f.nx(); ++i) {
        const auto row = f.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double vj = v.node(static_cast<long>(j));
            weighted[j] = vj * vj * row[j];
        }
        per_node[static_cast<std::size_t>(i)] = trapezoid(weighted, v.delta);
    }
    return trapezoid_x(per_node, f.grid().x.delta);
}

} // namespace

EnergyBreakdown total_energy(const SimState& state) {
    EnergyBreakdown e;
    e.kinetic = 0.5 * (kinetic_integral(state.f_e) + kinetic_integral(state.f_i));
    std::vector<double> squared(state.efield.size());
    for (std::size_t i = 0; i < squared.size(); ++i) {
        squared[i] = state.efield[i] * state.efield[i];
    }
    e.field = 0.5 * trapezoid_x(squared, state.f_e.grid().x.delta);
    return e;
}

SpeciesNorms norms(const DistributionField& f) {
    const auto nodes = static_cast<std::size_t>(f.nx()) + 1;
    std::vector<double> density(nodes), absolute(nodes), square(nodes);
    std::vector<double> abs_row(f.row_length()), sq_row(f.row_length());
    const double dv = f.grid().v.delta;
    for (std::size_t i = 0; i < nodes; ++i) {
        const auto row = f.row(static_cast<long>(i));
        for (std::size_t j = 0; j < row.size(); ++j) {
            abs_row[j] = std::abs(row[j]);
            sq_row[j] = row[j] * row[j];
        }
        density[i] = trapezoid(row, dv);
        absolute[i] = trapezoid(abs_row, dv);
        square[i] = trapezoid(sq_row, dv);
    }
    const double dx = f.grid().x.delta;
    return {trapezoid_x(density, dx), trapezoid_x(absolute, dx), std::sqrt(trapezoid_x(square, dx))};
}

double entry_current(const SimState& state) {
    return trapezoid_first(state.f_i.row(0), state.f_i.grid().v) -
           trapezoid_first(state.f_e.row(0), state.f_e.grid().v);
}

DiagnosticsRecord compute_record(const SimState& state) {
    DiagnosticsRecord r;
    r.t = state.time;
    r.entry_current = entry_current(state);
    r.energy = total_energy(state);
    r.electrons = norms(state.f_e);
    r.ions = norms(state.f_i);
    return r;
}

ErrorField error_field(const SimState& state, const SimState& reference) {
    if (!(state.f_e.grid() == reference.f_e.grid()) || !(state.f_i.grid() == reference.f_i.grid())) {
        throw ConfigError("error field needs identical grids");
    }
    auto difference = [](const DistributionField& ref, const DistributionField& cur) {
        DistributionField out(ref.grid());
        auto dst = out.values();
        auto a = ref.values();
        auto b = cur.values();
        for (std::size_t k = 0; k < dst.size(); ++k) {
            dst[k] = a[k] - b[k];
        }
        return out;
    };
    return {difference(reference.f_e, state.f_e), difference(reference.f_i, state.f_i)};
}

} // namespace sheath
