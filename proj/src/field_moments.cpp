#include "sheath/field_moments.hpp"

#include "sheath/errors.hpp"
#include "sheath/interp.hpp"

#include <algorithm>
#include <cmath>

namespace sheath {

double trapezoid(std::span<const double> row, double dv) {
    const std::size_t n = row.size() - 1;
    double sum = 0.5 * row[0];
    for (std::size_t j = 1; j < n; ++j) {
        sum += row[j];
    }
    sum += 0.5 * row[n];
    return dv * sum;
}

double trapezoid_first(std::span<const double> row, const Mesh1D& v) {
    const std::size_t n = row.size() - 1;
    double sum = 0.5 * v.node(0) * row[0];
    for (std::size_t j = 1; j < n; ++j) {
        sum += v.node(static_cast<long>(j)) * row[j];
    }
    sum += 0.5 * v.node(static_cast<long>(n)) * row[n];
    return v.delta * sum;
}

std::vector<double> moment_density(const DistributionField& f) {
    std::vector<double> n(static_cast<std::size_t>(f.nx()) + 1);
    for (int i = 0; i <= f.nx(); ++i) {
        n[static_cast<std::size_t>(i)] = trapezoid(f.row(i), f.grid().v.delta);
    }
    return n;
}

std::vector<double> moment_flux(const DistributionField& f) {
    std::vector<double> out(static_cast<std::size_t>(f.nx()) + 1);
    for (int i = 0; i <= f.nx(); ++i) {
        out[static_cast<std::size_t>(i)] = trapezoid_first(f.row(i), f.grid().v);
    }
    return out;
}

void moment_current(const DistributionField& f_i, const DistributionField& f_e,
                    std::span<double> out) {
    if (!(f_i.grid().x == f_e.grid().x)) {
        throw ConfigError("current needs both species on the same x-mesh");
    }
    for (int i = 0; i <= f_i.nx(); ++i) {
        out[static_cast<std::size_t>(i)] =
            trapezoid_first(f_i.row(i), f_i.grid().v) - trapezoid_first(f_e.row(i), f_e.grid().v);
    }
}

std::vector<double> moment_current(const DistributionField& f_i, const DistributionField& f_e) {
    std::vector<double> out(static_cast<std::size_t>(f_i.nx()) + 1);
    moment_current(f_i, f_e, out);
    return out;
}

GhostedArray ghosted_density(const DistributionField& f, const InflowCache& cache, long ghost) {
    GhostedArray out;
    out.ghost = ghost;
    const long nx = f.nx();
    out.values.resize(static_cast<std::size_t>(nx + 1 + 2 * ghost));
    std::vector<double> row(f.row_length());
    for (long i = -ghost; i <= nx + ghost; ++i) {
        if (i >= 0 && i <= nx) {
            out.values[static_cast<std::size_t>(i + ghost)] = trapezoid(f.row(i), f.grid().v.delta);
            continue;
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            row[j] = value_or_ghost(f, i, static_cast<long>(j), cache);
        }
        out.values[static_cast<std::size_t>(i + ghost)] = trapezoid(row, f.grid().v.delta);
    }
    return out;
}

namespace {

struct CellPosition {
    long cell;
    double alpha;
};

CellPosition locate(const Mesh1D& mesh, double x) {
    const double pos = (x - mesh.lo) / mesh.delta;
    long cell = static_cast<long>(std::floor(pos));
    cell = std::clamp<long>(cell, 0, mesh.n_cells - 1);
    return {cell, pos - static_cast<double>(cell)};
}

} // namespace

double reconstruct_density(const GhostedArray& n, const Mesh1D& x_mesh, double x, int d) {
    if (n.ghost < d || n.last() < x_mesh.n_cells + d) {
        throw ConfigError("density reconstruction needs d ghost nodes on each side");
    }
    const CellPosition at = locate(x_mesh, x);
    std::vector<double> w(static_cast<std::size_t>(2 * d + 2));
    lagrange_weights(d, at.alpha, w);
    double value = 0.0;
    for (int k = -d; k <= d + 1; ++k) {
        value += n.at(at.cell + k) * w[static_cast<std::size_t>(k + d)];
    }
    return value;
}

ChargePrimitive::ChargePrimitive(const GhostedArray& n_i, const GhostedArray& n_e,
                                 const Mesh1D& x_mesh, double eps, int d)
    : mesh_(x_mesh), inv_eps2_(1.0 / (eps * eps)), d_(d) {
    const long nx = x_mesh.n_cells;
    if (n_i.ghost < d || n_e.ghost < d || n_i.last() < nx + d || n_e.last() < nx + d) {
        throw ConfigError("density reconstruction needs d ghost nodes on each side");
    }
    rho_.ghost = d;
    rho_.values.resize(static_cast<std::size_t>(nx + 1 + 2 * d));
    for (long i = -d; i <= nx + d; ++i) {
        rho_.values[static_cast<std::size_t>(i + d)] = n_i.at(i) - n_e.at(i);
    }

    const LagrangeMoments moments = lagrange_moments(d);
    const double h = x_mesh.delta;
    node_values_.assign(static_cast<std::size_t>(nx) + 1, 0.0);
    double mean = 0.0;
    for (long c = 0; c < nx; ++c) {
        double cell_integral = 0.0;
        double cell_weighted = 0.0;
        for (int k = -d; k <= d + 1; ++k) {
            const double r = rho_.at(c + k);
            cell_integral += r * moments.integral[static_cast<std::size_t>(k + d)];
            cell_weighted += r * moments.weighted[static_cast<std::size_t>(k + d)];
        }
        const double p_c = node_values_[static_cast<std::size_t>(c)];
        mean += h * p_c + h * h * inv_eps2_ * cell_weighted;
        node_values_[static_cast<std::size_t>(c + 1)] = p_c + h * inv_eps2_ * cell_integral;
    }
    mean_ = mean;
}

double ChargePrimitive::operator()(double x) const {
    const CellPosition at = locate(mesh_, x);
    std::vector<double> partial(static_cast<std::size_t>(2 * d_ + 2));
    lagrange_partial_integrals(d_, at.alpha, partial);
    double inside = 0.0;
    for (int k = -d_; k <= d_ + 1; ++k) {
        inside += rho_.at(at.cell + k) * partial[static_cast<std::size_t>(k + d_)];
    }
    return node_values_[static_cast<std::size_t>(at.cell)] + mesh_.delta * inv_eps2_ * inside;
}

double ChargePrimitive::derivative(double x) const {
    return inv_eps2_ * reconstruct_density(rho_, mesh_, x, d_);
}

std::vector<double> init_electric_field(const GhostedArray& n_i, const GhostedArray& n_e,
                                        const Mesh1D& x_mesh, const PhysicalParams& p,
                                        double phi_w, int d) {
    const ChargePrimitive primitive(n_i, n_e, x_mesh, p.eps, d);
    std::vector<double> e(static_cast<std::size_t>(x_mesh.size()));
    for (long i = 0; i <= x_mesh.n_cells; ++i) {
        e[static_cast<std::size_t>(i)] = primitive.at_node(i) - phi_w - primitive.mean();
    }
    return e;
}

void ampere_update(std::span<double> efield, std::span<const double> j_old,
                   std::span<const double> j_new, double tau, const PhysicalParams& p) {
    const double factor = tau / (p.eps * p.eps);
    for (std::size_t i = 0; i < efield.size(); ++i) {
        efield[i] -= factor * 0.5 * (j_old[i] + j_new[i]);
    }
}

} // namespace sheath
