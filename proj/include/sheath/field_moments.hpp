#pragma once

// Velocity moments, the initial electric field and the Ampere update.

#include "sheath/boundary.hpp"
#include "sheath/mesh.hpp"

#include <span>
#include <vector>

namespace sheath {

/// Trapezoid rule on a velocity row with spacing dv.
double trapezoid(std::span<const double> row, double dv);

/// Trapezoid of v_j * row[j].
double trapezoid_first(std::span<const double> row, const Mesh1D& v);

/// n[i] = int f(x_i, v) dv, per x-node.
std::vector<double> moment_density(const DistributionField& f);

/// int v f(x_i, v) dv, per x-node.
std::vector<double> moment_flux(const DistributionField& f);

/// J[i] = int v f_i dv - int v f_e dv, each on its species' own velocity mesh.
std::vector<double> moment_current(const DistributionField& f_i, const DistributionField& f_e);
void moment_current(const DistributionField& f_i, const DistributionField& f_e, std::span<double> out);

/// Node values on -ghost .. n + ghost.
struct GhostedArray {
    long ghost = 0;
    std::vector<double> values;

    double at(long i) const { return values[static_cast<std::size_t>(i + ghost)]; }
    long last() const { return static_cast<long>(values.size()) - ghost - 1; }
};

/// Density at every node plus `ghost` nodes on each side; ghost densities
/// integrate the ghost distribution values.
GhostedArray ghosted_density(const DistributionField& f, const InflowCache& cache, long ghost);

/// Centred Lagrange reconstruction of degree 2d+1 at x in [0, 1].
double reconstruct_density(const GhostedArray& n, const Mesh1D& x_mesh, double x, int d);

/// P(x) = int_0^x rho_h / eps^2 with rho_h the piecewise reconstruction of
/// n_i - n_e, integrated exactly cell by cell.
class ChargePrimitive {
  public:
    ChargePrimitive(const GhostedArray& n_i, const GhostedArray& n_e, const Mesh1D& x_mesh,
                    double eps, int d);

    /// P at node i.
    double at_node(long i) const { return node_values_[static_cast<std::size_t>(i)]; }
    /// P at any x in [0, 1].
    double operator()(double x) const;
    /// rho_h(x) / eps^2, the exact derivative of P.
    double derivative(double x) const;
    /// int_0^1 P.
    double mean() const noexcept { return mean_; }

  private:
    GhostedArray rho_;
    Mesh1D mesh_;
    double inv_eps2_;
    int d_;
    std::vector<double> node_values_;
    double mean_ = 0.0;
};

/// E(x_i) = P(x_i) - phi_w - int_0^1 P, so that eps^2 E' = n_i - n_e and int_0^1 E = -phi_w.
/// Both densities need d ghost nodes on each side.
std::vector<double> init_electric_field(const GhostedArray& n_i, const GhostedArray& n_e,
                                        const Mesh1D& x_mesh, const PhysicalParams& p,
                                        double phi_w, int d);

/// Crank-Nicolson step of eps^2 dE/dt = -J: E -= tau (J_old + J_new) / (2 eps^2).
void ampere_update(std::span<double> efield, std::span<const double> j_old,
                   std::span<const double> j_new, double tau, const PhysicalParams& p);

} // namespace sheath
