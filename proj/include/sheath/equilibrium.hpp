#pragma once

// Stationary sheath: floating wall potential, electron normalisation,
// kinetic Bohm check, nonlinear Poisson solve and the stationary
// distributions obtained along characteristics.

#include "sheath/mesh.hpp"
#include "sheath/quadrature.hpp"

#include <functional>
#include <span>
#include <vector>

namespace sheath {

/// Incoming ion distribution at x = 0:
/// 1{v>0} min(1, v^2/eta) exp(-(v-Z)^2 / (2 sigma^2)) / sqrt(2 pi sigma^2).
double ion_inflow(double v, const PhysicalParams& p);

/// Incoming electron Maxwellian n0 sqrt(2 mu / pi) exp(-mu v^2 / 2), without the v > 0 indicator.
double electron_inflow(double v, double n0, const PhysicalParams& p);

struct IonMoments {
    double density = 0.0; ///< int_0^inf f
    double flux = 0.0;    ///< int_0^inf v f
    double inv_v2 = 0.0;  ///< int_0^inf f / v^2
};

/// Moments of the parametric ion inflow on [0, Z + 10 sigma].
IonMoments ion_moments(const PhysicalParams& p, const QuadratureSpec& quad = {});

/// Moments of an arbitrary inflow on [0, v_hi], split at the breakpoints.
IonMoments ion_moments(const std::function<double(double)>& inflow, double v_hi,
                       std::span<const double> breakpoints, const QuadratureSpec& quad = {});

/// int_{sqrt(-2 phi)}^inf exp(-v^2/2) dv in closed form, phi <= 0.
double gaussian_tail(double phi);

/// Zero-current wall equation, decreasing in phi_w; its root is the floating potential:
/// flux (sqrt(2 pi) - tail(phi_w)) - exp(phi_w) (density - rho0) / sqrt(mu).
double wall_residual(double phi_w, const IonMoments& m, const PhysicalParams& p);

/// Floating potential by bracketed bisection/secant on [-50, 0].
/// Throws NoSolutionError when the solvability condition fails.
double solve_wall_potential(const IonMoments& m, const PhysicalParams& p);

double compute_n0(const IonMoments& m, const PhysicalParams& p, double phi_w);

struct BohmCheck {
    bool satisfied = false;
    double lhs = 0.0;    ///< inv_v2 / density
    double rhs = 0.0;    ///< electron side, computed by adaptive quadrature
    double margin = 0.0; ///< rhs - lhs
};

BohmCheck check_bohm_criterion(const IonMoments& m, double phi_w, const QuadratureSpec& quad = {});

/// Charge density of the stationary sheath as a function of the local potential.
class SheathCharge {
  public:
    SheathCharge(const PhysicalParams& p, double phi_w, double n0, const QuadratureSpec& quad = {});

    double ion_density(double phi) const;
    double ion_density_derivative(double phi) const;
    double electron_density(double phi) const;
    double electron_density_derivative(double phi) const;

    /// rho0 plus the change of each density from its value at phi = 0, so that small phi
    /// gives a charge with full relative accuracy instead of a difference of O(1) numbers.
    double charge(double phi) const;
    double charge_derivative(double phi) const {
        return ion_density_derivative(phi) - electron_density_derivative(phi);
    }

    double phi_w() const noexcept { return phi_w_; }
    double n0() const noexcept { return n0_; }

  private:
    PhysicalParams p_;
    double phi_w_;
    double n0_;
    QuadratureSpec quad_;
    double v_hi_;
};

struct EquilibriumSolution {
    std::vector<double> phi;    ///< potential at x_j = j / grid_n
    std::vector<double> efield; ///< -dphi/dx, second-order differences
    double phi_w = 0.0;
    double n0 = 0.0;
    int grid_n = 0;

    double residual = 0.0; ///< max-norm of the discrete nonlinear residual
    int iterations = 0;
    bool monotone = true;

    /// Potential at any x in [0, 1] by local cubic Lagrange interpolation.
    double potential(double x) const;
};

/// Max-norm of -eps^2 phi'' - rho(phi) at the interior nodes.
double poisson_residual(std::span<const double> phi, const SheathCharge& charge, double eps);

/// Damped Newton solve of the discretised nonlinear Poisson problem on
/// grid_n cells with phi(0) = 0 and phi(1) = phi_w.
EquilibriumSolution solve_sheath_potential(const IonMoments& m, const PhysicalParams& p,
                                           double phi_w, double n0, int grid_n,
                                           const QuadratureSpec& quad = {});

/// Whole pipeline: moments, wall potential, n0, Bohm check, Poisson.
EquilibriumSolution solve_equilibrium(const PhysicalParams& p, int grid_n,
                                      const QuadratureSpec& quad = {});

double eval_equilibrium_ion(double x, double v, const EquilibriumSolution& eq,
                            const PhysicalParams& p);
double eval_equilibrium_electron(double x, double v, const EquilibriumSolution& eq,
                                 const PhysicalParams& p);

} // namespace sheath
