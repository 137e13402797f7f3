#include "sheath/equilibrium.hpp"

#include "sheath/errors.hpp"
#include "sheath/interp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

namespace sheath {

namespace {

constexpr double sqrt_2pi = 2.5066282746310002; // sqrt(2 pi)
constexpr double sqrt_pi_2 = 1.2533141373155003; // sqrt(pi / 2)

// Tail integrals are truncated 40 units past their lower limit: exp(-800) underflows.
constexpr double tail_length = 40.0;

std::array<double, 3> inflow_breakpoints(const PhysicalParams& p) {
    return {std::sqrt(p.eta), p.Z, p.Z + p.sigma};
}

double inflow_upper_bound(const PhysicalParams& p) { return std::max(p.Z, 0.0) + 10.0 * p.sigma; }

} // namespace

double ion_inflow(double v, const PhysicalParams& p) {
    if (!(v > 0.0)) {
        return 0.0;
    }
    const double cutoff = std::min(1.0, v * v / p.eta);
    const double u = (v - p.Z) / p.sigma;
    return cutoff * std::exp(-0.5 * u * u) / (p.sigma * sqrt_2pi);
}

double electron_inflow(double v, double n0, const PhysicalParams& p) {
    return n0 * std::sqrt(2.0 * p.mu / std::numbers::pi) * std::exp(-0.5 * p.mu * v * v);
}

IonMoments ion_moments(const std::function<double(double)>& inflow, double v_hi,
                       std::span<const double> breakpoints, const QuadratureSpec& quad) {
    IonMoments m;
    m.density = integrate(inflow, 0.0, v_hi, breakpoints, quad).value;
    m.flux = integrate([&](double v) { return v * inflow(v); }, 0.0, v_hi, breakpoints, quad).value;
    m.inv_v2 = integrate(
                   [&](double v) {
                       const double f = inflow(v);
                       return f == 0.0 ? 0.0 : f / (v * v);
                   },
                   0.0, v_hi, breakpoints, quad)
                   .value;
    return m;
}

IonMoments ion_moments(const PhysicalParams& p, const QuadratureSpec& quad) {
    const auto cuts = inflow_breakpoints(p);
    return ion_moments([&p](double v) { return ion_inflow(v, p); }, inflow_upper_bound(p), cuts,
                       quad);
}

double gaussian_tail(double phi) { return sqrt_pi_2 * std::erfc(std::sqrt(-phi)); }

double wall_residual(double phi_w, const IonMoments& m, const PhysicalParams& p) {
    return m.flux * (sqrt_2pi - gaussian_tail(phi_w)) -
           std::exp(phi_w) * (m.density - p.rho0) / std::sqrt(p.mu);
}

double solve_wall_potential(const IonMoments& m, const PhysicalParams& p) {
    const double net_density = m.density - p.rho0;
    if (!(net_density > 0.0) || !(m.flux > 0.0)) {
        throw NoSolutionError("zero-current wall equation has no root: flux = " +
                              std::to_string(m.flux) +
                              ", density - rho0 = " + std::to_string(net_density));
    }
    if (m.flux / net_density > std::sqrt(2.0 / (p.mu * std::numbers::pi))) {
        throw NoSolutionError("solvability condition flux / (density - rho0) <= sqrt(2 / (mu pi)) "
                              "violated");
    }

    double lo = -50.0; // residual > 0
    double hi = 0.0;   // residual <= 0
    double f_lo = wall_residual(lo, m, p);
    double f_hi = wall_residual(hi, m, p);
    if (f_hi == 0.0) {
        return hi;
    }
    if (!(f_lo > 0.0)) {
        throw NoSolutionError("wall potential lies below -50");
    }

    // Secant steps inside the bracket, with a bisection whenever the
    // bracket fails to halve over two iterations.
    double width_before = hi - lo;
    for (int iter = 0; iter < 200; ++iter) {
        double x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if (!(x > lo && x < hi)) {
            x = 0.5 * (lo + hi);
        }
        if (iter % 2 == 1) {
            if (hi - lo > 0.5 * width_before) {
                x = 0.5 * (lo + hi);
            }
            width_before = hi - lo;
        }
        const double fx = wall_residual(x, m, p);
        if (fx == 0.0) {
            return x;
        }
        if (fx > 0.0) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi + lo)) {
            return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
        }
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "wall potential iteration did not converge; bracket [" << lo << ", " << hi
        << "] with residuals " << f_lo << ", " << f_hi;
    throw NumericalError(msg.str());
}

double compute_n0(const IonMoments& m, const PhysicalParams& p, double phi_w) {
    if (phi_w > 0.0) {
        throw ConfigError("wall potential must be non-positive");
    }
    const double denom = sqrt_2pi - gaussian_tail(phi_w);
    const double n0 = sqrt_pi_2 * (m.density - p.rho0) / denom;
    if (!(denom > 0.0) || !(n0 > 0.0)) {
        throw ConfigError("electron density parameter is not positive");
    }
    return n0;
}

BohmCheck check_bohm_criterion(const IonMoments& m, double phi_w, const QuadratureSpec& quad) {
    if (phi_w > 0.0) {
        throw ConfigError("wall potential must be non-positive");
    }
    BohmCheck out;
    out.lhs = m.inv_v2 / m.density;
    const double a = std::sqrt(-2.0 * phi_w);
    if (a == 0.0) {
        out.rhs = std::numeric_limits<double>::infinity();
    } else {
        const double inv_sq =
            integrate([](double v) { return std::exp(-0.5 * v * v) / (v * v); }, a, a + tail_length,
                      {}, quad)
                .value;
        const double tail =
            integrate([](double v) { return std::exp(-0.5 * v * v); }, a, a + tail_length, {}, quad)
                .value;
        out.rhs = (sqrt_2pi + inv_sq) / (sqrt_2pi - tail);
    }
    out.margin = out.rhs - out.lhs;
    out.satisfied = out.lhs < out.rhs;
    return out;
}

SheathCharge::SheathCharge(const PhysicalParams& p, double phi_w, double n0,
                           const QuadratureSpec& quad)
    : p_(p), phi_w_(phi_w), n0_(n0), quad_(quad), v_hi_(inflow_upper_bound(p)) {}

double SheathCharge::ion_density(double phi) const {
    const auto cuts = inflow_breakpoints(p_);
    return integrate(
               [&](double w) {
                   const double f = ion_inflow(w, p_);
                   return f == 0.0 ? 0.0 : f * w / std::sqrt(w * w - 2.0 * phi);
               },
               0.0, v_hi_, cuts, quad_)
        .value;
}

double SheathCharge::ion_density_derivative(double phi) const {
    const auto cuts = inflow_breakpoints(p_);
    return integrate(
               [&](double w) {
                   const double f = ion_inflow(w, p_);
                   if (f == 0.0) {
                       return 0.0;
                   }
                   const double r = w * w - 2.0 * phi;
                   return f * w / (r * std::sqrt(r));
               },
               0.0, v_hi_, cuts, quad_)
        .value;
}

double SheathCharge::electron_density(double phi) const {
    const double s = std::sqrt(std::max(0.0, phi - phi_w_));
    return n0_ * std::exp(phi) * (1.0 + std::erf(s));
}

double SheathCharge::electron_density_derivative(double phi) const {
    const double s = std::max(std::sqrt(std::max(0.0, phi - phi_w_)), 1e-8);
    const double e = std::exp(phi);
    return n0_ * e * (1.0 + std::erf(s)) + n0_ * e * std::exp(-s * s) / (std::sqrt(std::numbers::pi) * s);
}

double SheathCharge::charge(double phi) const {
    if (phi == 0.0) {
        return p_.rho0;
    }
    // n_i(phi) - n_i(0), with w/sqrt(w^2 - 2 phi) - 1 = 2 phi / (sqrt(r) (w + sqrt(r))).
    const auto cuts = inflow_breakpoints(p_);
    const double d_ion = integrate(
                             [&](double w) {
                                 const double f = ion_inflow(w, p_);
                                 if (f == 0.0) {
                                     return 0.0;
                                 }
                                 const double root = std::sqrt(w * w - 2.0 * phi);
                                 return f * 2.0 * phi / (root * (w + root));
                             },
                             0.0, v_hi_, cuts, quad_)
                             .value;

    // n_e(phi) - n_e(0) = n0 [expm1(phi) (1 + erf a) + erf a - erf b].
    const double a = std::sqrt(std::max(0.0, phi - phi_w_));
    const double b = std::sqrt(-phi_w_);
    double d_erf = 0.0;
    if (std::abs(a - b) < 0.1) {
        static const GaussRule rule = gauss_legendre_unit(12);
        const double width = a + b > 0.0 ? phi / (a + b) : a - b; // a^2 - b^2 = phi
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double t = b + width * rule.nodes[k];
            d_erf += rule.weights[k] * std::exp(-t * t);
        }
        d_erf *= width * 2.0 / std::sqrt(std::numbers::pi);
    } else {
        d_erf = std::erf(a) - std::erf(b);
    }
    const double d_electron = n0_ * (std::expm1(phi) * (1.0 + std::erf(a)) + d_erf);
    return p_.rho0 + d_ion - d_electron;
}

double EquilibriumSolution::potential(double x) const {
    const int n = grid_n;
    const double pos = std::clamp(x, 0.0, 1.0) * n;
    const double nearest = std::round(pos);
    if (pos == nearest) {
        return phi[static_cast<std::size_t>(nearest)];
    }
    const long cell = static_cast<long>(std::floor(pos));
    const long start = std::clamp<long>(cell - 1, 0, n - 3);
    std::array<double, 4> w{};
    lagrange_weights(1, pos - static_cast<double>(start + 1), w);
    double value = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        value += w[k] * phi[static_cast<std::size_t>(start) + k];
    }
    return value;
}

double poisson_residual(std::span<const double> phi, const SheathCharge& charge, double eps) {
    const std::size_t n = phi.size() - 1;
    const double h = 1.0 / static_cast<double>(n);
    const double scale = eps * eps / (h * h);
    double worst = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double r = -scale * (phi[k + 1] - 2.0 * phi[k] + phi[k - 1]) - charge.charge(phi[k]);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

namespace {

// Solves the tridiagonal system (lower, diag, upper) in place into rhs.
void solve_tridiagonal(double off, std::vector<double> diag, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = off / diag[i - 1];
        diag[i] -= m * off;
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - off * rhs[i + 1]) / diag[i];
    }
}

struct ResidualEval {
    std::vector<double> values; // interior entries 1..n-1 stored at 0..n-2
    double norm = 0.0;
};

ResidualEval evaluate_residual(const std::vector<double>& phi, const std::vector<double>& rho,
                               double scale) {
    const std::size_t n = phi.size() - 1;
    ResidualEval r;
    r.values.resize(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        const double v = -scale * (phi[k + 1] - 2.0 * phi[k] + phi[k - 1]) - rho[k];
        r.values[k - 1] = v;
        r.norm = std::max(r.norm, std::abs(v));
    }
    return r;
}

std::vector<double> charge_at(const std::vector<double>& phi, const SheathCharge& charge) {
    std::vector<double> rho(phi.size(), 0.0);
    for (std::size_t k = 1; k + 1 < phi.size(); ++k) {
        rho[k] = charge.charge(phi[k]);
    }
    return rho;
}

} // namespace

EquilibriumSolution solve_sheath_potential(const IonMoments& /*m*/, const PhysicalParams& p,
                                           double phi_w, double n0, int grid_n,
                                           const QuadratureSpec& quad) {
    if (grid_n < 3) {
        throw ConfigError("equilibrium grid needs at least 3 cells");
    }
    const SheathCharge charge(p, phi_w, n0, quad);
    const auto n = static_cast<std::size_t>(grid_n);
    const double h = 1.0 / grid_n;
    const double scale = p.eps * p.eps / (h * h);
    constexpr double target = 1e-11;
    constexpr double accept = 1e-8;

    std::vector<double> phi(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        phi[k] = phi_w * static_cast<double>(k) * h;
    }
    phi[n] = phi_w;

    auto project = [phi_w](double v) { return std::clamp(v, phi_w, 0.0); };

    std::vector<double> rho = charge_at(phi, charge);
    ResidualEval res = evaluate_residual(phi, rho, scale);
    int iter = 0;
    for (; iter < 200 && res.norm > target; ++iter) {
        std::vector<double> diag(n - 1);
        for (std::size_t k = 1; k < n; ++k) {
            diag[k - 1] = 2.0 * scale - charge.charge_derivative(phi[k]);
        }
        std::vector<double> step(res.values.size());
        for (std::size_t k = 0; k < step.size(); ++k) {
            step[k] = -res.values[k];
        }
        solve_tridiagonal(-scale, diag, step);

        bool accepted = false;
        double lambda = 1.0;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            std::vector<double> trial = phi;
            for (std::size_t k = 1; k < n; ++k) {
                trial[k] = project(phi[k] + lambda * step[k - 1]);
            }
            std::vector<double> trial_rho = charge_at(trial, charge);
            ResidualEval trial_res = evaluate_residual(trial, trial_rho, scale);
            if (trial_res.norm < (1.0 - 1e-4 * lambda) * res.norm) {
                phi = std::move(trial);
                rho = std::move(trial_rho);
                res = std::move(trial_res);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Relaxed fixed point: phi <- phi + 0.1 (L^{-1} rho(phi) - phi).
            std::vector<double> target_phi(n - 1);
            for (std::size_t k = 1; k < n; ++k) {
                target_phi[k - 1] = rho[k];
            }
            target_phi[n - 2] += scale * phi_w;
            solve_tridiagonal(-scale, std::vector<double>(n - 1, 2.0 * scale), target_phi);
            for (std::size_t k = 1; k < n; ++k) {
                phi[k] = project(phi[k] + 0.1 * (target_phi[k - 1] - phi[k]));
            }
            rho = charge_at(phi, charge);
            const double before = res.norm;
            res = evaluate_residual(phi, rho, scale);
            if (!(res.norm < before)) {
                break;
            }
        }
    }
    // Polish with undamped Newton steps while they still help: in the flat bulk the potential
    // error is the residual divided by the small charge slope, enough to break monotonicity.
    for (int polish = 0; polish < 8 && res.norm < accept && res.norm > 0.0; ++polish) {
        std::vector<double> diag(n - 1);
        for (std::size_t k = 1; k < n; ++k) {
            diag[k - 1] = 2.0 * scale - charge.charge_derivative(phi[k]);
        }
        std::vector<double> step(res.values.size());
        for (std::size_t k = 0; k < step.size(); ++k) {
            step[k] = -res.values[k];
        }
        solve_tridiagonal(-scale, diag, step);
        std::vector<double> trial = phi;
        for (std::size_t k = 1; k < n; ++k) {
            trial[k] = project(phi[k] + step[k - 1]);
        }
        std::vector<double> trial_rho = charge_at(trial, charge);
        ResidualEval trial_res = evaluate_residual(trial, trial_rho, scale);
        if (!(trial_res.norm < res.norm)) {
            break;
        }
        phi = std::move(trial);
        rho = std::move(trial_rho);
        res = std::move(trial_res);
        ++iter;
    }
    if (!(res.norm < accept)) {
        std::ostringstream msg;
        msg << "nonlinear Poisson iteration stalled after " << iter << " iterations, residual "
            << res.norm;
        throw NumericalError(msg.str());
    }

    EquilibriumSolution eq;
    eq.phi = std::move(phi);
    eq.phi_w = phi_w;
    eq.n0 = n0;
    eq.grid_n = grid_n;
    eq.residual = res.norm;
    eq.iterations = iter;
    eq.efield.resize(n + 1);
    const auto& u = eq.phi;
    eq.efield[0] = -(-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    for (std::size_t k = 1; k < n; ++k) {
        eq.efield[k] = -(u[k + 1] - u[k - 1]) / (2.0 * h);
    }
    eq.efield[n] = -(3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h);
    for (std::size_t k = 0; k < n; ++k) {
        if (u[k + 1] > u[k]) {
            eq.monotone = false;
        }
    }
    if (!eq.monotone) {
        std::clog << "warning: sheath potential is not monotone non-increasing\n";
    }
    return eq;
}

EquilibriumSolution solve_equilibrium(const PhysicalParams& p, int grid_n,
                                      const QuadratureSpec& quad) {
    p.validate();
    const IonMoments m = ion_moments(p, quad);
    const double phi_w = solve_wall_potential(m, p);
    const double n0 = compute_n0(m, p, phi_w);
    const BohmCheck bohm = check_bohm_criterion(m, phi_w, quad);
    if (!bohm.satisfied) {
        std::ostringstream msg;
        msg << "kinetic Bohm criterion fails: " << bohm.lhs << " >= " << bohm.rhs;
        throw NoSolutionError(msg.str());
    }
    return solve_sheath_potential(m, p, phi_w, n0, grid_n, quad);
}

double eval_equilibrium_ion(double x, double v, const EquilibriumSolution& eq,
                            const PhysicalParams& p) {
    const double phi = std::min(eq.potential(x), 0.0);
    if (!(v > std::sqrt(-2.0 * phi))) {
        return 0.0;
    }
    return ion_inflow(std::sqrt(v * v + 2.0 * phi), p);
}

double eval_equilibrium_electron(double x, double v, const EquilibriumSolution& eq,
                                 const PhysicalParams& p) {
    const double phi = std::min(eq.potential(x), 0.0);
    const double cutoff = -std::sqrt(std::max(0.0, 2.0 / p.mu * (phi - eq.phi_w)));
    if (!(v >= cutoff)) {
        return 0.0;
    }
    return electron_inflow(std::sqrt(v * v - 2.0 / p.mu * phi), eq.n0, p);
}

} // namespace sheath
