#include <doctest.h>

#include "oracles.hpp"
#include "sheath/errors.hpp"
#include "sheath/equilibrium.hpp"
#include "sheath/field_moments.hpp"

#include <cmath>
#include <numbers>

using namespace sheath;

namespace {

const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);

// Wall equation written out from the zero-current and normalisation relations.
double wall_equation(double phi, const oracle::Moments& m, const PhysicalParams& p) {
    const double tail = std::sqrt(std::numbers::pi / 2) * std::erfc(std::sqrt(-phi));
    return m.flux * (sqrt_2pi - tail) - std::exp(phi) * (m.density - p.rho0) / std::sqrt(p.mu);
}

double bisect(const oracle::Moments& m, const PhysicalParams& p) {
    double lo = -50.0;
    double hi = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (wall_equation(mid, m, p) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("ion inflow formula") {
    const PhysicalParams p;
    CHECK(ion_inflow(0.0, p) == 0.0);
    CHECK(ion_inflow(-1.0, p) == 0.0);
    const double sqrt_eta = std::sqrt(0.1);
    const double gaussian = std::exp(-0.5 * std::pow((sqrt_eta - 1.5) / 0.5, 2)) / std::sqrt(2 * std::numbers::pi * 0.25);
    CHECK(ion_inflow(sqrt_eta, p) == doctest::Approx(gaussian).epsilon(1e-15));
    CHECK(ion_inflow(1.5, p) == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi * 0.25)).epsilon(1e-15));
    // below the cutoff the v^2/eta factor applies
    CHECK(ion_inflow(0.1, p) == doctest::Approx(0.1 * oracle::inflow(0.1, p) / 0.1).epsilon(1e-15));
    for (int k = -100; k <= 1000; ++k) {
        const double v = 0.01 * k;
        CHECK(ion_inflow(v, p) >= 0.0);
        CHECK(ion_inflow(v, p) == doctest::Approx(oracle::inflow(v, p)).epsilon(1e-15));
    }
}

TEST_CASE("electron inflow normalisation") {
    const PhysicalParams p;
    const double n0 = 0.5;
    CHECK(electron_inflow(0.0, n0, p) == doctest::Approx(n0 * std::sqrt(2 * p.mu / std::numbers::pi)).epsilon(1e-15));
    CHECK(electron_inflow(-30.0, n0, p) == electron_inflow(30.0, n0, p));
}

TEST_CASE("moments of a zero inflow vanish") {
    const IonMoments m = ion_moments([](double) { return 0.0; }, 5.0, {});
    CHECK(m.density == 0.0);
    CHECK(m.flux == 0.0);
    CHECK(m.inv_v2 == 0.0);
}

TEST_CASE("inflow moments against Simpson at two refinements") {
    const PhysicalParams p;
    const IonMoments m = ion_moments(p);
    const auto coarse = oracle::moments(p, 20000);
    const auto fine = oracle::moments(p, 40000);
    CHECK(std::abs(coarse.flux - fine.flux) < 1e-12);
    CHECK(std::abs(m.density - fine.density) < 1e-12);
    CHECK(std::abs(m.flux - fine.flux) < 1e-12);
    CHECK(std::abs(m.inv_v2 - fine.inv_v2) < 1e-11);
    CHECK(m.density > 0.0);
    CHECK(m.flux > 0.0);
    CHECK(std::isfinite(m.inv_v2));
}

TEST_CASE("vanishing cutoff recovers the half-line Gaussian mass") {
    PhysicalParams p;
    p.eta = 1e-14;
    const IonMoments m = ion_moments(p);
    const double exact = 0.5 * std::erfc(-p.Z / (p.sigma * std::sqrt(2.0)));
    CHECK(m.density == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("closed-form Gaussian tail") {
    CHECK(gaussian_tail(0.0) == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-15));
    const double oracle_tail = oracle::simpson([](double v) { return std::exp(-0.5 * v * v); }, 2.0, 42.0, 200000);
    CHECK(gaussian_tail(-2.0) == doctest::Approx(oracle_tail).epsilon(1e-12));
}

TEST_CASE("wall potential") {
    const PhysicalParams p;
    const IonMoments m = ion_moments(p);
    const double phi_w = solve_wall_potential(m, p);
    CHECK(phi_w < 0.0);
    CHECK(std::abs(wall_residual(phi_w, m, p)) < 1e-12);

    const oracle::Moments om{m.density, m.flux, m.inv_v2};
    CHECK(std::abs(phi_w - bisect(om, p)) < 1e-10);
    CHECK(std::abs(wall_residual(phi_w, m, p) - wall_equation(phi_w, om, p)) < 1e-12);
}

TEST_CASE("wall residual changes sign exactly once") {
    const PhysicalParams p;
    const IonMoments m = ion_moments(p);
    int changes = 0;
    double prev = wall_residual(-50.0, m, p);
    for (int k = 1; k <= 5000; ++k) {
        const double phi = -50.0 + 0.01 * k;
        const double g = wall_residual(phi, m, p);
        CHECK(g <= prev + 1e-12);
        if ((g < 0.0) != (prev < 0.0)) {
            ++changes;
        }
        prev = g;
    }
    CHECK(changes == 1);
}

TEST_CASE("zero flux has no floating potential") {
    const PhysicalParams p;
    const IonMoments m{1.0, 0.0, 1.0};
    CHECK_THROWS_AS(solve_wall_potential(m, p), NoSolutionError);
}

TEST_CASE("electron normalisation") {
    const PhysicalParams p;
    const IonMoments m = ion_moments(p);
    SUBCASE("phi_w = 0 leaves the ion density") {
        CHECK(compute_n0(m, p, 0.0) == doctest::Approx(m.density - p.rho0).epsilon(1e-15));
        PhysicalParams q = p;
        q.rho0 = 0.25;
        CHECK(compute_n0(m, q, 0.0) == doctest::Approx(m.density - 0.25).epsilon(1e-15));
    }
    SUBCASE("zero-current identity") {
        const double phi_w = solve_wall_potential(m, p);
        const double n0 = compute_n0(m, p, phi_w);
        const double electron_flux = std::sqrt(2.0 / (std::numbers::pi * p.mu)) * n0 * std::exp(phi_w);
        CHECK(std::abs(m.flux - electron_flux) < 1e-10);
    }
}

TEST_CASE("kinetic Bohm criterion") {
    const PhysicalParams p;
    const IonMoments m = ion_moments(p);
    const double phi_w = solve_wall_potential(m, p);

    SUBCASE("holds for the reference inflow, matching the closed form") {
        const BohmCheck b = check_bohm_criterion(m, phi_w);
        CHECK(b.satisfied);
        CHECK(b.margin > 0.0);
        const double a = std::sqrt(-2.0 * phi_w);
        const double tail = std::sqrt(std::numbers::pi / 2) * std::erfc(a / std::sqrt(2.0));
        const double inv_sq = std::exp(-0.5 * a * a) / a - tail;
        CHECK(b.rhs == doctest::Approx((sqrt_2pi + inv_sq) / (sqrt_2pi - tail)).epsilon(1e-12));
        CHECK(b.lhs == doctest::Approx(m.inv_v2 / m.density).epsilon(1e-15));
    }
    SUBCASE("two quadrature tolerances agree") {
        const BohmCheck loose = check_bohm_criterion(m, phi_w, {1e-10, 30});
        const BohmCheck tight = check_bohm_criterion(m, phi_w, {1e-13, 30});
        CHECK(std::abs(loose.rhs - tight.rhs) < 1e-10);
    }
    SUBCASE("slow cold beam fails") {
        PhysicalParams cold;
        cold.Z = 0.1;
        cold.sigma = 0.05;
        cold.eta = 1e-4;
        const IonMoments mc = ion_moments(cold);
        const double pw = solve_wall_potential(mc, cold);
        CHECK_FALSE(check_bohm_criterion(mc, pw).satisfied);
        CHECK_THROWS_AS(solve_equilibrium(cold, 64), NoSolutionError);
    }
    SUBCASE("margin is continuous in phi_w") {
        const double m1 = check_bohm_criterion(m, phi_w).margin;
        const double m2 = check_bohm_criterion(m, phi_w + 1e-6).margin;
        CHECK(std::abs(m1 - m2) < 1e-4);
    }
}

TEST_CASE("sheath charge against quadrature oracles") {
    const PhysicalParams p;
    const IonMoments m = ion_moments(p);
    const double phi_w = solve_wall_potential(m, p);
    const double n0 = compute_n0(m, p, phi_w);
    const SheathCharge charge(p, phi_w, n0);
    for (double phi : {0.0, -0.3, -1.0, -2.0, phi_w}) {
        CHECK(charge.ion_density(phi) == doctest::Approx(oracle::ion_density(phi, p, 40000)).epsilon(1e-10));
        CHECK(charge.electron_density(phi) ==
              doctest::Approx(oracle::electron_density(phi, phi_w, n0, p, 400000)).epsilon(1e-10));
    }
    CHECK(charge.ion_density(0.0) == doctest::Approx(m.density).epsilon(1e-13));
    // the charge vanishes at the entrance when rho0 = 0
    CHECK(std::abs(charge.charge(0.0)) < 1e-12);
    // derivatives by central differences
    for (double phi : {-0.2, -1.0, -2.5}) {
        const double h = 1e-5;
        const double fd_i = (charge.ion_density(phi + h) - charge.ion_density(phi - h)) / (2 * h);
        const double fd_e = (charge.electron_density(phi + h) - charge.electron_density(phi - h)) / (2 * h);
        CHECK(charge.ion_density_derivative(phi) == doctest::Approx(fd_i).epsilon(1e-7));
        CHECK(charge.electron_density_derivative(phi) == doctest::Approx(fd_e).epsilon(1e-7));
    }
}

TEST_CASE("charge keeps relative accuracy near the entrance") {
    const PhysicalParams p;
    const IonMoments m = ion_moments(p);
    const double phi_w = solve_wall_potential(m, p);
    const SheathCharge charge(p, phi_w, compute_n0(m, p, phi_w));
    CHECK(charge.charge(0.0) == 0.0);
    const double slope = charge.charge_derivative(0.0);
    for (double phi : {-1e-10, -1e-14, -1e-18}) {
        CHECK(charge.charge(phi) / phi == doctest::Approx(slope).epsilon(1e-5));
    }
    for (double phi : {-0.05, -0.3, -1.0, -2.0, phi_w}) {
        CHECK(charge.charge(phi) ==
              doctest::Approx(charge.ion_density(phi) - charge.electron_density(phi)).epsilon(1e-12).scale(1.0));
    }

    PhysicalParams q = p;
    q.rho0 = 0.02;
    const IonMoments mq = ion_moments(q);
    const double wq = solve_wall_potential(mq, q);
    const SheathCharge cq(q, wq, compute_n0(mq, q, wq));
    CHECK(cq.charge(0.0) == 0.02);
    CHECK(cq.charge(-0.7) == doctest::Approx(cq.ion_density(-0.7) - cq.electron_density(-0.7)).epsilon(1e-12));
}

TEST_CASE("potential is strictly non-increasing on the reference grid") {
    const EquilibriumSolution eq = solve_equilibrium(PhysicalParams{}, 2048);
    CHECK(eq.monotone);
    for (std::size_t k = 1; k < eq.phi.size(); ++k) {
        REQUIRE(eq.phi[k] <= eq.phi[k - 1]);
    }
}

TEST_CASE("nonlinear Poisson solve") {
    const PhysicalParams p;
    const int n = 256;
    const EquilibriumSolution eq = solve_equilibrium(p, n);
    REQUIRE(eq.phi.size() == static_cast<std::size_t>(n + 1));
    CHECK(eq.phi[0] == 0.0);
    CHECK(eq.phi[n] == eq.phi_w);
    CHECK(eq.monotone);
    for (int k = 0; k < n; ++k) {
        CHECK(eq.phi[static_cast<std::size_t>(k + 1)] <= eq.phi[static_cast<std::size_t>(k)]);
    }
    CHECK(eq.residual < 1e-8);

    // Residual evaluated with oracle charge densities.
    const double h = 1.0 / n;
    double worst = 0.0;
    for (int k = 1; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double lap = (eq.phi[i + 1] - 2 * eq.phi[i] + eq.phi[i - 1]) / (h * h);
        const double rho = oracle::ion_density(eq.phi[i], p, 4000) -
                           oracle::electron_density(eq.phi[i], eq.phi_w, eq.n0, p, 40000);
        worst = std::max(worst, std::abs(-p.eps * p.eps * lap - rho));
    }
    CHECK(worst < 1e-8);

    // E = -phi' from second-order differences
    CHECK(eq.efield[n / 2] == doctest::Approx(-(eq.phi[n / 2 + 1] - eq.phi[n / 2 - 1]) / (2 * h)).epsilon(1e-12));
}

TEST_CASE("potential between nodes") {
    EquilibriumSolution eq;
    eq.grid_n = 8;
    eq.phi.resize(9);
    for (int k = 0; k <= 8; ++k) {
        const double x = k / 8.0;
        eq.phi[static_cast<std::size_t>(k)] = -x * x * x + 0.5 * x * x - 2 * x;
    }
    for (double x : {0.0, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0}) {
        CHECK(eq.potential(x) == doctest::Approx(-x * x * x + 0.5 * x * x - 2 * x).epsilon(1e-13).scale(1.0));
    }
    CHECK(eq.potential(0.25) == eq.phi[2]);
}

TEST_CASE("stationary distributions") {
    const PhysicalParams p;
    EquilibriumSolution eq;
    eq.grid_n = 2;
    eq.phi = {0.0, -0.5, -1.0};
    eq.phi_w = -1.0;
    eq.n0 = 0.5;

    SUBCASE("ions") {
        CHECK(eval_equilibrium_ion(0.0, 1.2, eq, p) == ion_inflow(1.2, p));
        CHECK(eval_equilibrium_ion(0.0, -0.3, eq, p) == 0.0);
        CHECK(eval_equilibrium_ion(0.5, 1.0, eq, p) == 0.0);
        CHECK(eval_equilibrium_ion(0.5, 0.9, eq, p) == 0.0);
        CHECK(eval_equilibrium_ion(0.5, 2.0, eq, p) == doctest::Approx(ion_inflow(std::sqrt(3.0), p)).epsilon(1e-15));
    }
    SUBCASE("electrons") {
        const double cut0 = -std::sqrt(2.0 / p.mu);
        const double maxwell = 0.5 * std::sqrt(2 * p.mu / std::numbers::pi) * std::exp(-0.5 * p.mu * 10.0 * 10.0);
        CHECK(eval_equilibrium_electron(0.0, 10.0, eq, p) == doctest::Approx(maxwell).epsilon(1e-14));
        CHECK(eval_equilibrium_electron(0.0, cut0 + 1e-9, eq, p) > 0.0);
        CHECK(eval_equilibrium_electron(0.0, cut0 - 1e-9, eq, p) == 0.0);
        CHECK(eval_equilibrium_electron(1.0, 0.0, eq, p) > 0.0);
        CHECK(eval_equilibrium_electron(1.0, -1e-12, eq, p) == 0.0);
        // Boltzmann factor exp(phi) at x = 0.5
        const double mid = 0.5 * std::sqrt(2 * p.mu / std::numbers::pi) * std::exp(-0.5 * p.mu * 4.0 - 0.5);
        CHECK(eval_equilibrium_electron(0.5, 2.0, eq, p) == doctest::Approx(mid).epsilon(1e-14));
    }
}
