#include <doctest.h>

#include "sheath/errors.hpp"
#include "sheath/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace sheath;

TEST_CASE("adaptive rule on closed-form integrals") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0).value == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 40.0).value ==
          doctest::Approx(1.0 - std::exp(-40.0)).epsilon(1e-13));
    // int_0^inf exp(-v^2/2) truncated at 40: sqrt(pi/2) erf(40/sqrt 2).
    const double gauss = integrate([](double v) { return std::exp(-0.5 * v * v); }, 0.0, 40.0).value;
    CHECK(gauss == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-13));
}

TEST_CASE("kink handled through breakpoints") {
    auto f = [](double x) { return std::abs(x - 0.3); };
    const std::vector<double> bp{0.3};
    const double exact = 0.5 * 0.09 + 0.5 * 0.49;
    CHECK(integrate(f, 0.0, 1.0, bp).value == doctest::Approx(exact).epsilon(1e-14));
    // Out-of-range breakpoints are ignored.
    const std::vector<double> outside{-1.0, 2.0};
    CHECK(integrate([](double x) { return x; }, 0.0, 1.0, outside).value == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("integrable endpoint singularity converges") {
    // int_0^1 x^{-1/2} = 2
    const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {}, {1e-10, 40});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("divergent integral reports failure") {
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, {}, {1e-13, 12}), NumericalError);
}

TEST_CASE("Gauss-Legendre on the unit interval") {
    for (int n : {1, 2, 5, 10}) {
        const GaussRule g = gauss_legendre_unit(n);
        REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
        double wsum = 0.0;
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
            CHECK(g.nodes[k] > 0.0);
            CHECK(g.nodes[k] < 1.0);
            wsum += g.weights[k];
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
        // exact for degree 2n - 1: int_0^1 x^m = 1/(m+1)
        for (int m = 0; m <= 2 * n - 1; ++m) {
            double acc = 0.0;
            for (std::size_t k = 0; k < g.nodes.size(); ++k) {
                acc += g.weights[k] * std::pow(g.nodes[k], m);
            }
            CHECK(acc == doctest::Approx(1.0 / (m + 1)).epsilon(1e-14));
        }
    }
}
