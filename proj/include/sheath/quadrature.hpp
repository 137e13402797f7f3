#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sheath {

struct QuadratureSpec {
    double rel_tol = 1e-13;
    unsigned max_depth = 30;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) over [a, b], split at the given interior
/// breakpoints (those outside (a, b) are ignored). Throws NumericalError
/// when the error estimate misses the tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureSpec& spec = {});

/// Gauss-Legendre rule with n points on [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre_unit(int n);

} // namespace sheath
