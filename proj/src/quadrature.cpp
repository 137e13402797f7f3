#include "sheath/quadrature.hpp"

#include "sheath/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

namespace sheath {

namespace {

// Kronrod 15-point abscissae on [-1, 1] (non-negative half) and weights;
// the odd-indexed abscissae are the 7-point Gauss nodes.
constexpr std::array<double, 8> kronrod_x{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kronrod_w{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> gauss_w{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    double l1;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod_panel(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(mid);
    double kronrod = fc * kronrod_w[7];
    double gauss = fc * gauss_w[3];
    double l1 = std::abs(fc) * kronrod_w[7];
    for (std::size_t k = 0; k < 7; ++k) {
        const double dx = half * kronrod_x[k];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        kronrod += kronrod_w[k] * (f1 + f2);
        l1 += kronrod_w[k] * (std::abs(f1) + std::abs(f2));
        if (k % 2 == 1) {
            gauss += gauss_w[k / 2] * (f1 + f2);
        }
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), l1 * std::abs(half)};
}

// Globally adaptive: always bisect the panel with the largest error estimate.
QuadratureResult adaptive_kronrod(const std::function<double(double)>& f, double lo, double hi,
                                  const QuadratureSpec& spec) {
    std::priority_queue<Panel> panels;
    Panel first = kronrod_panel(f, lo, hi);
    double value = first.value;
    double error = first.error;
    double l1 = first.l1;
    panels.push(first);
    const std::size_t max_panels = std::size_t{1} << std::min(spec.max_depth, 16u);
    while (error > spec.rel_tol * std::abs(value) && error > 1e-300 && panels.size() < max_panels) {
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            break;
        }
        panels.pop();
        const Panel left = kronrod_panel(f, worst.lo, mid);
        const Panel right = kronrod_panel(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum in a fixed order so the result does not carry update round-off.
    std::vector<Panel> all;
    all.reserve(panels.size());
    while (!panels.empty()) {
        all.push_back(panels.top());
        panels.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
    QuadratureResult out;
    for (const Panel& p : all) {
        out.value += p.value;
        out.error += p.error;
    }
    if (!std::isfinite(out.value)) {
        std::ostringstream msg;
        msg << "non-finite integral on [" << lo << ", " << hi << "]";
        throw NumericalError(msg.str());
    }
    if (out.error > spec.rel_tol * std::abs(out.value) && out.error > 1e3 * spec.rel_tol * l1 &&
        out.error > 1e-300) {
        std::ostringstream msg;
        msg << "quadrature did not converge on [" << lo << ", " << hi << "]: error estimate "
            << out.error << " for value " << out.value;
        throw NumericalError(msg.str());
    }
    return out;
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureSpec& spec) {
    std::vector<double> cuts{a};
    for (double c : breakpoints) {
        if (c > a && c < b) {
            cuts.push_back(c);
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    QuadratureResult total;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (!(cuts[k + 1] > cuts[k])) {
            continue;
        }
        const QuadratureResult piece = adaptive_kronrod(f, cuts[k], cuts[k + 1], spec);
        total.value += piece.value;
        total.error += piece.error;
    }
    return total;
}

GaussRule gauss_legendre_unit(int n) {
    if (n < 1) {
        throw ConfigError("Gauss-Legendre rule needs at least one point");
    }
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    // Newton on P_n from the Chebyshev-like initial guess, then map [-1,1] -> [0,1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double step = p0 / dp;
            z -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = 0.5 * (1.0 - z);
        rule.nodes[hi] = 0.5 * (1.0 + z);
        rule.weights[lo] = 0.5 * w;
        rule.weights[hi] = 0.5 * w;
    }
    return rule;
}

} // namespace sheath
