#include "sheath/interp.hpp"

#include "sheath/errors.hpp"
#include "sheath/quadrature.hpp"

#include <string>

namespace sheath {

void lagrange_weights(int d, double alpha, std::span<double> out) {
    for (int k = -d; k <= d + 1; ++k) {
        double w = 1.0;
        for (int m = -d; m <= d + 1; ++m) {
            if (m != k) {
                w *= (alpha - m) / static_cast<double>(k - m);
            }
        }
        out[static_cast<std::size_t>(k + d)] = w;
    }
}

std::vector<double> lagrange_weights(int d, double alpha) {
    if (d < 0) {
        throw ConfigError("Lagrange half-width must be non-negative");
    }
    std::vector<double> w(static_cast<std::size_t>(2 * d + 2));
    lagrange_weights(d, alpha, w);
    return w;
}

LagrangeMoments lagrange_moments(int d) {
    const auto size = static_cast<std::size_t>(2 * d + 2);
    // Degree 2d+1 times a linear factor: d + 2 Gauss points are exact.
    const GaussRule rule = gauss_legendre_unit(d + 2);
    LagrangeMoments m{std::vector<double>(size, 0.0), std::vector<double>(size, 0.0)};
    std::vector<double> w(size);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = rule.nodes[q];
        lagrange_weights(d, s, w);
        for (std::size_t k = 0; k < size; ++k) {
            m.integral[k] += rule.weights[q] * w[k];
            m.weighted[k] += rule.weights[q] * (1.0 - s) * w[k];
        }
    }
    return m;
}

void lagrange_partial_integrals(int d, double alpha, std::span<double> out) {
    const auto size = static_cast<std::size_t>(2 * d + 2);
    static thread_local int cached_d = -1;
    static thread_local GaussRule rule;
    if (cached_d != d) {
        rule = gauss_legendre_unit(d + 1);
        cached_d = d;
    }
    std::vector<double> w(size);
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = alpha * rule.nodes[q];
        lagrange_weights(d, s, w);
        for (std::size_t k = 0; k < size; ++k) {
            out[k] += alpha * rule.weights[q] * w[k];
        }
    }
}

std::vector<double> interpolate_shifted_row_periodic(std::span<const double> row, double shift,
                                                     int d) {
    const long n = static_cast<long>(row.size());
    std::vector<double> out(row.size());
    interpolate_shifted_row(
        [&](long i) {
            long m = i % n;
            if (m < 0) {
                m += n;
            }
            return row[static_cast<std::size_t>(m)];
        },
        shift, d, out);
    return out;
}

PeriodicSpline::PeriodicSpline(int period) : n_(period) {
    if (period < 4) {
        throw ConfigError("periodic spline needs at least 4 points, got " + std::to_string(period));
    }
    // Scaled system: 4 on the diagonal, 1 off-diagonal and in the corners.
    // Sherman-Morrison with gamma = -4 leaves a plain tridiagonal matrix.
    gamma_ = -4.0;
    const auto n = static_cast<std::size_t>(n_);
    c_prime_.resize(n);
    denom_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 4.0;
        if (i == 0) {
            diag -= gamma_;
        } else if (i == n - 1) {
            diag -= 1.0 / gamma_;
        }
        const double denom = i == 0 ? diag : diag - c_prime_[i - 1];
        denom_[i] = denom;
        c_prime_[i] = 1.0 / denom;
    }
    z_.assign(n, 0.0);
    z_[0] = gamma_;
    z_[n - 1] = 1.0;
    solve_modified(z_);
    z_factor_ = 1.0 + z_[0] + z_[n - 1] / gamma_;
}

void PeriodicSpline::solve_modified(std::span<double> rhs) const {
    const auto n = static_cast<std::size_t>(n_);
    rhs[0] /= denom_[0];
    for (std::size_t i = 1; i < n; ++i) {
        rhs[i] = (rhs[i] - rhs[i - 1]) / denom_[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= c_prime_[i] * rhs[i + 1];
    }
}

void PeriodicSpline::build(std::span<const double> row, std::span<double> coeffs) const {
    const auto n = static_cast<std::size_t>(n_);
    // Solving for the deviation from row[0] keeps constant rows exact.
    const double ref = row[0];
    for (std::size_t i = 0; i < n; ++i) {
        coeffs[i] = 6.0 * (row[i] - ref);
    }
    solve_modified(coeffs);
    const double fact = (coeffs[0] + coeffs[n - 1] / gamma_) / z_factor_;
    for (std::size_t i = 0; i < n; ++i) {
        coeffs[i] = ref + (coeffs[i] - fact * z_[i]);
    }
}

void PeriodicSpline::eval_shifted(std::span<const double> coeffs, double shift,
                                  std::span<double> out) const {
    const ShiftSplit split = split_shift(shift);
    const double a = split.alpha;
    const double b = 1.0 - a;
    const double w0 = b * b * b / 6.0;
    const double w1 = (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
    const double w2 = (4.0 - 6.0 * b * b + 3.0 * b * b * b) / 6.0;
    const double w3 = a * a * a / 6.0;
    const long n = n_;
    long first = (split.offset - 1) % n;
    if (first < 0) {
        first += n;
    }
    // Weights are combined on deviations from coeffs[0], so equal coefficients give that value exactly.
    const double ref = coeffs[0];
    for (std::size_t i = 0; i < out.size(); ++i) {
        long j0 = first;
        long j1 = j0 + 1 == n ? 0 : j0 + 1;
        long j2 = j1 + 1 == n ? 0 : j1 + 1;
        long j3 = j2 + 1 == n ? 0 : j2 + 1;
        out[i] = ref + ((coeffs[static_cast<std::size_t>(j0)] - ref) * w0 +
                        (coeffs[static_cast<std::size_t>(j1)] - ref) * w1 +
                        (coeffs[static_cast<std::size_t>(j2)] - ref) * w2 +
                        (coeffs[static_cast<std::size_t>(j3)] - ref) * w3);
        first = j1;
    }
}

SplineCoeffs spline_build(std::span<const double> row) {
    PeriodicSpline spline(static_cast<int>(row.size()));
    SplineCoeffs coeffs{std::vector<double>(row.size())};
    spline.build(row, coeffs.c);
    return coeffs;
}

std::vector<double> spline_eval_shifted(const SplineCoeffs& coeffs, double shift) {
    PeriodicSpline spline(static_cast<int>(coeffs.c.size()));
    std::vector<double> out(coeffs.c.size());
    spline.eval_shifted(coeffs.c, shift, out);
    return out;
}

} // namespace sheath
