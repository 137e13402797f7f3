#pragma once

// Interpolation kernels for semi-Lagrangian advection on uniform meshes.
//
// Shift convention: advecting a row by `shift` cells evaluates the data at
// the characteristic foot i - shift, decomposed as base + alpha with
// base = floor(i - shift) and alpha in [0, 1). An integral shift gives
// alpha = 0 exactly.

#include <cmath>
#include <span>
#include <vector>

namespace sheath {

/// Elementary Lagrange polynomials on the 2d + 2 nodes -d..d+1, evaluated
/// at alpha: out[k + d] = prod_{m != k} (alpha - m) / (k - m).
/// Valid for any real alpha; [0, 1] is the centred range.
void lagrange_weights(int d, double alpha, std::span<double> out);
std::vector<double> lagrange_weights(int d, double alpha);

/// Integrals over [0, 1] of L_k(s) and of (1 - s) L_k(s), for exact
/// integration of the piecewise reconstruction and of its primitive.
struct LagrangeMoments {
    std::vector<double> integral;        ///< int_0^1 L_k
    std::vector<double> weighted;        ///< int_0^1 (1 - s) L_k(s) ds
};

LagrangeMoments lagrange_moments(int d);

/// int_0^alpha L_k(s) ds for every k, by Gauss-Legendre (exact for the degree).
void lagrange_partial_integrals(int d, double alpha, std::span<double> out);

struct ShiftSplit {
    long offset;  ///< floor(-shift): the foot of node i sits in cell i + offset
    double alpha; ///< fractional position in [0, 1)
};

inline ShiftSplit split_shift(double shift) {
    const double foot = -shift;
    const double base = std::floor(foot);
    double alpha = foot - base;
    if (alpha >= 1.0) {
        // foot - floor(foot) rounds up to 1 only for tiny negative feet.
        return {static_cast<long>(base) + 1, 0.0};
    }
    return {static_cast<long>(base), alpha};
}

/// out[i] = sum_k in(i + offset + k) L_k(alpha) for i in [0, out.size()).
/// `in` is any callable long -> double covering every index the stencil
/// touches (ghost values included).
template <class Accessor>
void interpolate_shifted_row(Accessor&& in, double shift, int d, std::span<double> out) {
    const ShiftSplit split = split_shift(shift);
    if (split.alpha == 0.0) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = in(static_cast<long>(i) + split.offset);
        }
        return;
    }
    std::vector<double> w(static_cast<std::size_t>(2 * d + 2));
    lagrange_weights(d, split.alpha, w);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const long first = static_cast<long>(i) + split.offset - d;
        double acc = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            acc += in(first + static_cast<long>(k)) * w[k];
        }
        out[i] = acc;
    }
}

/// Convenience overload on a periodic row.
std::vector<double> interpolate_shifted_row_periodic(std::span<const double> row, double shift, int d);

/// Coefficients of the periodic cubic B-spline interpolant of a row.
struct SplineCoeffs {
    std::vector<double> c;
};

/// Factorised cyclic (1, 4, 1)/6 system for a fixed period, reusable
/// across rows. Solving is allocation-free given a scratch buffer of the
/// period length.
class PeriodicSpline {
  public:
    explicit PeriodicSpline(int period);

    int period() const noexcept { return n_; }

    /// coeffs must hold `period` entries; row supplies the first `period` values.
    void build(std::span<const double> row, std::span<double> coeffs) const;

    /// out[i] = spline(i - shift) for i in [0, out.size()), indices taken modulo the period.
    void eval_shifted(std::span<const double> coeffs, double shift, std::span<double> out) const;

  private:
    int n_;
    std::vector<double> c_prime_; ///< Thomas forward-sweep multipliers
    std::vector<double> denom_;   ///< Thomas pivots
    std::vector<double> z_;       ///< Sherman-Morrison correction vector
    double gamma_ = 0.0;
    double z_factor_ = 0.0;

    void solve_modified(std::span<double> rhs) const;
};

/// Builds the periodic spline of the first `row.size()` values (period = row.size()).
SplineCoeffs spline_build(std::span<const double> row);

/// Evaluates the spline at every node shifted by -shift (same convention as Lagrange).
std::vector<double> spline_eval_shifted(const SplineCoeffs& coeffs, double shift);

} // namespace sheath
