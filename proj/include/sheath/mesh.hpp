#pragma once

// Uniform meshes and the dense containers shared by every solver stage.
//
// Layout: a DistributionField stores f(x_i, v_j) at values[i * (nv + 1) + j],
// i.e. x is the slow index and each fixed-x velocity row is contiguous.
// Space advection walks a column j with stride (nv + 1); velocity advection
// works on contiguous rows. All modules assume this layout.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sheath {

/// Dimensionless physical constants. Defaults are the deuterium sheath case.
struct PhysicalParams {
    double mu = 1.0 / 3672.0; ///< electron/ion mass ratio
    double eps = 0.01;        ///< Debye length
    double rho0 = 0.0;        ///< charge density at the entrance
    double eta = 0.1;         ///< low-velocity cutoff of the ion inflow
    double sigma = 0.5;       ///< ion inflow thermal width
    double Z = 1.5;           ///< ion inflow drift velocity

    /// Throws ConfigError if mu, eps, eta or sigma is not strictly positive.
    void validate() const;

    bool operator==(const PhysicalParams&) const = default;
};

/// Vertex-centred uniform mesh of n_cells + 1 nodes on [lo, hi].
struct Mesh1D {
    double lo = 0.0;
    double hi = 1.0;
    int n_cells = 2;
    double delta = 0.5;

    static Mesh1D make(double lo, double hi, int n_cells);

    double node(long i) const noexcept { return lo + static_cast<double>(i) * delta; }
    int size() const noexcept { return n_cells + 1; }

    bool operator==(const Mesh1D&) const = default;
};

struct PhaseGrid {
    Mesh1D x;
    Mesh1D v;

    int nx() const noexcept { return x.n_cells; }
    int nv() const noexcept { return v.n_cells; }

    bool operator==(const PhaseGrid&) const = default;
};

/// Builds the phase grid [0,1] x [v_lo, v_hi] with nx by nv cells.
PhaseGrid make_phase_grid(int nx, int nv, double v_lo, double v_hi);

class DistributionField {
  public:
    DistributionField() = default;
    explicit DistributionField(PhaseGrid grid, double fill = 0.0);

    const PhaseGrid& grid() const noexcept { return grid_; }
    int nx() const noexcept { return grid_.nx(); }
    int nv() const noexcept { return grid_.nv(); }
    std::size_t row_length() const noexcept { return static_cast<std::size_t>(grid_.nv()) + 1; }

    double& operator()(long i, long j) noexcept { return values_[index(i, j)]; }
    double operator()(long i, long j) const noexcept { return values_[index(i, j)]; }

    /// Velocity row at fixed x_i.
    std::span<double> row(long i) noexcept { return {values_.data() + index(i, 0), row_length()}; }
    std::span<const double> row(long i) const noexcept {
        return {values_.data() + index(i, 0), row_length()};
    }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool operator==(const DistributionField&) const = default;

  private:
    std::size_t index(long i, long j) const noexcept {
        return static_cast<std::size_t>(i) * row_length() + static_cast<std::size_t>(j);
    }

    PhaseGrid grid_;
    std::vector<double> values_;
};

/// Evaluates fn at every node. Throws NumericalError naming the first
/// node where fn is not finite.
DistributionField sample_function(const PhaseGrid& grid,
                                  const std::function<double(double, double)>& fn);

struct SimState {
    DistributionField f_e;
    DistributionField f_i;
    std::vector<double> efield; ///< E at x_i, length nx + 1
    double time = 0.0;
    std::int64_t step = 0;

    /// Throws ConfigError if the species x-meshes differ or efield has the wrong length.
    void validate() const;

    bool operator==(const SimState&) const = default;
};

} // namespace sheath
