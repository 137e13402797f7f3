#pragma once

// Split semi-Lagrangian transport for the two-species Vlasov-Ampere system.
//
//   T(tau): free streaming in x for both species (Lagrange of degree 2d+1,
//           ghost values from the boundary module), then a Crank-Nicolson
//           Ampere update of E from the currents before and after the shift.
//   U(tau): acceleration in v at frozen E, periodic in v:
//           ions follow v - E tau, electrons v + E tau / mu.
//   One step is U(dt/2) T(dt) U(dt/2).

#include "sheath/boundary.hpp"
#include "sheath/diagnostics.hpp"
#include "sheath/equilibrium.hpp"
#include "sheath/mesh.hpp"
#include "sheath/interp.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sheath {

enum class VelocityScheme { PeriodicSpline, Lagrange };

struct SplitConfig {
    int d = 8;                                          ///< space stencil half-width
    VelocityScheme v_scheme = VelocityScheme::PeriodicSpline;
    double dt = 1e-5;
    double t_final = 0.0;
    bool freeze_field = false; ///< skip the Ampere update (frozen-field tests)

    void validate() const;
};

/// Owns the scratch buffers and spline factorisations for one pair of grids.
class Stepper {
  public:
    Stepper(const PhysicalParams& p, const SplitConfig& cfg, BoundaryData boundary);

    void advect_x(SimState& state, double tau);
    void advect_v(SimState& state, double tau);
    /// U(dt/2) T(dt) U(dt/2); advances state.time by dt and state.step by one.
    void strang_step(SimState& state, double dt);

    const BoundaryData& boundary() const noexcept { return boundary_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  private:
    void shift_space(DistributionField& f, const InflowCache& cache, double tau) const;
    void shift_velocity(DistributionField& f, std::span<const double> efield, double factor,
                        std::optional<PeriodicSpline>& spline_slot);
    static PeriodicSpline& spline_for(std::optional<PeriodicSpline>& slot, int period);

    PhysicalParams params_;
    SplitConfig cfg_;
    BoundaryData boundary_;
    std::optional<PeriodicSpline> spline_e_;
    std::optional<PeriodicSpline> spline_i_;
    std::vector<double> current_before_;
    std::vector<double> current_after_;
    std::vector<std::string> warnings_;
    bool warned_wrap_ = false;
};

// Single-call forms; each builds a Stepper, so prefer the class in loops.
void advect_x(SimState& state, double tau, const SplitConfig& cfg, const BoundaryData& boundary,
              const PhysicalParams& p);
void advect_v(SimState& state, double tau, const SplitConfig& cfg, const PhysicalParams& p);
void strang_step(SimState& state, double dt, const SplitConfig& cfg, const BoundaryData& boundary,
                 const PhysicalParams& p);

struct InitialState {
    SimState state;
    BoundaryData boundary;
};

/// Samples the stationary distributions on the species grids, caches the
/// entry profiles and computes E from the densities with d ghost nodes.
InitialState make_initial_state(const EquilibriumSolution& eq, const PhysicalParams& p,
                                const PhaseGrid& ion_grid, const PhaseGrid& electron_grid, int d);

struct RunSinks {
    std::function<void(const DiagnosticsRecord&)> on_record;
    std::function<void(const SimState&, long index)> on_snapshot;
    double snapshot_interval = 0.01;
    std::function<void(const SimState&)> on_checkpoint;
    double checkpoint_interval = 0.0; ///< 0 disables periodic checkpoints
};

/// Number of Strang steps to reach t_final.
std::int64_t step_count(double t_final, double dt);

/// Step index of snapshot k: the step nearest to k * interval.
std::int64_t snapshot_step(long k, double interval, double dt);

/// Steps from state.step to step_count(cfg.t_final, cfg.dt). Emits a record
/// for the starting state and after every step; snapshots at the steps
/// nearest to multiples of the interval; checkpoints at multiples of the
/// checkpoint interval and at the final step. Throws NumericalError on the
/// first non-finite value.
SimState run(SimState state, const SplitConfig& cfg, const PhysicalParams& p,
             const BoundaryData& boundary, const RunSinks& sinks);

} // namespace sheath
