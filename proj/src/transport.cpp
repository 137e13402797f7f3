#include "sheath/transport.hpp"

#include "sheath/errors.hpp"
#include "sheath/field_moments.hpp"
#include "sheath/parallel.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace sheath {

void SplitConfig::validate() const {
    if (d < 0) {
        throw ConfigError("interpolation half-width d must be non-negative");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("time step must be positive");
    }
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw ConfigError("final time must be non-negative");
    }
}

Stepper::Stepper(const PhysicalParams& p, const SplitConfig& cfg, BoundaryData boundary)
    : params_(p), cfg_(cfg), boundary_(std::move(boundary)) {
    cfg_.validate();
}

PeriodicSpline& Stepper::spline_for(std::optional<PeriodicSpline>& slot, int period) {
    if (!slot || slot->period() != period) {
        slot.emplace(period);
    }
    return *slot;
}

void Stepper::shift_space(DistributionField& f, const InflowCache& cache, double tau) const {
    const int d = cfg_.d;
    const long nx = f.nx();
    if (nx < d + 2) {
        throw ConfigError("x-mesh of " + std::to_string(nx) + " cells is too coarse for d = " +
                          std::to_string(d) + " (need at least d + 2 cells)");
    }
    const Mesh1D& v = f.grid().v;
    const double dx = f.grid().x.delta;
    const long stride = static_cast<long>(f.row_length());
    parallel_for(v.size(), [&](long j_begin, long j_end) {
        std::vector<double> padded;
        std::vector<double> out(static_cast<std::size_t>(nx) + 1);
        std::vector<double> w(static_cast<std::size_t>(2 * d + 2));
        double* data = f.values().data();
        for (long j = j_begin; j < j_end; ++j) {
            const double shift = v.node(j) * tau / dx;
            const ShiftSplit split = split_shift(shift);
            if (split.offset == 0 && split.alpha == 0.0) {
                continue;
            }
            // Padded column covers every index the stencil touches.
            const long first = split.offset - d;
            padded.resize(static_cast<std::size_t>(nx + 2 * d + 2));
            gather_column(f, j, first, cache, padded);
            if (split.alpha == 0.0) {
                for (long i = 0; i <= nx; ++i) {
                    out[static_cast<std::size_t>(i)] = padded[static_cast<std::size_t>(i + d)];
                }
            } else {
                lagrange_weights(d, split.alpha, w);
                for (long i = 0; i <= nx; ++i) {
                    const double* src = padded.data() + i;
                    double acc = 0.0;
                    for (std::size_t k = 0; k < w.size(); ++k) {
                        acc += src[k] * w[k];
                    }
                    out[static_cast<std::size_t>(i)] = acc;
                }
            }
            for (long i = 0; i <= nx; ++i) {
                data[i * stride + j] = out[static_cast<std::size_t>(i)];
            }
        }
    });
}

void Stepper::advect_x(SimState& state, double tau) {
    if (tau < 0.0) {
        throw ConfigError("space advection requires a non-negative sub-step");
    }
    const auto nodes = state.efield.size();
    current_before_.resize(nodes);
    current_after_.resize(nodes);
    if (!cfg_.freeze_field) {
        moment_current(state.f_i, state.f_e, current_before_);
    }
    shift_space(state.f_e, boundary_.electrons, tau);
    shift_space(state.f_i, boundary_.ions, tau);
    if (!cfg_.freeze_field) {
        moment_current(state.f_i, state.f_e, current_after_);
        ampere_update(state.efield, current_before_, current_after_, tau, params_);
    }
}

void Stepper::shift_velocity(DistributionField& f, std::span<const double> efield, double factor,
                             std::optional<PeriodicSpline>& spline_slot) {
    // Foot of v_j at node x_i is v_j - factor * E_i * tau / dv cells away; factor carries tau.
    const Mesh1D& v = f.grid().v;
    const int period = f.nv();
    const double half_width = 0.5 * (v.hi - v.lo);
    double largest = 0.0;
    for (double e : efield) {
        largest = std::max(largest, std::abs(factor * e));
    }
    if (largest > half_width && !warned_wrap_) {
        warned_wrap_ = true;
        std::ostringstream msg;
        msg << "velocity shift " << largest << " exceeds half the velocity domain (" << half_width
            << "); periodic wrap-around is unphysical";
        warnings_.push_back(msg.str());
        std::clog << "warning: " << msg.str() << '\n';
    }

    if (cfg_.v_scheme == VelocityScheme::PeriodicSpline) {
        const PeriodicSpline& spline = spline_for(spline_slot, period);
        parallel_for(f.nx() + 1, [&](long i_begin, long i_end) {
            std::vector<double> coeffs(static_cast<std::size_t>(period));
            for (long i = i_begin; i < i_end; ++i) {
                const double shift = factor * efield[static_cast<std::size_t>(i)] / v.delta;
                if (shift == 0.0) {
                    continue;
                }
                auto row = f.row(i);
                spline.build(row.first(static_cast<std::size_t>(period)), coeffs);
                spline.eval_shifted(coeffs, shift, row.first(static_cast<std::size_t>(period)));
                row[static_cast<std::size_t>(period)] = row[0];
            }
        });
        return;
    }

    const int d = cfg_.d;
    parallel_for(f.nx() + 1, [&](long i_begin, long i_end) {
        std::vector<double> copy(static_cast<std::size_t>(period));
        std::vector<double> padded(static_cast<std::size_t>(period + 2 * d + 2));
        std::vector<double> w(static_cast<std::size_t>(2 * d + 2));
        for (long i = i_begin; i < i_end; ++i) {
            const double shift = factor * efield[static_cast<std::size_t>(i)] / v.delta;
            if (shift == 0.0) {
                continue;
            }
            auto row = f.row(i);
            const ShiftSplit split = split_shift(shift);
            long src = (split.offset - d) % period;
            if (src < 0) {
                src += period;
            }
            for (auto& value : padded) {
                value = row[static_cast<std::size_t>(src)];
                src = src + 1 == period ? 0 : src + 1;
            }
            if (split.alpha == 0.0) {
                for (int j = 0; j < period; ++j) {
                    row[static_cast<std::size_t>(j)] = padded[static_cast<std::size_t>(j + d)];
                }
            } else {
                lagrange_weights(d, split.alpha, w);
                for (int j = 0; j < period; ++j) {
                    const double* s = padded.data() + j;
                    double acc = 0.0;
                    for (std::size_t k = 0; k < w.size(); ++k) {
                        acc += s[k] * w[k];
                    }
                    row[static_cast<std::size_t>(j)] = acc;
                }
            }
            row[static_cast<std::size_t>(period)] = row[0];
        }
    });
}

void Stepper::advect_v(SimState& state, double tau) {
    shift_velocity(state.f_i, state.efield, tau, spline_i_);
    shift_velocity(state.f_e, state.efield, -tau / params_.mu, spline_e_);
}

void Stepper::strang_step(SimState& state, double dt) {
    advect_v(state, 0.5 * dt);
    advect_x(state, dt);
    advect_v(state, 0.5 * dt);
    state.time += dt;
    ++state.step;
}

void advect_x(SimState& state, double tau, const SplitConfig& cfg, const BoundaryData& boundary,
              const PhysicalParams& p) {
    Stepper(p, cfg, boundary).advect_x(state, tau);
}

void advect_v(SimState& state, double tau, const SplitConfig& cfg, const PhysicalParams& p) {
    Stepper(p, cfg, BoundaryData{}).advect_v(state, tau);
}

void strang_step(SimState& state, double dt, const SplitConfig& cfg, const BoundaryData& boundary,
                 const PhysicalParams& p) {
    Stepper(p, cfg, boundary).strang_step(state, dt);
}

InitialState make_initial_state(const EquilibriumSolution& eq, const PhysicalParams& p,
                                const PhaseGrid& ion_grid, const PhaseGrid& electron_grid, int d) {
    if (!(ion_grid.x == electron_grid.x)) {
        throw ConfigError("ion and electron grids must share the x-mesh");
    }
    InitialState init;
    init.state.f_i = sample_function(
        ion_grid, [&](double x, double v) { return eval_equilibrium_ion(x, v, eq, p); });
    init.state.f_e = sample_function(
        electron_grid, [&](double x, double v) { return eval_equilibrium_electron(x, v, eq, p); });
    init.boundary.ions = make_inflow_cache(init.state.f_i);
    init.boundary.electrons = make_inflow_cache(init.state.f_e);
    const GhostedArray n_i = ghosted_density(init.state.f_i, init.boundary.ions, d);
    const GhostedArray n_e = ghosted_density(init.state.f_e, init.boundary.electrons, d);
    init.state.efield = init_electric_field(n_i, n_e, ion_grid.x, p, eq.phi_w, d);
    init.state.time = 0.0;
    init.state.step = 0;
    return init;
}

std::int64_t step_count(double t_final, double dt) { return std::llround(t_final / dt); }

std::int64_t snapshot_step(long k, double interval, double dt) {
    return std::llround(static_cast<double>(k) * interval / dt);
}

namespace {

[[noreturn]] void report_non_finite(const SimState& state) {
    std::ostringstream msg;
    msg << "non-finite value at step " << state.step << " (t = " << state.time << ")";
    auto scan = [&](const DistributionField& f, const char* name) {
        for (int i = 0; i <= f.nx(); ++i) {
            for (int j = 0; j <= f.nv(); ++j) {
                if (!std::isfinite(f(i, j))) {
                    msg << " in " << name << " at (" << i << ", " << j << ")";
                    return true;
                }
            }
        }
        return false;
    };
    if (!scan(state.f_e, "electrons") && !scan(state.f_i, "ions")) {
        for (std::size_t i = 0; i < state.efield.size(); ++i) {
            if (!std::isfinite(state.efield[i])) {
                msg << " in E at node " << i;
                break;
            }
        }
    }
    throw NumericalError(msg.str());
}

bool finite(const DiagnosticsRecord& r) {
    return std::isfinite(r.entry_current) && std::isfinite(r.energy.kinetic) &&
           std::isfinite(r.energy.field) && std::isfinite(r.electrons.l2) &&
           std::isfinite(r.ions.l2) && std::isfinite(r.electrons.total_density) &&
           std::isfinite(r.ions.total_density);
}

} // namespace

SimState run(SimState state, const SplitConfig& cfg, const PhysicalParams& p,
             const BoundaryData& boundary, const RunSinks& sinks) {
    cfg.validate();
    state.validate();
    Stepper stepper(p, cfg, boundary);
    const std::int64_t last_step = step_count(cfg.t_final, cfg.dt);
    const std::int64_t checkpoint_stride =
        sinks.checkpoint_interval > 0.0 ? std::max<std::int64_t>(1, step_count(sinks.checkpoint_interval, cfg.dt)) : 0;

    long next_snapshot = 0;
    const long last_snapshot =
        sinks.snapshot_interval > 0.0
            ? static_cast<long>(std::floor(cfg.t_final / sinks.snapshot_interval + 1e-9))
            : -1;
    while (next_snapshot <= last_snapshot &&
           snapshot_step(next_snapshot, sinks.snapshot_interval, cfg.dt) < state.step) {
        ++next_snapshot;
    }

    auto emit = [&](bool final_step) {
        const DiagnosticsRecord record = compute_record(state);
        if (!finite(record)) {
            report_non_finite(state);
        }
        if (sinks.on_record) {
            sinks.on_record(record);
        }
        while (next_snapshot <= last_snapshot &&
               snapshot_step(next_snapshot, sinks.snapshot_interval, cfg.dt) == state.step) {
            if (sinks.on_snapshot) {
                sinks.on_snapshot(state, next_snapshot);
            }
            ++next_snapshot;
        }
        if (sinks.on_checkpoint && checkpoint_stride > 0 && state.step > 0 &&
            (state.step % checkpoint_stride == 0 || final_step)) {
            sinks.on_checkpoint(state);
        }
    };

    emit(state.step >= last_step);
    while (state.step < last_step) {
        stepper.strang_step(state, cfg.dt);
        state.time = static_cast<double>(state.step) * cfg.dt;
        emit(state.step == last_step);
    }
    return state;
}

} // namespace sheath
