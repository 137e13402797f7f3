#include "sheath/driver.hpp"

#include "sheath/errors.hpp"
#include "sheath/parallel.hpp"
#include "sheath/transport.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace sheath {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

bool close_rel(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(std::abs(a), std::abs(b)); }

void check_params(const PhysicalParams& file, const PhysicalParams& cfg, const fs::path& path) {
    const bool same = close_rel(file.mu, cfg.mu) && close_rel(file.eps, cfg.eps) &&
                      close_rel(file.rho0, cfg.rho0) && close_rel(file.eta, cfg.eta) &&
                      close_rel(file.sigma, cfg.sigma) && close_rel(file.Z, cfg.Z);
    if (!same) {
        throw ConfigError(path.string() + ": physical parameters differ from the configuration");
    }
}

fs::path checkpoint_path(const fs::path& dir, std::int64_t step) {
    return dir / ("checkpoint_" + std::to_string(step) + ".chk");
}

} // namespace

RunConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
    RunConfig cfg = path.empty() ? RunConfig{} : parse_config(read_text(path));
    for (const auto& o : overrides) {
        apply_override(cfg, o);
    }
    cfg.validate();
    return cfg;
}

EquilibriumSolution obtain_equilibrium(const RunConfig& cfg, const fs::path& equilibrium_path) {
    if (equilibrium_path.empty()) {
        return solve_equilibrium(cfg.physical, cfg.numerics.equilibrium_n);
    }
    EquilibriumFile file = read_equilibrium(equilibrium_path);
    check_params(file.params, cfg.physical, equilibrium_path);
    return std::move(file.solution);
}

RunOutcome run_simulation(const RunConfig& cfg, const fs::path& equilibrium_path) {
    cfg.validate();
    const fs::path out_dir = cfg.io.output_dir;
    const fs::path snap_dir = out_dir / "snapshots";
    const fs::path chk_dir = out_dir / "checkpoints";
    std::error_code ec;
    fs::create_directories(snap_dir, ec);
    fs::create_directories(chk_dir, ec);
    if (!fs::is_directory(snap_dir) || !fs::is_directory(chk_dir)) {
        throw IoError("cannot create output directories under " + out_dir.string());
    }

    const std::uint64_t digest = config_digest(cfg);
    SimState state;
    BoundaryData boundary;
    RunOutcome outcome;

    if (!cfg.io.resume_path.empty()) {
        Checkpoint cp = read_checkpoint(cfg.io.resume_path);
        if (cp.digest != digest) {
            throw ConfigError(cfg.io.resume_path +
                              ": checkpoint was written with a different configuration");
        }
        if (cp.state.f_i.grid() != cfg.ions.phase_grid() ||
            cp.state.f_e.grid() != cfg.electrons.phase_grid()) {
            throw ConfigError(cfg.io.resume_path + ": checkpoint grids differ from the configuration");
        }
        state = std::move(cp.state);
        boundary = std::move(cp.boundary);
        const fs::path series = out_dir / "timeseries.csv";
        if (fs::exists(series)) {
            auto previous = read_timeseries(series);
            previous.resize(std::min<std::size_t>(previous.size(), static_cast<std::size_t>(state.step)));
            outcome.records = std::move(previous);
        }
    } else {
        const EquilibriumSolution eq = obtain_equilibrium(cfg, equilibrium_path);
        write_equilibrium(out_dir / "equilibrium.dat", eq, cfg.physical);
        InitialState init = make_initial_state(eq, cfg.physical, cfg.ions.phase_grid(),
                                               cfg.electrons.phase_grid(), cfg.numerics.d);
        state = std::move(init.state);
        boundary = std::move(init.boundary);
    }
    write_text(out_dir / "config.cfg", serialize_config(cfg));

    TimeseriesWriter series(out_dir / "timeseries.csv");
    for (const auto& r : outcome.records) {
        series.append(r);
    }

    RunSinks sinks;
    sinks.snapshot_interval = cfg.io.snapshot_interval;
    sinks.checkpoint_interval = cfg.io.checkpoint_interval;
    sinks.on_record = [&](const DiagnosticsRecord& r) {
        series.append(r);
        outcome.records.push_back(r);
    };
    sinks.on_snapshot = [&](const SimState& s, long k) {
        write_snapshot(snap_dir, s, static_cast<double>(k) * cfg.io.snapshot_interval);
        ++outcome.snapshots_written;
    };
    sinks.on_checkpoint = [&](const SimState& s) {
        outcome.last_checkpoint = checkpoint_path(chk_dir, s.step);
        write_checkpoint(outcome.last_checkpoint, Checkpoint{s, boundary, digest});
    };

    outcome.final_state = run(std::move(state), cfg.split(), cfg.physical, boundary, sinks);

    // A checkpoint of the final state is always left behind so the run can be extended.
    const fs::path final_cp = checkpoint_path(chk_dir, outcome.final_state.step);
    if (outcome.last_checkpoint != final_cp) {
        write_checkpoint(final_cp, Checkpoint{outcome.final_state, boundary, digest});
        outcome.last_checkpoint = final_cp;
    }
    return outcome;
}

std::vector<SnapshotFiles> list_snapshots(const fs::path& output_dir) {
    const fs::path dir = output_dir / "snapshots";
    if (!fs::is_directory(dir)) {
        throw IoError("no snapshot directory at " + dir.string());
    }
    std::map<std::string, int> tags;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const std::string prefix = "ions_";
        const std::string suffix = ".snap";
        if (name.size() > prefix.size() + suffix.size() && name.starts_with(prefix) &&
            name.ends_with(suffix)) {
            tags[name.substr(prefix.size(), name.size() - prefix.size() - suffix.size())] = 0;
        }
    }
    std::vector<SnapshotFiles> out;
    for (const auto& [tag, unused] : tags) {
        out.push_back({dir / ("ions_" + tag + ".snap"), dir / ("electrons_" + tag + ".snap"),
                       dir / ("field_" + tag + ".snap")});
    }
    return out;
}

std::vector<DiagnosticsRecord> recompute_diagnostics(const fs::path& output_dir, bool write_errors) {
    const auto snapshots = list_snapshots(output_dir);
    std::vector<DiagnosticsRecord> records;
    std::optional<SimState> first;
    const fs::path err_dir = output_dir / "errors";
    if (write_errors) {
        fs::create_directories(err_dir);
    }
    for (const auto& files : snapshots) {
        SimState s = read_snapshot_state(files);
        records.push_back(compute_record(s));
        if (!write_errors) {
            continue;
        }
        if (!first) {
            first = s;
        }
        ErrorField err = error_field(s, *first);
        SimState e;
        e.f_i = std::move(err.ions);
        e.f_e = std::move(err.electrons);
        e.efield.resize(s.efield.size());
        for (std::size_t k = 0; k < e.efield.size(); ++k) {
            e.efield[k] = first->efield[k] - s.efield[k];
        }
        e.time = s.time;
        e.step = s.step;
        const std::string tag = files.ions.filename().string();
        const std::string stem = tag.substr(5, tag.size() - 10);
        write_snapshot(err_dir, e, stem);
    }
    write_timeseries(output_dir / "diag_timeseries.csv", records);
    return records;
}

int main_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kinetic plasma sheath simulator (1D1V Vlasov-Ampere, two species)", "sheathsim"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::vector<std::string> overrides;
    std::optional<double> t_final;
    std::optional<double> dt;
    std::string resume;
    std::string equilibrium_path;
    int threads = 0;
    bool errors = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
        sub->add_option("--output-dir", output_dir, "output directory");
        sub->add_option("--set", overrides, "override one key, section.key=value")->allow_extra_args(false);
        sub->add_option("--threads", threads, "worker threads (default: SHEATHSIM_THREADS or 1)");
    };

    CLI::App* eq_cmd = app.add_subcommand("equilibrium", "solve the stationary sheath and write it");
    common(eq_cmd);

    CLI::App* run_cmd = app.add_subcommand("run", "time evolution from the stationary state");
    common(run_cmd);
    run_cmd->add_option("--t-final", t_final, "final time");
    run_cmd->add_option("--dt", dt, "time step");
    run_cmd->add_option("--resume", resume, "checkpoint to continue from")->check(CLI::ExistingFile);
    run_cmd->add_option("--equilibrium", equilibrium_path, "stationary state file to start from")
        ->check(CLI::ExistingFile);

    CLI::App* diag_cmd = app.add_subcommand("diag", "recompute diagnostics from snapshots");
    common(diag_cmd);
    diag_cmd->add_flag("--errors", errors, "also write error fields against the first snapshot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "sheathsim: " << e.what() << '\n';
        return 2;
    }

    try {
        set_thread_count(threads);
        RunConfig cfg = load_config(config_path, overrides);
        if (!output_dir.empty()) {
            cfg.io.output_dir = output_dir;
        }
        if (t_final) {
            cfg.numerics.t_final = *t_final;
        }
        if (dt) {
            cfg.numerics.dt = *dt;
        }
        if (!resume.empty()) {
            cfg.io.resume_path = resume;
        }
        cfg.validate();

        if (eq_cmd->parsed()) {
            const EquilibriumSolution eq = solve_equilibrium(cfg.physical, cfg.numerics.equilibrium_n);
            fs::create_directories(cfg.io.output_dir);
            const fs::path path = fs::path(cfg.io.output_dir) / "equilibrium.dat";
            write_equilibrium(path, eq, cfg.physical);
            out << "phi_w " << format_real(eq.phi_w) << '\n'
                << "n0 " << format_real(eq.n0) << '\n'
                << "newton_iterations " << eq.iterations << '\n'
                << "residual " << format_real(eq.residual) << '\n'
                << "wrote " << path.string() << '\n';
        } else if (run_cmd->parsed()) {
            const RunOutcome r = run_simulation(cfg, equilibrium_path);
            out << "steps " << r.final_state.step << '\n'
                << "t " << format_real(r.final_state.time) << '\n'
                << "snapshots " << r.snapshots_written << '\n'
                << "checkpoint " << r.last_checkpoint.string() << '\n';
            if (!r.records.empty()) {
                const double e0 = r.records.front().energy.total();
                const double e1 = r.records.back().energy.total();
                out << "energy_drift " << format_real(std::abs(e1 - e0) / e0) << '\n';
            }
        } else if (diag_cmd->parsed()) {
            const auto records = recompute_diagnostics(cfg.io.output_dir, errors);
            out << "snapshots " << records.size() << '\n'
                << "wrote " << (fs::path(cfg.io.output_dir) / "diag_timeseries.csv").string() << '\n';
        }
    } catch (const ParseError& e) {
        err << "sheathsim: configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "sheathsim: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace sheath
