#include <doctest.h>

#include "cli_helpers.hpp"
#include "sheath/io.hpp"

#include <cmath>
#include <cstdlib>

using namespace sheath;
namespace fs = std::filesystem;

namespace {

// Small grids keep these end-to-end runs to seconds.
const char* small_config = R"([grid.ions]
nx = 32
nv = 64
v_lo = -10
v_hi = 10
[grid.electrons]
nx = 32
nv = 64
v_lo = -500
v_hi = 500
[numerics]
d = 4
dt = 1e-4
equilibrium_n = 256
[io]
snapshot_interval = 0.01
)";

fs::path write_config(const fs::path& dir, const std::string& text = small_config) {
    const fs::path path = dir / "small.cfg";
    std::ofstream(path) << text;
    return path;
}

std::size_t count_files(const fs::path& dir, const std::string& prefix) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename().string().starts_with(prefix)) {
            ++n;
        }
    }
    return n;
}

} // namespace

TEST_CASE("zero final time writes the initial snapshot only") {
    const fs::path dir = fresh_dir("sheath_cli_zero");
    const CliResult r = run_cli({"run", "--config", write_config(dir).string(), "--output-dir",
                                 (dir / "out").string(), "--t-final", "0"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(count_files(dir / "out" / "snapshots", "ions_") == 1);
    CHECK(fs::exists(dir / "out" / "snapshots" / "ions_t000000.000000.snap"));
    CHECK(read_timeseries(dir / "out" / "timeseries.csv").size() == 1);
    CHECK(fs::exists(dir / "out" / "equilibrium.dat"));
    CHECK(fs::exists(dir / "out" / "config.cfg"));
    CHECK(parse_config(slurp(dir / "out" / "config.cfg")).ions.nx == 32);
}

TEST_CASE("run then diag reproduces the in-run energy") {
    const fs::path dir = fresh_dir("sheath_cli_diag");
    const CliResult r = run_cli({"run", "--config", write_config(dir).string(), "--output-dir",
                                 (dir / "out").string(), "--t-final", "0.5"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    // floor(0.5 / 0.01) + 1 snapshots
    CHECK(count_files(dir / "out" / "snapshots", "ions_") == 51);
    CHECK(count_files(dir / "out" / "snapshots", "field_") == 51);
    const auto series = read_timeseries(dir / "out" / "timeseries.csv");
    REQUIRE(series.size() == 5001);

    const CliResult d = run_cli({"diag", "--output-dir", (dir / "out").string(), "--errors"});
    REQUIRE_MESSAGE(d.status == 0, d.err);
    const auto diag = read_timeseries(dir / "out" / "diag_timeseries.csv");
    REQUIRE(diag.size() == 51);
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const auto& in_run = series[k * 100];
        CHECK(diag[k].t == in_run.t);
        CHECK(std::abs(diag[k].energy.total() - in_run.energy.total()) <= 1e-12 * std::abs(in_run.energy.total()));
        CHECK(diag[k].ions.l1 == in_run.ions.l1);
    }
    CHECK(count_files(dir / "out" / "errors", "ions_") == 51);
    const Snapshot first_error = read_snapshot(dir / "out" / "errors" / "ions_t000000.000000.snap");
    for (double v : first_error.values) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("resume continues bit-identically") {
    const fs::path dir = fresh_dir("sheath_cli_resume");
    const fs::path cfg = write_config(dir);
    auto run = [&](std::vector<std::string> extra) {
        std::vector<std::string> args{"run", "--config", cfg.string()};
        args.insert(args.end(), extra.begin(), extra.end());
        const CliResult r = run_cli(args);
        REQUIRE_MESSAGE(r.status == 0, r.err);
    };
    run({"--output-dir", (dir / "full").string(), "--t-final", "0.03"});
    run({"--output-dir", (dir / "split").string(), "--t-final", "0.012"});
    const fs::path cp = dir / "split" / "checkpoints" / "checkpoint_120.chk";
    REQUIRE(fs::exists(cp));
    run({"--output-dir", (dir / "split").string(), "--t-final", "0.03", "--resume", cp.string()});

    CHECK(slurp(dir / "full" / "timeseries.csv") == slurp(dir / "split" / "timeseries.csv"));
    for (const char* name : {"ions_t000000.030000.snap", "electrons_t000000.030000.snap", "field_t000000.030000.snap"}) {
        CHECK(slurp(dir / "full" / "snapshots" / name) == slurp(dir / "split" / "snapshots" / name));
    }
    CHECK(slurp(dir / "full" / "checkpoints" / "checkpoint_300.chk") ==
          slurp(dir / "split" / "checkpoints" / "checkpoint_300.chk"));

    SUBCASE("a checkpoint from another configuration is refused") {
        const CliResult r = run_cli({"run", "--config", cfg.string(), "--output-dir", (dir / "other").string(),
                                     "--set", "numerics.dt=2e-4", "--resume", cp.string()});
        CHECK(r.status != 0);
        CHECK(r.err.find("different configuration") != std::string::npos);
    }
}

TEST_CASE("thread count does not change the output") {
    const fs::path dir = fresh_dir("sheath_cli_threads");
    const fs::path cfg = write_config(dir);
    for (const char* threads : {"1", "3"}) {
        const CliResult r = run_cli({"run", "--config", cfg.string(), "--output-dir", (dir / threads).string(),
                                     "--t-final", "0.01", "--threads", threads});
        REQUIRE_MESSAGE(r.status == 0, r.err);
    }
    CHECK(slurp(dir / "1" / "timeseries.csv") == slurp(dir / "3" / "timeseries.csv"));
    CHECK(slurp(dir / "1" / "snapshots" / "electrons_t000000.010000.snap") ==
          slurp(dir / "3" / "snapshots" / "electrons_t000000.010000.snap"));
}

TEST_CASE("starting from an equilibrium file") {
    const fs::path dir = fresh_dir("sheath_cli_eqfile");
    const fs::path cfg = write_config(dir);
    const CliResult e = run_cli({"equilibrium", "--config", cfg.string(), "--output-dir", (dir / "eq").string()});
    REQUIRE_MESSAGE(e.status == 0, e.err);
    CHECK(e.out.find("phi_w -2.78") != std::string::npos);
    const CliResult a = run_cli({"run", "--config", cfg.string(), "--output-dir", (dir / "a").string(),
                                 "--t-final", "0.002", "--equilibrium", (dir / "eq" / "equilibrium.dat").string()});
    const CliResult b = run_cli({"run", "--config", cfg.string(), "--output-dir", (dir / "b").string(), "--t-final", "0.002"});
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    CHECK(slurp(dir / "a" / "timeseries.csv") == slurp(dir / "b" / "timeseries.csv"));

    const CliResult mismatch = run_cli({"run", "--config", cfg.string(), "--set", "physical.eta=0.2", "--output-dir",
                                        (dir / "c").string(), "--equilibrium", (dir / "eq" / "equilibrium.dat").string()});
    CHECK(mismatch.status != 0);
}

TEST_CASE("errors exit nonzero with a message") {
    const fs::path dir = fresh_dir("sheath_cli_errors");
    SUBCASE("malformed configuration") {
        const fs::path bad = write_config(dir, "[physical]\neps = zero\n");
        const CliResult r = run_cli({"equilibrium", "--config", bad.string()});
        CHECK(r.status != 0);
        CHECK(r.err.find("line 2") != std::string::npos);
    }
    SUBCASE("unknown override") {
        const CliResult r = run_cli({"equilibrium", "--set", "numerics.bogus=1"});
        CHECK(r.status != 0);
        CHECK(r.err.find("numerics.bogus") != std::string::npos);
    }
    SUBCASE("missing subcommand") {
        CHECK(run_cli({}).status != 0);
    }
    SUBCASE("diag without snapshots") {
        const CliResult r = run_cli({"diag", "--output-dir", (dir / "nothing").string()});
        CHECK(r.status != 0);
        CHECK(r.err.find("nothing") != std::string::npos);
    }
    SUBCASE("help succeeds") {
        const CliResult r = run_cli({"--help"});
        CHECK(r.status == 0);
        CHECK(r.out.find("equilibrium") != std::string::npos);
    }
}

TEST_CASE("installed binary reports failures through its exit status") {
    const char* bin = std::getenv("SHEATHSIM_BIN");
    if (bin == nullptr) {
        MESSAGE("SHEATHSIM_BIN not set; skipping");
        return;
    }
    const fs::path dir = fresh_dir("sheath_cli_binary");
    const std::string bad = "\"" + std::string(bin) + "\" run --set physical.eps=-1 --output-dir \"" +
                            (dir / "x").string() + "\" 2> \"" + (dir / "err.txt").string() + "\"";
    CHECK(std::system(bad.c_str()) != 0);
    CHECK(slurp(dir / "err.txt").find("eps") != std::string::npos);
}
