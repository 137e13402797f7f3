#include "sheath/config.hpp"

#include "sheath/errors.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace sheath {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_plain_double(std::string_view text, std::string_view key, int line) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ParseError("malformed number '" + std::string(text) + "' for " + std::string(key),
                         line);
    }
    return value;
}

double parse_double(std::string_view text, std::string_view key, int line) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return parse_plain_double(text, key, line);
    }
    const double num = parse_plain_double(trim(text.substr(0, slash)), key, line);
    const double den = parse_plain_double(trim(text.substr(slash + 1)), key, line);
    if (den == 0.0) {
        throw ParseError("division by zero in value for " + std::string(key), line);
    }
    return num / den;
}

int parse_int(std::string_view text, std::string_view key, int line) {
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ParseError("malformed integer '" + std::string(text) + "' for " + std::string(key),
                         line);
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

void set_grid(SpeciesGrid& g, std::string_view key, std::string_view value,
              std::string_view full, int line) {
    if (key == "nx") {
        g.nx = parse_int(value, full, line);
    } else if (key == "nv") {
        g.nv = parse_int(value, full, line);
    } else if (key == "v_lo") {
        g.v_lo = parse_double(value, full, line);
    } else if (key == "v_hi") {
        g.v_hi = parse_double(value, full, line);
    } else {
        throw ParseError("unknown key " + std::string(full), line);
    }
}

void set_value(RunConfig& cfg, std::string_view full, std::string_view value, int line) {
    const auto dot = full.rfind('.');
    if (dot == std::string_view::npos) {
        throw ParseError("key " + std::string(full) + " is outside any section", line);
    }
    const std::string_view section = full.substr(0, dot);
    const std::string_view key = full.substr(dot + 1);
    auto unknown = [&]() { throw ParseError("unknown key " + std::string(full), line); };

    if (section == "physical") {
        PhysicalParams& p = cfg.physical;
        double* slot = key == "mu"      ? &p.mu
                       : key == "eps"   ? &p.eps
                       : key == "rho0"  ? &p.rho0
                       : key == "eta"   ? &p.eta
                       : key == "sigma" ? &p.sigma
                       : key == "Z"     ? &p.Z
                                        : nullptr;
        if (slot == nullptr) {
            unknown();
        }
        *slot = parse_double(value, full, line);
    } else if (section == "grid.ions") {
        set_grid(cfg.ions, key, value, full, line);
    } else if (section == "grid.electrons") {
        set_grid(cfg.electrons, key, value, full, line);
    } else if (section == "numerics") {
        NumericsConfig& n = cfg.numerics;
        if (key == "d") {
            n.d = parse_int(value, full, line);
        } else if (key == "dt") {
            n.dt = parse_double(value, full, line);
        } else if (key == "t_final") {
            n.t_final = parse_double(value, full, line);
        } else if (key == "equilibrium_n") {
            n.equilibrium_n = parse_int(value, full, line);
        } else if (key == "v_scheme") {
            if (value == "spline") {
                n.v_scheme = VelocityScheme::PeriodicSpline;
            } else if (value == "lagrange") {
                n.v_scheme = VelocityScheme::Lagrange;
            } else {
                throw ParseError("v_scheme must be 'spline' or 'lagrange', got '" +
                                     std::string(value) + "'",
                                 line);
            }
        } else {
            unknown();
        }
    } else if (section == "io") {
        IoConfig& io = cfg.io;
        if (key == "output_dir") {
            io.output_dir = std::string(value);
        } else if (key == "snapshot_interval") {
            io.snapshot_interval = parse_double(value, full, line);
        } else if (key == "checkpoint_interval") {
            io.checkpoint_interval = parse_double(value, full, line);
        } else if (key == "resume_path") {
            io.resume_path = std::string(value);
        } else {
            unknown();
        }
    } else {
        throw ParseError("unknown section " + std::string(section), line);
    }
}

} // namespace

void RunConfig::validate() const {
    physical.validate();
    ions.phase_grid();
    electrons.phase_grid();
    if (ions.nx != electrons.nx) {
        throw ConfigError("ions and electrons must share nx");
    }
    split().validate();
    if (numerics.d + 2 > ions.nx) {
        throw ConfigError("nx must be at least d + 2");
    }
    if (numerics.equilibrium_n < 3) {
        throw ConfigError("equilibrium_n must be at least 3");
    }
    if (!(io.snapshot_interval > 0.0)) {
        throw ConfigError("snapshot_interval must be positive");
    }
    if (!(io.checkpoint_interval >= 0.0)) {
        throw ConfigError("checkpoint_interval must be non-negative");
    }
}

SplitConfig RunConfig::split() const {
    SplitConfig s;
    s.d = numerics.d;
    s.v_scheme = numerics.v_scheme;
    s.dt = numerics.dt;
    s.t_final = numerics.t_final;
    return s;
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::string section;
    int line_no = 0;
    int last_line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const auto comment = line.find_first_of("#;");
        line = trim(line.substr(0, comment));
        if (line.empty()) {
            continue;
        }
        last_line = line_no;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError("unterminated section header", line_no);
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected key = value", line_no);
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        set_value(cfg, full, value, line_no);
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ParseError(e.what(), last_line);
    }
    return cfg;
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError("override must be section.key=value: " + std::string(assignment), 0);
    }
    set_value(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), 0);
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    const PhysicalParams& p = cfg.physical;
    out << "[physical]\n"
        << "mu = " << format_double(p.mu) << "\n"
        << "eps = " << format_double(p.eps) << "\n"
        << "rho0 = " << format_double(p.rho0) << "\n"
        << "eta = " << format_double(p.eta) << "\n"
        << "sigma = " << format_double(p.sigma) << "\n"
        << "Z = " << format_double(p.Z) << "\n";
    auto grid = [&](const char* name, const SpeciesGrid& g) {
        out << "\n[" << name << "]\n"
            << "nx = " << g.nx << "\n"
            << "nv = " << g.nv << "\n"
            << "v_lo = " << format_double(g.v_lo) << "\n"
            << "v_hi = " << format_double(g.v_hi) << "\n";
    };
    grid("grid.ions", cfg.ions);
    grid("grid.electrons", cfg.electrons);
    const NumericsConfig& n = cfg.numerics;
    out << "\n[numerics]\n"
        << "d = " << n.d << "\n"
        << "dt = " << format_double(n.dt) << "\n"
        << "t_final = " << format_double(n.t_final) << "\n"
        << "v_scheme = " << (n.v_scheme == VelocityScheme::PeriodicSpline ? "spline" : "lagrange")
        << "\n"
        << "equilibrium_n = " << n.equilibrium_n << "\n";
    out << "\n[io]\n"
        << "output_dir = " << cfg.io.output_dir << "\n"
        << "snapshot_interval = " << format_double(cfg.io.snapshot_interval) << "\n"
        << "checkpoint_interval = " << format_double(cfg.io.checkpoint_interval) << "\n";
    if (!cfg.io.resume_path.empty()) {
        out << "resume_path = " << cfg.io.resume_path << "\n";
    }
    return out.str();
}

std::uint64_t config_digest(const RunConfig& cfg) {
    RunConfig canonical = cfg;
    canonical.numerics.t_final = 0.0;
    canonical.io = IoConfig{};
    const std::string text = serialize_config(canonical);
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

} // namespace sheath
