#include "sheath/io.hpp"

#include "sheath/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace sheath {

namespace fs = std::filesystem;

std::string format_real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

void append_real(std::string& out, double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    out.append(buf, ptr);
}

std::ofstream open_for_write(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void write_all(const fs::path& path, const std::string& text) {
    std::ofstream out = open_for_write(path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Cursor over a text file: "# key value" headers, then numeric tokens.
class TextReader {
  public:
    TextReader(std::string text, fs::path path) : text_(std::move(text)), path_(std::move(path)) {}

    std::map<std::string, std::string> headers() {
        std::map<std::string, std::string> out;
        while (pos_ < text_.size() && text_[pos_] == '#') {
            const auto eol = text_.find('\n', pos_);
            std::string line = text_.substr(pos_ + 1, eol == std::string::npos ? std::string::npos
                                                                                 : eol - pos_ - 1);
            pos_ = eol == std::string::npos ? text_.size() : eol + 1;
            ++line_;
            std::istringstream ls(line);
            std::string key;
            std::string value;
            if (ls >> key) {
                std::getline(ls >> std::ws, value);
                out[key] = value;
            }
        }
        return out;
    }

    std::string_view token() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("unexpected end of file");
        }
        return std::string_view(text_).substr(start, pos_ - start);
    }

    double real() {
        const auto tok = token();
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            fail("malformed number '" + std::string(tok) + "'");
        }
        return v;
    }

    void reals(std::vector<double>& out, std::size_t count) {
        out.resize(count);
        for (auto& v : out) {
            v = real();
        }
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw IoError(path_.string() + ": line " + std::to_string(line_) + ": " + what);
    }

  private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') {
                ++line_;
            }
            ++pos_;
        }
    }

    std::string text_;
    fs::path path_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

const std::string& require(const std::map<std::string, std::string>& h, const std::string& key,
                           const fs::path& path) {
    const auto it = h.find(key);
    if (it == h.end()) {
        throw IoError(path.string() + ": missing header '" + key + "'");
    }
    return it->second;
}

double header_real(const std::map<std::string, std::string>& h, const std::string& key,
                   const fs::path& path) {
    const std::string& s = require(h, key, path);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError(path.string() + ": malformed header '" + key + "'");
    }
    return v;
}

long long header_int(const std::map<std::string, std::string>& h, const std::string& key,
                     const fs::path& path) {
    const std::string& s = require(h, key, path);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw IoError(path.string() + ": malformed header '" + key + "'");
    }
    return v;
}

std::string record_row(const DiagnosticsRecord& r) {
    std::string line;
    const double fields[] = {r.t,
                             r.entry_current,
                             r.energy.total(),
                             r.energy.kinetic,
                             r.energy.field,
                             r.electrons.total_density,
                             r.ions.total_density,
                             r.electrons.l1,
                             r.ions.l1,
                             r.electrons.l2,
                             r.ions.l2};
    for (std::size_t k = 0; k < std::size(fields); ++k) {
        if (k > 0) {
            line += ',';
        }
        append_real(line, fields[k]);
    }
    line += '\n';
    return line;
}

void append_matrix(std::string& out, std::span<const double> values, std::size_t row_length) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        append_real(out, values[k]);
        out += (k + 1) % row_length == 0 ? '\n' : ' ';
    }
}

std::string grid_header(const PhaseGrid& g) {
    std::string h;
    h += "# nx " + std::to_string(g.x.n_cells) + "\n";
    h += "# x_lo " + format_real(g.x.lo) + "\n";
    h += "# x_hi " + format_real(g.x.hi) + "\n";
    h += "# nv " + std::to_string(g.v.n_cells) + "\n";
    h += "# v_lo " + format_real(g.v.lo) + "\n";
    h += "# v_hi " + format_real(g.v.hi) + "\n";
    return h;
}

} // namespace

TimeseriesWriter::TimeseriesWriter(const fs::path& path) : path_(path), out_(open_for_write(path)) {
    out_ << timeseries_header << '\n';
}

void TimeseriesWriter::append(const DiagnosticsRecord& r) {
    out_ << record_row(r);
    out_.flush();
    if (!out_) {
        throw IoError("failed writing " + path_.string());
    }
}

void write_timeseries(const fs::path& path, const std::vector<DiagnosticsRecord>& records) {
    std::string text = std::string(timeseries_header) + "\n";
    for (const auto& r : records) {
        text += record_row(r);
    }
    write_all(path, text);
}

std::vector<DiagnosticsRecord> read_timeseries(const fs::path& path) {
    std::istringstream in(read_all(path));
    std::string line;
    std::getline(in, line);
    if (line != timeseries_header) {
        throw IoError(path.string() + ": unexpected time series header");
    }
    std::vector<DiagnosticsRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        double v[11];
        std::size_t start = 0;
        for (int k = 0; k < 11; ++k) {
            const auto comma = line.find(',', start);
            const std::string_view field =
                std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                  : comma - start);
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[k]);
            if (ec != std::errc() || ptr != field.data() + field.size()) {
                throw IoError(path.string() + ": line " + std::to_string(line_no) +
                              ": malformed value");
            }
            start = comma == std::string::npos ? line.size() + 1 : comma + 1;
        }
        DiagnosticsRecord r;
        r.t = v[0];
        r.entry_current = v[1];
        r.energy.kinetic = v[3];
        r.energy.field = v[4];
        r.electrons = {v[5], v[7], v[9]};
        r.ions = {v[6], v[8], v[10]};
        out.push_back(r);
    }
    return out;
}

std::string snapshot_tag(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "t%013.6f", t);
    return buf;
}

SnapshotFiles write_snapshot(const fs::path& dir, const SimState& state, double t) {
    return write_snapshot(dir, state, snapshot_tag(t));
}

SnapshotFiles write_snapshot(const fs::path& dir, const SimState& state, const std::string& tag) {
    SnapshotFiles files{dir / ("ions_" + tag + ".snap"), dir / ("electrons_" + tag + ".snap"),
                        dir / ("field_" + tag + ".snap")};
    auto species_file = [&](const fs::path& path, const char* name, const DistributionField& f) {
        std::string text = "# sheathsim snapshot\n# species " + std::string(name) + "\n";
        text += "# t " + format_real(state.time) + "\n# step " + std::to_string(state.step) + "\n";
        text += grid_header(f.grid());
        text.reserve(text.size() + f.values().size() * 24);
        append_matrix(text, f.values(), f.row_length());
        write_all(path, text);
    };
    species_file(files.ions, "ions", state.f_i);
    species_file(files.electrons, "electrons", state.f_e);

    std::string text = "# sheathsim snapshot\n# species field\n";
    text += "# t " + format_real(state.time) + "\n# step " + std::to_string(state.step) + "\n";
    const Mesh1D& x = state.f_i.grid().x;
    text += "# nx " + std::to_string(x.n_cells) + "\n# x_lo " + format_real(x.lo) + "\n# x_hi " +
            format_real(x.hi) + "\n";
    append_matrix(text, state.efield, state.efield.size());
    write_all(files.field, text);
    return files;
}

Snapshot read_snapshot(const fs::path& path) {
    TextReader reader(read_all(path), path);
    const auto h = reader.headers();
    Snapshot s;
    s.species = require(h, "species", path);
    s.t = header_real(h, "t", path);
    s.step = header_int(h, "step", path);
    s.grid.x = Mesh1D::make(header_real(h, "x_lo", path), header_real(h, "x_hi", path),
                            static_cast<int>(header_int(h, "nx", path)));
    std::size_t count = static_cast<std::size_t>(s.grid.x.size());
    if (s.species != "field") {
        s.grid.v = Mesh1D::make(header_real(h, "v_lo", path), header_real(h, "v_hi", path),
                                static_cast<int>(header_int(h, "nv", path)));
        count *= static_cast<std::size_t>(s.grid.v.size());
    }
    reader.reals(s.values, count);
    if (!reader.at_end()) {
        reader.fail("trailing data");
    }
    return s;
}

SimState read_snapshot_state(const SnapshotFiles& files) {
    auto load = [](const fs::path& path) {
        Snapshot s = read_snapshot(path);
        DistributionField f(s.grid);
        std::copy(s.values.begin(), s.values.end(), f.values().begin());
        return std::pair{std::move(f), s};
    };
    auto [f_i, si] = load(files.ions);
    auto [f_e, se] = load(files.electrons);
    Snapshot field = read_snapshot(files.field);
    if (si.t != se.t || si.t != field.t) {
        throw IoError("snapshot files disagree on the time: " + files.ions.string());
    }
    SimState state;
    state.f_i = std::move(f_i);
    state.f_e = std::move(f_e);
    state.efield = std::move(field.values);
    state.time = si.t;
    state.step = si.step;
    state.validate();
    return state;
}

void write_equilibrium(const fs::path& path, const EquilibriumSolution& eq, const PhysicalParams& p) {
    std::string text = "# sheathsim equilibrium\n";
    text += "# N " + std::to_string(eq.grid_n) + "\n";
    text += "# phi_w " + format_real(eq.phi_w) + "\n";
    text += "# n0 " + format_real(eq.n0) + "\n";
    text += "# eps " + format_real(p.eps) + "\n";
    text += "# mu " + format_real(p.mu) + "\n";
    text += "# rho0 " + format_real(p.rho0) + "\n";
    text += "# eta " + format_real(p.eta) + "\n";
    text += "# sigma " + format_real(p.sigma) + "\n";
    text += "# Z " + format_real(p.Z) + "\n";
    text += "# columns x phi E\n";
    for (int k = 0; k <= eq.grid_n; ++k) {
        append_real(text, static_cast<double>(k) / eq.grid_n);
        text += ' ';
        append_real(text, eq.phi[static_cast<std::size_t>(k)]);
        text += ' ';
        append_real(text, eq.efield[static_cast<std::size_t>(k)]);
        text += '\n';
    }
    write_all(path, text);
}

EquilibriumFile read_equilibrium(const fs::path& path) {
    TextReader reader(read_all(path), path);
    const auto h = reader.headers();
    EquilibriumFile out;
    PhysicalParams& p = out.params;
    p.eps = header_real(h, "eps", path);
    p.mu = header_real(h, "mu", path);
    p.rho0 = header_real(h, "rho0", path);
    p.eta = header_real(h, "eta", path);
    p.sigma = header_real(h, "sigma", path);
    p.Z = header_real(h, "Z", path);
    EquilibriumSolution& eq = out.solution;
    eq.grid_n = static_cast<int>(header_int(h, "N", path));
    eq.phi_w = header_real(h, "phi_w", path);
    eq.n0 = header_real(h, "n0", path);
    if (eq.grid_n < 3) {
        reader.fail("N must be at least 3");
    }
    const auto n = static_cast<std::size_t>(eq.grid_n) + 1;
    eq.phi.resize(n);
    eq.efield.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        reader.real();
        eq.phi[k] = reader.real();
        eq.efield[k] = reader.real();
    }
    if (!reader.at_end()) {
        reader.fail("trailing data");
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (eq.phi[k + 1] > eq.phi[k]) {
            eq.monotone = false;
        }
    }
    return out;
}

void write_checkpoint(const fs::path& path, const Checkpoint& cp) {
    const SimState& s = cp.state;
    std::string text = "# sheathsim checkpoint\n";
    text += "# digest " + std::to_string(cp.digest) + "\n";
    text += "# step " + std::to_string(s.step) + "\n";
    text += "# t " + format_real(s.time) + "\n";
    text += "# nx " + std::to_string(s.f_i.nx()) + "\n";
    text += "# ion_nv " + std::to_string(s.f_i.nv()) + "\n";
    text += "# ion_v_lo " + format_real(s.f_i.grid().v.lo) + "\n";
    text += "# ion_v_hi " + format_real(s.f_i.grid().v.hi) + "\n";
    text += "# electron_nv " + std::to_string(s.f_e.nv()) + "\n";
    text += "# electron_v_lo " + format_real(s.f_e.grid().v.lo) + "\n";
    text += "# electron_v_hi " + format_real(s.f_e.grid().v.hi) + "\n";
    auto block = [&](const char* name, std::span<const double> values, std::size_t row) {
        text += "@";
        text += name;
        text += " " + std::to_string(values.size()) + "\n";
        append_matrix(text, values, row);
    };
    block("ions", s.f_i.values(), s.f_i.row_length());
    block("electrons", s.f_e.values(), s.f_e.row_length());
    block("efield", s.efield, s.efield.size());
    block("inflow_ions", cp.boundary.ions.values, cp.boundary.ions.values.size());
    block("inflow_electrons", cp.boundary.electrons.values, cp.boundary.electrons.values.size());

    // Write then rename so an interrupted write never leaves a truncated checkpoint.
    fs::path tmp = path;
    tmp += ".tmp";
    write_all(tmp, text);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
    }
}

Checkpoint read_checkpoint(const fs::path& path) {
    TextReader reader(read_all(path), path);
    const auto h = reader.headers();
    Checkpoint cp;
    cp.digest = std::stoull(require(h, "digest", path));
    const int nx = static_cast<int>(header_int(h, "nx", path));
    const PhaseGrid ion_grid = make_phase_grid(nx, static_cast<int>(header_int(h, "ion_nv", path)),
                                               header_real(h, "ion_v_lo", path),
                                               header_real(h, "ion_v_hi", path));
    const PhaseGrid electron_grid =
        make_phase_grid(nx, static_cast<int>(header_int(h, "electron_nv", path)),
                        header_real(h, "electron_v_lo", path), header_real(h, "electron_v_hi", path));
    SimState& s = cp.state;
    s.step = header_int(h, "step", path);
    s.time = header_real(h, "t", path);
    s.f_i = DistributionField(ion_grid);
    s.f_e = DistributionField(electron_grid);

    auto block = [&](const char* name, std::span<double> out) {
        const auto label = reader.token();
        if (label != std::string("@") + name) {
            reader.fail("expected block @" + std::string(name));
        }
        const double count = reader.real();
        if (count != static_cast<double>(out.size())) {
            reader.fail("block @" + std::string(name) + " has the wrong size");
        }
        for (auto& v : out) {
            v = reader.real();
        }
    };
    block("ions", s.f_i.values());
    block("electrons", s.f_e.values());
    s.efield.resize(static_cast<std::size_t>(nx) + 1);
    block("efield", s.efield);
    cp.boundary.ions.values.resize(s.f_i.row_length());
    cp.boundary.electrons.values.resize(s.f_e.row_length());
    block("inflow_ions", cp.boundary.ions.values);
    block("inflow_electrons", cp.boundary.electrons.values);
    if (!reader.at_end()) {
        reader.fail("trailing data");
    }
    return cp;
}

} // namespace sheath
