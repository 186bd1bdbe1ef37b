#include "vswe/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "vswe/errors.hpp"
#include "vswe/fmt.hpp"

namespace vswe {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_double_token(std::string_view tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

bool parse_uint_token(std::string_view tok, std::uint32_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
    throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

// --- ESRI ASCII grid ---------------------------------------------------------

Raster read_esri_ascii(std::istream& in, const std::string& name) {
    Raster r;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    bool in_header = true;

    while (in_header && std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) continue;
        if (!std::isalpha(static_cast<unsigned char>(t.front()))) break;  // data begins
        const auto tokens = split_ws(t);
        if (tokens.size() != 2)
            fail(name, lineno, "malformed header line (expected 'key value')");
        const std::string key = lower(std::string(tokens[0]));
        double val = 0.0;
        if (!parse_double_token(tokens[1], val))
            fail(name, lineno, "non-numeric header value for '" + key + "'");
        if (key == "ncols" || key == "nrows") {
            std::uint32_t n = 0;
            if (!parse_uint_token(tokens[1], n) || n == 0)
                fail(name, lineno, "'" + key + "' must be a positive integer");
            (key == "ncols" ? r.ncols : r.nrows) = n;
        } else if (key == "xllcorner") {
            r.xllcorner = val;
        } else if (key == "yllcorner") {
            r.yllcorner = val;
        } else if (key == "cellsize") {
            if (!(val > 0.0)) fail(name, lineno, "cellsize must be positive");
            r.cellsize = val;
        } else if (key == "nodata_value") {
            r.nodata = val;
        } else {
            fail(name, lineno, "unknown header key '" + key + "'");
        }
        seen.insert(key);
    }
    for (const char* key : {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize"})
        if (!seen.count(key)) fail(name, lineno, std::string("missing header key '") + key + "'");

    const std::size_t expected = static_cast<std::size_t>(r.ncols) * r.nrows;
    r.values.reserve(expected);
    // `line` still holds the first data line when the header loop broke on it.
    do {
        const auto t = trim(line);
        for (const auto tok : split_ws(t)) {
            double v = 0.0;
            if (!parse_double_token(tok, v))
                fail(name, lineno, "non-numeric data token '" + std::string(tok) + "'");
            r.values.push_back(v);
        }
        if (!std::getline(in, line)) break;
        ++lineno;
    } while (true);

    if (r.values.size() != expected)
        fail(name, lineno,
             "value count mismatch: expected " + std::to_string(expected) + ", got " +
                 std::to_string(r.values.size()));
    return r;
}

Raster read_esri_ascii(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open raster file: " + path.string());
    return read_esri_ascii(in, path.string());
}

void write_esri_ascii(const Raster& r, std::ostream& out) {
    std::string buf;
    buf += "ncols ";
    append_int(buf, r.ncols);
    buf += "\nnrows ";
    append_int(buf, r.nrows);
    buf += "\nxllcorner ";
    append_double(buf, r.xllcorner);
    buf += "\nyllcorner ";
    append_double(buf, r.yllcorner);
    buf += "\ncellsize ";
    append_double(buf, r.cellsize);
    buf += "\nNODATA_value ";
    append_double(buf, r.nodata);
    buf += '\n';
    for (std::uint32_t row = 0; row < r.nrows; ++row) {
        for (std::uint32_t col = 0; col < r.ncols; ++col) {
            if (col) buf += ' ';
            append_double(buf, r.at(row, col));
        }
        buf += '\n';
    }
    out << buf;
}

void write_esri_ascii(const Raster& r, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    write_esri_ascii(r, out);
}

// --- terrain from rasters ----------------------------------------------------

std::size_t raster_cell_index(const Raster& r, const Vec2& p) {
    const auto clamp_idx = [](double x, std::uint32_t n) {
        const double f = std::floor(x);
        if (f < 0.0) return std::uint32_t{0};
        if (f >= n) return n - 1;
        return static_cast<std::uint32_t>(f);
    };
    const std::uint32_t col = clamp_idx((p.x - r.xllcorner) / r.cellsize, r.ncols);
    const std::uint32_t from_bottom = clamp_idx((p.y - r.yllcorner) / r.cellsize, r.nrows);
    const std::uint32_t row = r.nrows - 1 - from_bottom;
    return static_cast<std::size_t>(row) * r.ncols + col;
}

TerrainBuild terrain_from_rasters(const Mesh& mesh, const Raster& dem,
                                  const std::optional<Raster>& porosity,
                                  double porosity_const, NodataPolicy nodata) {
    double z_min = std::numeric_limits<double>::infinity();
    double z_max = -std::numeric_limits<double>::infinity();
    for (double v : dem.values) {
        if (dem.is_nodata(v)) continue;
        z_min = std::min(z_min, v);
        z_max = std::max(z_max, v);
    }
    if (!(z_min <= z_max))
        throw ParseError("DEM contains no valid cells");

    TerrainBuild out;
    out.terrain.z.resize(mesh.cell_count());
    out.terrain.theta.resize(mesh.cell_count());
    for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
        const Vec2 c = mesh.cell(i).centroid;
        const double zv = dem.values[raster_cell_index(dem, c)];
        if (dem.is_nodata(zv)) {
            if (nodata == NodataPolicy::wall) {
                out.terrain.z[i] = z_max + 100.0;
            } else {
                out.terrain.z[i] = z_min - 100.0;
                out.sink_cells.push_back(i);
            }
            out.terrain.theta[i] = 1.0;
            continue;
        }
        out.terrain.z[i] = zv;
        double th = porosity_const;
        if (porosity) {
            const double pv = porosity->values[raster_cell_index(*porosity, c)];
            th = porosity->is_nodata(pv) ? 1.0 : pv;
        }
        if (!(th > 0.0 && th <= 1.0))
            throw ParseError("porosity value " + fmt_double(th) + " outside (0, 1]");
        out.terrain.theta[i] = th;
    }
    return out;
}

Hyetograph read_hyetograph_csv(std::istream& in, const std::string& name) {
    Hyetograph h;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string cleaned = line;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        const auto tokens = split_ws(trim(cleaned));
        if (tokens.empty()) continue;
        double t = 0.0, r = 0.0;
        if (!parse_double_token(tokens[0], t)) {
            if (lineno == 1) continue;  // header row
            fail(name, lineno, "non-numeric time value");
        }
        if (tokens.size() != 2 || !parse_double_token(tokens[1], r))
            fail(name, lineno, "expected 't,rate' pair");
        if (!h.t.empty() && t <= h.t.back())
            fail(name, lineno, "time column must be strictly increasing");
        if (r < 0.0) fail(name, lineno, "rain rate must be nonnegative");
        h.t.push_back(t);
        h.r.push_back(r);
    }
    return h;
}

// --- run configuration -------------------------------------------------------

namespace {

struct IniEntry {
    std::string value;
    int line = 0;
};

/// Flat key-value model of the config file; tracks consumption so unknown
/// keys can be rejected after all readers ran.
class KeyTable {
public:
    KeyTable(std::istream& in, std::string name) : name_(std::move(name)) {
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string_view t = trim(line);
            if (const auto hash = t.find('#'); hash != std::string_view::npos)
                t = trim(t.substr(0, hash));
            if (t.empty()) continue;
            if (t.front() == '[') {
                if (t.back() != ']') fail(name_, lineno, "unterminated section header");
                section = std::string(trim(t.substr(1, t.size() - 2)));
                if (section.empty()) fail(name_, lineno, "empty section name");
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string_view::npos)
                fail(name_, lineno, "expected 'key = value'");
            const std::string key =
                section + "." + std::string(trim(t.substr(0, eq)));
            const std::string value{trim(t.substr(eq + 1))};
            if (value.empty()) fail(name_, lineno, "empty value for '" + key + "'");
            if (entries_.count(key))
                fail(name_, lineno, "duplicate key '" + key + "'");
            entries_[key] = IniEntry{value, lineno};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> get(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        consumed_.insert(key);
        return it->second.value;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) throw ParseError(name_ + ": missing mandatory key '" + key + "'");
        return *v;
    }

    double get_double(const std::string& key, double fallback) {
        const auto v = get(key);
        return v ? to_double(key, *v) : fallback;
    }

    double require_double(const std::string& key) { return to_double(key, require(key)); }

    std::uint32_t require_uint(const std::string& key) {
        const std::string v = require(key);
        std::uint32_t out = 0;
        if (!parse_uint_token(v, out))
            throw ParseError(name_ + ": key '" + key + "' expects a nonnegative integer, got '" + v + "'");
        return out;
    }

    bool get_bool(const std::string& key, bool fallback) {
        const auto v = get(key);
        if (!v) return fallback;
        const std::string s = lower(*v);
        if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
        if (s == "off" || s == "false" || s == "0" || s == "no") return false;
        throw ParseError(name_ + ": key '" + key + "' expects a boolean, got '" + *v + "'");
    }

    void reject_unknown() const {
        for (const auto& [key, entry] : entries_)
            if (!consumed_.count(key))
                fail(name_, entry.line, "unknown key '" + key + "'");
    }

    const std::string& name() const { return name_; }

private:
    double to_double(const std::string& key, const std::string& v) const {
        double out = 0.0;
        if (!parse_double_token(v, out))
            throw ParseError(name_ + ": key '" + key + "' expects a number, got '" + v + "'");
        return out;
    }

    std::string name_;
    std::map<std::string, IniEntry> entries_;
    std::set<std::string> consumed_;
};

std::string resolve_path(const std::filesystem::path& base, const std::string& p,
                         const std::string& cfg_name) {
    std::filesystem::path path(p);
    if (path.is_relative()) path = base / path;
    if (!std::filesystem::exists(path))
        throw ParseError(cfg_name + ": referenced file does not exist: " + path.string());
    return path.string();
}

}  // namespace

RunConfig load_config(std::istream& in, const std::string& name,
                      const std::filesystem::path& base_dir) {
    KeyTable t(in, name);
    RunConfig cfg;

    // [mesh]
    const bool has_mesh = t.has("mesh.nx") || t.has("mesh.ny") || t.has("mesh.kind") ||
                          t.has("mesh.spacing");
    if (has_mesh) {
        MeshSpec m;
        const std::string kind = lower(t.get("mesh.kind").value_or("rect"));
        if (kind == "rect" || kind == "rectangular")
            m.kind = MeshKind::rectangular;
        else if (kind == "hex" || kind == "hexagonal")
            m.kind = MeshKind::hexagonal;
        else
            throw ParseError(name + ": mesh.kind must be 'rect' or 'hex'");
        m.nx = t.require_uint("mesh.nx");
        m.ny = t.require_uint("mesh.ny");
        m.spacing = t.require_double("mesh.spacing");
        if (m.nx < 1 || m.ny < 1 || !(m.spacing > 0.0))
            throw ParseError(name + ": mesh dimensions must be positive");
        m.origin = {t.get_double("mesh.origin_x", 0.0), t.get_double("mesh.origin_y", 0.0)};
        cfg.mesh = m;
    }

    // [terrain]
    if (const auto dem = t.get("terrain.dem"))
        cfg.terrain.dem_path = resolve_path(base_dir, *dem, name);
    const bool has_plane = t.has("terrain.plane_sx") || t.has("terrain.plane_sy");
    if (has_plane) {
        cfg.terrain.plane_slope = Vec2{t.get_double("terrain.plane_sx", 0.0),
                                       t.get_double("terrain.plane_sy", 0.0)};
        cfg.terrain.plane_z0 = t.get_double("terrain.plane_z0", 0.0);
    }
    if (cfg.terrain.dem_path && has_plane)
        throw ParseError(name + ": give either terrain.dem or terrain.plane_*, not both");
    if (!cfg.terrain.dem_path && !has_plane)
        throw ParseError(name + ": missing mandatory key 'terrain.dem' (or terrain.plane_*)");
    if (!cfg.terrain.dem_path && !cfg.mesh)
        throw ParseError(name + ": [mesh] is mandatory without a DEM raster");

    if (const auto pr = t.get("terrain.porosity_raster"))
        cfg.terrain.porosity_path = resolve_path(base_dir, *pr, name);
    if (t.has("terrain.porosity"))
        cfg.terrain.porosity_const = t.require_double("terrain.porosity");
    if (cfg.terrain.porosity_path && cfg.terrain.porosity_const)
        throw ParseError(name +
                         ": terrain.porosity and terrain.porosity_raster are ambiguous; give one");
    if (!cfg.terrain.porosity_path && !cfg.terrain.porosity_const)
        throw ParseError(name + ": missing mandatory key 'terrain.porosity' (or porosity_raster)");
    if (cfg.terrain.porosity_const &&
        !(*cfg.terrain.porosity_const > 0.0 && *cfg.terrain.porosity_const <= 1.0))
        throw ParseError(name + ": terrain.porosity must lie in (0, 1]");
    const std::string nodata = lower(t.get("terrain.nodata").value_or("wall"));
    if (nodata == "wall")
        cfg.terrain.nodata = NodataPolicy::wall;
    else if (nodata == "sink")
        cfg.terrain.nodata = NodataPolicy::sink;
    else
        throw ParseError(name + ": terrain.nodata must be 'wall' or 'sink'");

    // [physics]
    cfg.physics.gravity = t.get_double("physics.gravity", kDefaultGravity);
    cfg.physics.friction.alpha_p = t.get_double("physics.alpha_p", 0.0);
    cfg.physics.friction.alpha_s = t.get_double("physics.alpha_s", 0.0);
    if (!(cfg.physics.gravity > 0.0) || cfg.physics.friction.alpha_p < 0.0 ||
        cfg.physics.friction.alpha_s < 0.0)
        throw ParseError(name + ": physics constants out of range");

    // [source]
    if (const auto csv = t.get("source.rain_csv")) {
        const std::string path = resolve_path(base_dir, *csv, name);
        std::ifstream rin(path);
        cfg.sources.rain = RainModel::from_series(read_hyetograph_csv(rin, path));
    } else {
        const double r = t.get_double("source.rain", 0.0);
        if (r < 0.0) throw ParseError(name + ": source.rain must be nonnegative");
        cfg.sources.rain = RainModel::constant(r);
    }
    const std::string inf = lower(t.get("source.infiltration").value_or("none"));
    const bool gated = t.get_bool("source.h_gated", true);
    if (inf == "none") {
        cfg.sources.infiltration = InfiltrationModel::none();
    } else if (inf == "constant") {
        const double iota = t.require_double("source.iota");
        if (iota < 0.0) throw ParseError(name + ": source.iota must be nonnegative");
        cfg.sources.infiltration = InfiltrationModel::constant(iota, gated);
    } else if (inf == "horton") {
        const double f0 = t.require_double("source.f0");
        const double fc = t.require_double("source.fc");
        const double k = t.require_double("source.k");
        if (f0 < fc || fc < 0.0 || k < 0.0)
            throw ParseError(name + ": horton parameters need f0 >= fc >= 0 and k >= 0");
        cfg.sources.infiltration = InfiltrationModel::horton(f0, fc, k, gated);
    } else {
        throw ParseError(name + ": source.infiltration must be none, constant or horton");
    }

    // [timestep]
    cfg.policy.safety = t.get_double("timestep.safety", 0.9);
    if (!(cfg.policy.safety > 0.0 && cfg.policy.safety <= 1.0))
        throw ParseError(name + ": timestep.safety must lie in (0, 1]");
    const std::string bound = lower(t.get("timestep.bound").value_or("min"));
    if (bound == "positivity")
        cfg.policy.bound = DtBound::positivity;
    else if (bound == "cfl")
        cfg.policy.bound = DtBound::cfl;
    else if (bound == "min")
        cfg.policy.bound = DtBound::min_of_both;
    else
        throw ParseError(name + ": timestep.bound must be positivity, cfl or min");
    cfg.policy.dt_max = t.get_double("timestep.dt_max", 1.0);
    cfg.policy.dt_min = t.get_double("timestep.dt_min", 0.0);
    if (!(cfg.policy.dt_max > 0.0) || cfg.policy.dt_min < 0.0 ||
        cfg.policy.dt_min > cfg.policy.dt_max)
        throw ParseError(name + ": need 0 <= dt_min <= dt_max and dt_max > 0");
    cfg.policy.viscosity = t.get_bool("timestep.viscosity", true);

    // [boundary]
    const std::string ghost = lower(t.get("boundary.ghost").value_or("copy_owner"));
    if (ghost == "copy_owner") {
        cfg.ghost = GhostPolicy::copy_owner();
    } else if (ghost == "fixed") {
        cfg.ghost = GhostPolicy::fixed(t.require_double("boundary.ghost_z"));
    } else {
        throw ParseError(name + ": boundary.ghost must be copy_owner or fixed");
    }

    // [init]
    const std::string init = lower(t.require("init.kind"));
    if (init == "lake") {
        cfg.init.kind = InitSpec::Kind::lake;
        cfg.init.w_level = t.require_double("init.w_level");
    } else if (init == "uniform_depth") {
        cfg.init.kind = InitSpec::Kind::uniform_depth;
        cfg.init.h0 = t.require_double("init.h0");
        if (cfg.init.h0 < 0.0) throw ParseError(name + ": init.h0 must be nonnegative");
    } else if (init == "dam_break") {
        cfg.init.kind = InitSpec::Kind::dam_break;
        cfg.init.x0 = t.require_double("init.x0");
        cfg.init.h_left = t.require_double("init.h_left");
        cfg.init.h_right = t.require_double("init.h_right");
        if (cfg.init.h_left < 0.0 || cfg.init.h_right < 0.0)
            throw ParseError(name + ": dam-break depths must be nonnegative");
    } else if (init == "raster") {
        cfg.init.kind = InitSpec::Kind::raster;
        cfg.init.h_raster = resolve_path(base_dir, t.require("init.h_raster"), name);
    } else {
        throw ParseError(name + ": init.kind must be lake, uniform_depth, dam_break or raster");
    }

    // [run]
    cfg.output.t_end = t.require_double("run.t_end");
    if (!(cfg.output.t_end > 0.0)) throw ParseError(name + ": run.t_end must be positive");
    cfg.output.snapshot_dt = t.get_double("run.snapshot_dt", 0.0);
    cfg.output.series_dt = t.get_double("run.series_dt", 0.0);
    if (cfg.output.snapshot_dt < 0.0 || cfg.output.series_dt < 0.0)
        throw ParseError(name + ": output cadences must be nonnegative");
    cfg.output.out_dir = t.get("run.out").value_or("out");

    t.reject_unknown();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path.string());
    return load_config(in, path.string(), path.parent_path());
}

// --- snapshots -----------------------------------------------------------------

namespace {

Raster field_to_raster(const Mesh& mesh, const std::vector<double>& per_cell) {
    const StructuredInfo& info = *mesh.structured();
    Raster r;
    r.ncols = info.nx;
    r.nrows = info.ny;
    r.cellsize = info.spacing;
    r.xllcorner = info.origin.x;
    r.yllcorner = info.origin.y;
    r.values.resize(per_cell.size());
    for (std::uint32_t row = 0; row < info.ny; ++row) {
        const std::uint32_t iy = info.ny - 1 - row;  // raster rows start at the top
        for (std::uint32_t col = 0; col < info.nx; ++col)
            r.values[static_cast<std::size_t>(row) * info.nx + col] =
                per_cell[static_cast<std::size_t>(iy) * info.nx + col];
    }
    return r;
}

std::string snapshot_name(const std::string& field, std::uint64_t step, double time,
                          const char* ext) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "%06llu", static_cast<unsigned long long>(step));
    return field + "_" + idx + "_t" + fmt_double(time) + ext;
}

}  // namespace

void write_snapshot(const Mesh& mesh, const Terrain& terrain, const FieldState& state,
                    double gravity, std::uint64_t step_index,
                    const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const bool rect = mesh.structured() &&
                      mesh.structured()->kind == MeshKind::rectangular;
    const std::vector<double> w = free_surface(state, terrain, gravity);
    if (rect) {
        std::vector<double> vmag(mesh.cell_count());
        for (std::size_t i = 0; i < vmag.size(); ++i) vmag[i] = norm(state.v[i]);
        write_esri_ascii(field_to_raster(mesh, state.h),
                         dir / snapshot_name("h", step_index, state.time, ".asc"));
        write_esri_ascii(field_to_raster(mesh, vmag),
                         dir / snapshot_name("vmag", step_index, state.time, ".asc"));
        write_esri_ascii(field_to_raster(mesh, w),
                         dir / snapshot_name("w", step_index, state.time, ".asc"));
        return;
    }
    // Non-rectangular meshes get a per-cell table instead of grids.
    std::ofstream out(dir / snapshot_name("cells", step_index, state.time, ".csv"));
    std::string buf = "id,x,y,h,vx,vy,w\n";
    for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
        append_int(buf, i);
        buf += ',';
        append_double(buf, mesh.cell(i).centroid.x);
        buf += ',';
        append_double(buf, mesh.cell(i).centroid.y);
        buf += ',';
        append_double(buf, state.h[i]);
        buf += ',';
        append_double(buf, state.v[i].x);
        buf += ',';
        append_double(buf, state.v[i].y);
        buf += ',';
        append_double(buf, w[i]);
        buf += '\n';
    }
    out << buf;
}

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("PSWE_LOG");
        if (!env) return 0;
        return std::atoi(env);
    }();
    return level;
}

void log_msg(int level, const std::string& text) {
    if (log_level() >= level) std::cerr << "[vswe] " << text << "\n";
}

}  // namespace vswe
