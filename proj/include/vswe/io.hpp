#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vswe/mesh.hpp"
#include "vswe/physics.hpp"
#include "vswe/state.hpp"
#include "vswe/timestep.hpp"

namespace vswe {

/// ESRI ASCII grid: six-line header followed by row-major values, top row
/// first. The single raster format of the project; DEMs, porosity maps and
/// snapshot fields all use it.
struct Raster {
    std::uint32_t ncols = 0;
    std::uint32_t nrows = 0;
    double xllcorner = 0.0;
    double yllcorner = 0.0;
    double cellsize = 0.0;
    double nodata = -9999.0;
    std::vector<double> values;  // row-major, top row first

    double at(std::uint32_t row, std::uint32_t col) const {
        return values[static_cast<std::size_t>(row) * ncols + col];
    }
    bool is_nodata(double v) const { return v == nodata; }
};

/// Parses a grid; header keys are case-insensitive, NODATA_value optional.
/// Malformed headers, non-numeric tokens and value-count mismatches raise
/// ParseError with the offending line number.
Raster read_esri_ascii(std::istream& in, const std::string& name = "<stream>");
Raster read_esri_ascii(const std::filesystem::path& path);

/// Values are written in shortest round-trip form, so read(write(r)) == r.
void write_esri_ascii(const Raster& r, std::ostream& out);
void write_esri_ascii(const Raster& r, const std::filesystem::path& path);

/// Row-major index of the raster cell containing point p (clamped to the
/// grid), for centroid sampling.
std::size_t raster_cell_index(const Raster& r, const Vec2& p);

/// How DEM NODATA cells enter the terrain: `wall` turns them into impermeable
/// high ground (z_max + 100, theta = 1); `sink` marks them as holes with free
/// discharge -- their depth is drained after every step and tallied as
/// boundary outflow by the run driver.
enum class NodataPolicy { wall, sink };

struct TerrainBuild {
    Terrain terrain;
    std::vector<CellIndex> sink_cells;
};

/// Samples rasters at cell centroids (exact for matching rectangular meshes,
/// nearest-cell for hexagonal ones). Porosity comes from the optional raster
/// or the constant fallback.
TerrainBuild terrain_from_rasters(const Mesh& mesh, const Raster& dem,
                                  const std::optional<Raster>& porosity,
                                  double porosity_const, NodataPolicy nodata);

/// (t, r) rate table from CSV text; an optional header row is skipped.
Hyetograph read_hyetograph_csv(std::istream& in, const std::string& name = "<stream>");

// --- run configuration -----------------------------------------------------

struct MeshSpec {
    MeshKind kind = MeshKind::rectangular;
    std::uint32_t nx = 0, ny = 0;
    double spacing = 0.0;
    Vec2 origin;
};

struct TerrainSpec {
    std::optional<std::string> dem_path;
    std::optional<Vec2> plane_slope;
    double plane_z0 = 0.0;
    std::optional<std::string> porosity_path;
    std::optional<double> porosity_const;
    NodataPolicy nodata = NodataPolicy::wall;
};

struct InitSpec {
    enum class Kind { lake, uniform_depth, dam_break, raster };
    Kind kind = Kind::uniform_depth;
    double w_level = 0.0;             // lake
    double h0 = 0.0;                  // uniform_depth
    double x0 = 0.0, h_left = 0.0, h_right = 0.0;  // dam_break (split along x)
    std::string h_raster;             // raster
};

struct OutputSpec {
    double t_end = 0.0;
    double snapshot_dt = 0.0;  // 0: no snapshots
    double series_dt = 0.0;    // 0: record every step
    std::string out_dir = "out";
};

/// Fully validated run description. Loading rejects unknown keys, missing
/// mandatory keys, type errors, out-of-range constants and dangling paths.
struct RunConfig {
    std::optional<MeshSpec> mesh;  // may be derived from the DEM header
    TerrainSpec terrain;
    PhysicsParams physics;
    SourceModel sources;
    StepPolicy policy;
    GhostPolicy ghost;
    InitSpec init;
    OutputSpec output;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig load_config(std::istream& in, const std::string& name,
                      const std::filesystem::path& base_dir);

/// Writes h, |v| and w grids for the current state into `dir`, file names
/// carrying the step index and time. Requires a rectangular structured mesh;
/// other meshes get a per-cell CSV dump instead.
void write_snapshot(const Mesh& mesh, const Terrain& terrain, const FieldState& state,
                    double gravity, std::uint64_t step_index,
                    const std::filesystem::path& dir);

/// PSWE_LOG verbosity (0 quiet, 1 progress, 2 chatty), read once.
int log_level();
void log_msg(int level, const std::string& text);

}  // namespace vswe
