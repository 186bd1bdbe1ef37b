#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "vswe/vec2.hpp"

namespace vswe {

using CellIndex = std::uint32_t;

/// Marker for the outer side of a boundary edge before ghosts are attached.
inline constexpr CellIndex kNoNeighbor = std::numeric_limits<CellIndex>::max();

struct Cell {
    CellIndex id = 0;
    double area = 0.0;           // m^2
    Vec2 centroid;               // polygon mass center
    std::vector<Vec2> vertices;  // counterclockwise
};

/// Oriented interface between two cells. `normal` is the unit outward normal
/// of `left`; the (right,left) view of the same interface carries -normal.
struct Edge {
    CellIndex left = 0;
    CellIndex right = kNoNeighbor;  // cell id, ghost id, or kNoNeighbor
    double length = 0.0;            // m
    Vec2 normal;                    // unit, points from left to right
    Vec2 midpoint;
};

enum class GhostAltitude { copy_owner, fixed };

struct GhostPolicy {
    GhostAltitude kind = GhostAltitude::copy_owner;
    double value = 0.0;  // bed elevation when kind == fixed

    static GhostPolicy copy_owner() { return {GhostAltitude::copy_owner, 0.0}; }
    static GhostPolicy fixed(double z) { return {GhostAltitude::fixed, z}; }
};

/// One ghost cell per boundary side: carries the owning boundary cell and the
/// assigned bed elevation rule. Ghost water depth is always zero.
struct GhostRecord {
    CellIndex owner = 0;
    GhostAltitude altitude = GhostAltitude::copy_owner;
    double z = 0.0;  // used when altitude == fixed
};

/// Reference from a cell to one of its edges. sign = +1 when the cell is the
/// edge's left side (edge normal is outward), -1 otherwise.
struct CellEdge {
    std::uint32_t edge = 0;
    double sign = 1.0;
};

enum class MeshKind { rectangular, hexagonal };

struct StructuredInfo {
    MeshKind kind = MeshKind::rectangular;
    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    double spacing = 0.0;  // cell side length
    Vec2 origin;
};

/// Conforming polygonal partition with per-cell geometry, an edge list in a
/// fixed canonical order (sorted by (min id, max id)) and optional ghost
/// cells along the boundary. Immutable after construction apart from ghost
/// altitude overrides, which are boundary-condition data.
class Mesh {
public:
    std::size_t cell_count() const { return cells_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t ghost_count() const { return ghosts_.size(); }
    bool has_ghosts() const { return !ghosts_.empty(); }

    bool is_ghost(CellIndex id) const {
        return id != kNoNeighbor && id >= cells_.size();
    }

    const Cell& cell(CellIndex id) const { return cells_[id]; }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const Cell> cells() const { return cells_; }

    const GhostRecord& ghost(CellIndex global_id) const {
        return ghosts_[global_id - cells_.size()];
    }

    std::span<const CellEdge> edges_of(CellIndex cell) const {
        const auto lo = cell_edge_offset_[cell];
        const auto hi = cell_edge_offset_[cell + 1];
        return {cell_edge_list_.data() + lo, hi - lo};
    }

    std::vector<CellIndex> neighbors(CellIndex cell) const;

    double total_area() const;

    const std::optional<StructuredInfo>& structured() const { return structured_; }

    /// Boundary-condition override for a single ghost (global id).
    void set_ghost_altitude(CellIndex global_id, double z);

    friend Mesh attach_ghosts(Mesh mesh, GhostPolicy policy);
    friend class MeshBuilder;

private:
    void build_cell_edge_index();

    std::vector<Cell> cells_;
    std::vector<Edge> edges_;
    std::vector<GhostRecord> ghosts_;
    std::vector<std::uint32_t> cell_edge_offset_;
    std::vector<CellEdge> cell_edge_list_;
    std::optional<StructuredInfo> structured_;
};

/// Regular partition generator. `spacing` is the square side for rectangular
/// meshes and the hexagon side for hexagonal ones. Boundary sides are left
/// open (right == kNoNeighbor) until attach_ghosts.
Mesh build_structured_mesh(MeshKind kind, std::uint32_t nx, std::uint32_t ny,
                           double spacing, Vec2 origin = {0.0, 0.0});

/// Creates one ghost per boundary side. Fails if ghosts are already attached.
Mesh attach_ghosts(Mesh mesh, GhostPolicy policy);

/// min_i { area_i / perimeter_i }, boundary edges included.
double min_area_to_perimeter(const Mesh& mesh);

/// Debug dump: one CSV row per cell (id, centroid, area).
void write_mesh_csv(const Mesh& mesh, std::ostream& out);

}  // namespace vswe
