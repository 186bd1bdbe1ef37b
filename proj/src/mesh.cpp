#include "vswe/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "vswe/fmt.hpp"

namespace vswe {

namespace {

// Shoelace area and mass center, evaluated relative to the first vertex so
// large absolute coordinates (UTM-style origins) do not cancel catastrophically.
void polygon_geometry(const std::vector<Vec2>& vs, double& area, Vec2& centroid) {
    const Vec2 ref = vs.front();
    double a2 = 0.0;       // twice the signed area
    Vec2 c{0.0, 0.0};      // centroid accumulator (times 6*area)
    for (std::size_t k = 0; k < vs.size(); ++k) {
        const Vec2 p = vs[k] - ref;
        const Vec2 q = vs[(k + 1) % vs.size()] - ref;
        const double cross = p.x * q.y - p.y * q.x;
        a2 += cross;
        c += (p + q) * cross;
    }
    if (a2 <= 0.0)
        throw std::logic_error("mesh: polygon vertices must be counterclockwise");
    area = 0.5 * a2;
    centroid = ref + c * (1.0 / (3.0 * a2));
}

Edge make_edge(CellIndex left, CellIndex right, const Vec2& a, const Vec2& b) {
    Edge e;
    e.left = left;
    e.right = right;
    const Vec2 t = b - a;
    e.length = std::sqrt(t.x * t.x + t.y * t.y);
    e.normal = rot_cw(t) * (1.0 / e.length);
    e.midpoint = (a + b) * 0.5;
    return e;
}

void sort_edges_canonical(std::vector<Edge>& edges) {
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        const auto ka = std::minmax(a.left, a.right);
        const auto kb = std::minmax(b.left, b.right);
        return ka < kb;
    });
}

}  // namespace

class MeshBuilder {
public:
    static Mesh rectangular(std::uint32_t nx, std::uint32_t ny, double dx, Vec2 origin);
    static Mesh hexagonal(std::uint32_t nx, std::uint32_t ny, double side, Vec2 origin);
};

void Mesh::build_cell_edge_index() {
    cell_edge_offset_.assign(cells_.size() + 1, 0);
    for (const Edge& e : edges_) {
        ++cell_edge_offset_[e.left + 1];
        if (!is_ghost(e.right) && e.right != kNoNeighbor) ++cell_edge_offset_[e.right + 1];
    }
    for (std::size_t i = 1; i < cell_edge_offset_.size(); ++i)
        cell_edge_offset_[i] += cell_edge_offset_[i - 1];
    cell_edge_list_.resize(cell_edge_offset_.back());
    std::vector<std::uint32_t> fill(cells_.size(), 0);
    for (std::uint32_t ei = 0; ei < edges_.size(); ++ei) {
        const Edge& e = edges_[ei];
        cell_edge_list_[cell_edge_offset_[e.left] + fill[e.left]++] = {ei, 1.0};
        if (!is_ghost(e.right) && e.right != kNoNeighbor)
            cell_edge_list_[cell_edge_offset_[e.right] + fill[e.right]++] = {ei, -1.0};
    }
}

std::vector<CellIndex> Mesh::neighbors(CellIndex cell) const {
    std::vector<CellIndex> out;
    for (const CellEdge& ce : edges_of(cell)) {
        const Edge& e = edges_[ce.edge];
        const CellIndex other = (e.left == cell) ? e.right : e.left;
        if (other != kNoNeighbor) out.push_back(other);
    }
    return out;
}

double Mesh::total_area() const {
    double a = 0.0;
    for (const Cell& c : cells_) a += c.area;
    return a;
}

void Mesh::set_ghost_altitude(CellIndex global_id, double z) {
    GhostRecord& g = ghosts_.at(global_id - cells_.size());
    g.altitude = GhostAltitude::fixed;
    g.z = z;
}

Mesh build_structured_mesh(MeshKind kind, std::uint32_t nx, std::uint32_t ny,
                           double spacing, Vec2 origin) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("mesh: nx and ny must be at least 1");
    if (!(spacing > 0.0))
        throw std::invalid_argument("mesh: spacing must be positive");
    return kind == MeshKind::rectangular
               ? MeshBuilder::rectangular(nx, ny, spacing, origin)
               : MeshBuilder::hexagonal(nx, ny, spacing, origin);
}

Mesh MeshBuilder::rectangular(std::uint32_t nx, std::uint32_t ny, double dx, Vec2 origin) {
    // Grid line coordinates are computed once so the two cells sharing an
    // interface reference bit-identical vertex positions.
    std::vector<double> xs(nx + 1), ys(ny + 1);
    for (std::uint32_t i = 0; i <= nx; ++i) xs[i] = origin.x + i * dx;
    for (std::uint32_t j = 0; j <= ny; ++j) ys[j] = origin.y + j * dx;

    Mesh m;
    m.cells_.resize(static_cast<std::size_t>(nx) * ny);
    for (std::uint32_t iy = 0; iy < ny; ++iy) {
        for (std::uint32_t ix = 0; ix < nx; ++ix) {
            Cell& c = m.cells_[static_cast<std::size_t>(iy) * nx + ix];
            c.id = iy * nx + ix;
            c.vertices = {{xs[ix], ys[iy]},
                          {xs[ix + 1], ys[iy]},
                          {xs[ix + 1], ys[iy + 1]},
                          {xs[ix], ys[iy + 1]}};
            polygon_geometry(c.vertices, c.area, c.centroid);
        }
    }

    for (std::uint32_t iy = 0; iy < ny; ++iy) {
        for (std::uint32_t ix = 0; ix < nx; ++ix) {
            const CellIndex c = iy * nx + ix;
            const Vec2 sw{xs[ix], ys[iy]}, se{xs[ix + 1], ys[iy]};
            const Vec2 ne{xs[ix + 1], ys[iy + 1]}, nw{xs[ix], ys[iy + 1]};
            // East and north interfaces are owned by this cell; west/south
            // ones only where no neighbor exists to own them.
            m.edges_.push_back(make_edge(c, ix + 1 < nx ? c + 1 : kNoNeighbor, se, ne));
            m.edges_.push_back(make_edge(c, iy + 1 < ny ? c + nx : kNoNeighbor, ne, nw));
            if (ix == 0) m.edges_.push_back(make_edge(c, kNoNeighbor, nw, sw));
            if (iy == 0) m.edges_.push_back(make_edge(c, kNoNeighbor, sw, se));
        }
    }
    sort_edges_canonical(m.edges_);
    m.build_cell_edge_index();
    m.structured_ = StructuredInfo{MeshKind::rectangular, nx, ny, dx, origin};
    return m;
}

Mesh MeshBuilder::hexagonal(std::uint32_t nx, std::uint32_t ny, double side, Vec2 origin) {
    // Pointy-top hexagons, odd rows shifted half a cell to the right. Every
    // vertex sits on the half-lattice (hx*m, hy*j) with integer m, j, so
    // adjacent cells reproduce shared vertices bit for bit.
    const double hx = 0.5 * std::sqrt(3.0) * side;
    const double hy = 0.5 * side;
    const auto point = [&](std::int64_t mm, std::int64_t jj) {
        return Vec2{origin.x + hx * static_cast<double>(mm),
                    origin.y + hy * static_cast<double>(jj)};
    };

    Mesh m;
    m.cells_.resize(static_cast<std::size_t>(nx) * ny);
    for (std::uint32_t row = 0; row < ny; ++row) {
        for (std::uint32_t col = 0; col < nx; ++col) {
            const std::int64_t m0 = 2 * static_cast<std::int64_t>(col) + 1 + (row & 1);
            const std::int64_t j0 = 3 * static_cast<std::int64_t>(row) + 2;
            Cell& c = m.cells_[static_cast<std::size_t>(row) * nx + col];
            c.id = row * nx + col;
            c.vertices = {point(m0, j0 + 2),     point(m0 - 1, j0 + 1),
                          point(m0 - 1, j0 - 1), point(m0, j0 - 2),
                          point(m0 + 1, j0 - 1), point(m0 + 1, j0 + 1)};
            polygon_geometry(c.vertices, c.area, c.centroid);
        }
    }

    // CCW vertex pairs per direction: NW (0,1), W (1,2), SW (2,3), SE (3,4),
    // E (4,5), NE (5,0).
    enum Dir { NW, W, SW, SE, E, NE };
    const auto neighbor_of = [&](std::uint32_t col, std::uint32_t row,
                                 Dir d) -> CellIndex {
        const bool odd = (row & 1) != 0;
        std::int64_t c2 = col, r2 = row;
        switch (d) {
            case E: c2 = col + 1; break;
            case W: c2 = static_cast<std::int64_t>(col) - 1; break;
            case NE: c2 = col + (odd ? 1 : 0); r2 = row + 1; break;
            case NW: c2 = static_cast<std::int64_t>(col) - (odd ? 0 : 1); r2 = row + 1; break;
            case SE: c2 = col + (odd ? 1 : 0); r2 = static_cast<std::int64_t>(row) - 1; break;
            case SW: c2 = static_cast<std::int64_t>(col) - (odd ? 0 : 1); r2 = static_cast<std::int64_t>(row) - 1; break;
        }
        if (c2 < 0 || c2 >= static_cast<std::int64_t>(nx) || r2 < 0 ||
            r2 >= static_cast<std::int64_t>(ny))
            return kNoNeighbor;
        return static_cast<CellIndex>(r2 * nx + c2);
    };

    constexpr std::array<std::pair<Dir, std::array<int, 2>>, 6> kSides{{
        {NW, {0, 1}}, {W, {1, 2}}, {SW, {2, 3}}, {SE, {3, 4}}, {E, {4, 5}}, {NE, {5, 0}},
    }};

    for (std::uint32_t row = 0; row < ny; ++row) {
        for (std::uint32_t col = 0; col < nx; ++col) {
            const CellIndex c = row * nx + col;
            for (const auto& [dir, vi] : kSides) {
                const CellIndex nb = neighbor_of(col, row, dir);
                if (nb != kNoNeighbor && nb < c) continue;  // owned by the neighbor
                const auto& vs = m.cells_[c].vertices;
                m.edges_.push_back(make_edge(c, nb, vs[vi[0]], vs[vi[1]]));
            }
        }
    }
    sort_edges_canonical(m.edges_);
    m.build_cell_edge_index();
    m.structured_ = StructuredInfo{MeshKind::hexagonal, nx, ny, side, origin};
    return m;
}

Mesh attach_ghosts(Mesh mesh, GhostPolicy policy) {
    if (mesh.has_ghosts())
        throw std::invalid_argument("mesh: ghosts already attached");
    const CellIndex n = static_cast<CellIndex>(mesh.cells_.size());
    for (Edge& e : mesh.edges_) {
        if (e.right != kNoNeighbor) continue;
        const CellIndex gid = n + static_cast<CellIndex>(mesh.ghosts_.size());
        mesh.ghosts_.push_back({e.left, policy.kind, policy.value});
        e.right = gid;
    }
    return mesh;
}

double min_area_to_perimeter(const Mesh& mesh) {
    if (mesh.cell_count() == 0)
        throw std::invalid_argument("mesh: empty mesh");
    double best = std::numeric_limits<double>::infinity();
    for (CellIndex c = 0; c < mesh.cell_count(); ++c) {
        double perimeter = 0.0;
        for (const CellEdge& ce : mesh.edges_of(c)) perimeter += mesh.edge(ce.edge).length;
        best = std::min(best, mesh.cell(c).area / perimeter);
    }
    return best;
}

void write_mesh_csv(const Mesh& mesh, std::ostream& out) {
    std::string buf = "id,cx,cy,area\n";
    for (const Cell& c : mesh.cells()) {
        append_int(buf, c.id);
        buf += ',';
        append_double(buf, c.centroid.x);
        buf += ',';
        append_double(buf, c.centroid.y);
        buf += ',';
        append_double(buf, c.area);
        buf += '\n';
    }
    out << buf;
}

}  // namespace vswe
