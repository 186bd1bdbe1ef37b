#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "vswe/mesh.hpp"
#include "vswe/state.hpp"

using namespace vswe;

namespace {

// Discrete divergence of a constant field over one cell: sum of l * n over
// its closed polygon must vanish.
Vec2 normal_sum(const Mesh& mesh, CellIndex c) {
    Vec2 acc{0.0, 0.0};
    for (const CellEdge& ce : mesh.edges_of(c)) {
        const Edge& e = mesh.edge(ce.edge);
        acc += (ce.sign * e.length) * e.normal;
    }
    return acc;
}

double perimeter(const Mesh& mesh, CellIndex c) {
    double p = 0.0;
    for (const CellEdge& ce : mesh.edges_of(c)) p += mesh.edge(ce.edge).length;
    return p;
}

void check_partition_invariants(const Mesh& mesh, double domain_area) {
    for (CellIndex c = 0; c < mesh.cell_count(); ++c) {
        const Vec2 s = normal_sum(mesh, c);
        const double tol = 1e-12 * perimeter(mesh, c);
        CHECK(std::abs(s.x) <= tol);
        CHECK(std::abs(s.y) <= tol);
        CHECK(mesh.cell(c).area > 0.0);
    }
    CHECK(mesh.total_area() == doctest::Approx(domain_area).epsilon(1e-10));

    // Unit normals, and the regular-partition midpoint identity
    // centroid_j - centroid_i = 2 (midpoint - centroid_i) on internal edges.
    for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
        const Edge& edge = mesh.edge(e);
        CHECK(std::abs(norm(edge.normal) - 1.0) <= 1e-12);
        if (edge.right == kNoNeighbor || mesh.is_ghost(edge.right)) continue;
        const Vec2 xi = mesh.cell(edge.left).centroid;
        const Vec2 xj = mesh.cell(edge.right).centroid;
        const Vec2 lhs = xj - xi;
        const Vec2 rhs = 2.0 * (edge.midpoint - xi);
        const double scale = std::max(1.0, norm(lhs));
        CHECK(norm(lhs - rhs) <= 1e-12 * scale);
    }

    // Adjacency is symmetric and every internal interface appears once.
    std::map<std::pair<CellIndex, CellIndex>, int> seen;
    for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
        const Edge& edge = mesh.edge(e);
        if (edge.right == kNoNeighbor || mesh.is_ghost(edge.right)) continue;
        ++seen[std::minmax(edge.left, edge.right)];
    }
    for (const auto& [pair, count] : seen) CHECK(count == 1);
    for (CellIndex c = 0; c < mesh.cell_count(); ++c) {
        for (const CellIndex nb : mesh.neighbors(c)) {
            if (mesh.is_ghost(nb)) continue;
            const auto back = mesh.neighbors(nb);
            CHECK(std::count(back.begin(), back.end(), c) == 1);
        }
    }
}

}  // namespace

TEST_CASE("single unit square") {
    const Mesh m = build_structured_mesh(MeshKind::rectangular, 1, 1, 1.0);
    CHECK(m.cell_count() == 1);
    CHECK(m.cell(0).area == doctest::Approx(1.0));
    CHECK(m.cell(0).centroid.x == doctest::Approx(0.5));
    CHECK(m.cell(0).centroid.y == doctest::Approx(0.5));
    CHECK(m.edge_count() == 4);
    for (std::size_t e = 0; e < 4; ++e) {
        CHECK(m.edge(e).right == kNoNeighbor);
        CHECK(m.edge(e).length == doctest::Approx(1.0));
    }
    check_partition_invariants(m, 1.0);
}

TEST_CASE("two adjacent squares share one internal edge") {
    const Mesh m = build_structured_mesh(MeshKind::rectangular, 2, 1, 1.0);
    int internal = 0;
    for (std::size_t e = 0; e < m.edge_count(); ++e) {
        const Edge& edge = m.edge(e);
        if (edge.right == kNoNeighbor) continue;
        ++internal;
        CHECK(edge.left == 0);
        CHECK(edge.right == 1);
        CHECK(edge.normal.x == doctest::Approx(1.0));
        CHECK(edge.normal.y == doctest::Approx(0.0));
        CHECK(edge.length == doctest::Approx(1.0));
    }
    CHECK(internal == 1);
    check_partition_invariants(m, 2.0);
}

TEST_CASE("rectangular partition invariants at odd spacing") {
    const Mesh m = build_structured_mesh(MeshKind::rectangular, 7, 5, 0.3, {2.0, -1.0});
    CHECK(m.cell_count() == 35);
    check_partition_invariants(m, 7 * 5 * 0.3 * 0.3);
}

TEST_CASE("hexagonal partition") {
    const double s = 0.7;
    const Mesh m = build_structured_mesh(MeshKind::hexagonal, 3, 3, s);
    CHECK(m.cell_count() == 9);
    const double hex_area = 1.5 * std::sqrt(3.0) * s * s;
    check_partition_invariants(m, 9 * hex_area);

    // Center cell is interior: six sides, all of length s, six cell neighbors.
    const CellIndex center = 4;
    const auto edges = m.edges_of(center);
    CHECK(edges.size() == 6);
    for (const CellEdge& ce : edges)
        CHECK(m.edge(ce.edge).length == doctest::Approx(s).epsilon(1e-12));
    std::set<CellIndex> nbs;
    for (const CellIndex nb : m.neighbors(center)) {
        CHECK(nb != kNoNeighbor);
        nbs.insert(nb);
    }
    CHECK(nbs.size() == 6);
    CHECK(m.cell(center).area == doctest::Approx(hex_area).epsilon(1e-12));
}

TEST_CASE("ghost attachment") {
    SUBCASE("copy_owner on a single cell") {
        Mesh m = attach_ghosts(build_structured_mesh(MeshKind::rectangular, 1, 1, 1.0),
                               GhostPolicy::copy_owner());
        CHECK(m.ghost_count() == 4);
        const Terrain t = uniform_terrain(m, 3.25, 1.0);
        for (std::size_t e = 0; e < m.edge_count(); ++e) {
            const CellIndex g = m.edge(e).right;
            REQUIRE(m.is_ghost(g));
            CHECK(m.ghost(g).owner == 0);
            CHECK(bed_elevation(m, t, g) == 3.25);
        }
    }
    SUBCASE("fixed altitude") {
        Mesh m = attach_ghosts(build_structured_mesh(MeshKind::rectangular, 1, 1, 1.0),
                               GhostPolicy::fixed(5.0));
        const Terrain t = uniform_terrain(m, 0.0, 1.0);
        for (std::size_t e = 0; e < m.edge_count(); ++e)
            CHECK(bed_elevation(m, t, m.edge(e).right) == 5.0);
    }
    SUBCASE("one ghost per boundary side of a 2x2 mesh") {
        Mesh m = attach_ghosts(build_structured_mesh(MeshKind::rectangular, 2, 2, 1.0),
                               GhostPolicy::copy_owner());
        CHECK(m.ghost_count() == 8);
    }
    SUBCASE("double attachment is rejected") {
        Mesh m = attach_ghosts(build_structured_mesh(MeshKind::rectangular, 2, 2, 1.0),
                               GhostPolicy::copy_owner());
        CHECK_THROWS_AS(attach_ghosts(std::move(m), GhostPolicy::copy_owner()),
                        std::invalid_argument);
    }
}

TEST_CASE("area to perimeter ratio") {
    const Mesh unit = build_structured_mesh(MeshKind::rectangular, 3, 3, 1.0);
    CHECK(min_area_to_perimeter(unit) == doctest::Approx(0.25).epsilon(1e-14));

    const double d = 0.125;
    const Mesh fine = build_structured_mesh(MeshKind::rectangular, 4, 2, d);
    CHECK(min_area_to_perimeter(fine) == doctest::Approx(d / 4.0).epsilon(1e-14));

    const double s = 2.0;
    const Mesh hex = build_structured_mesh(MeshKind::hexagonal, 3, 3, s);
    CHECK(min_area_to_perimeter(hex) ==
          doctest::Approx(std::sqrt(3.0) / 4.0 * s).epsilon(1e-12));
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(build_structured_mesh(MeshKind::rectangular, 0, 1, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_structured_mesh(MeshKind::rectangular, 1, 1, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_structured_mesh(MeshKind::hexagonal, 1, 1, -2.0),
                    std::invalid_argument);
}

TEST_CASE("edges come out sorted by cell pair") {
    const Mesh m = build_structured_mesh(MeshKind::rectangular, 4, 3, 1.0);
    for (std::size_t e = 1; e < m.edge_count(); ++e) {
        const auto ka = std::minmax(m.edge(e - 1).left, m.edge(e - 1).right);
        const auto kb = std::minmax(m.edge(e).left, m.edge(e).right);
        CHECK(ka <= kb);
    }
}

TEST_CASE("geometry dump") {
    const Mesh m = build_structured_mesh(MeshKind::rectangular, 2, 1, 1.0);
    std::ostringstream out;
    write_mesh_csv(m, out);
    CHECK(out.str() == "id,cx,cy,area\n0,0.5,0.5,1\n1,1.5,0.5,1\n");
}
