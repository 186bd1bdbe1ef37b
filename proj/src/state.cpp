#include "vswe/state.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vswe {

void Terrain::validate(const Mesh& mesh) const {
    if (z.size() != mesh.cell_count() || theta.size() != mesh.cell_count())
        throw std::invalid_argument("terrain: field size does not match mesh");
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!std::isfinite(z[i]))
            throw std::invalid_argument("terrain: non-finite bed elevation");
        if (!(theta[i] > 0.0 && theta[i] <= 1.0))
            throw std::invalid_argument("terrain: porosity must lie in (0, 1]");
    }
}

Terrain uniform_terrain(const Mesh& mesh, double z, double theta) {
    Terrain t;
    t.z.assign(mesh.cell_count(), z);
    t.theta.assign(mesh.cell_count(), theta);
    return t;
}

Terrain plane_terrain(const Mesh& mesh, Vec2 slope, double z0, double theta) {
    Terrain t;
    t.z.resize(mesh.cell_count());
    t.theta.assign(mesh.cell_count(), theta);
    for (CellIndex i = 0; i < mesh.cell_count(); ++i)
        t.z[i] = z0 + dot(slope, mesh.cell(i).centroid);
    return t;
}

double bed_elevation(const Mesh& mesh, const Terrain& terrain, CellIndex id) {
    if (!mesh.is_ghost(id)) return terrain.z[id];
    const GhostRecord& g = mesh.ghost(id);
    return g.altitude == GhostAltitude::copy_owner ? terrain.z[g.owner] : g.z;
}

FieldState FieldState::zeros(const Mesh& mesh) {
    FieldState s;
    s.h.assign(mesh.cell_count(), 0.0);
    s.v.assign(mesh.cell_count(), Vec2{0.0, 0.0});
    return s;
}

std::vector<double> free_surface(const FieldState& state, const Terrain& terrain,
                                 double gravity) {
    std::vector<double> w(state.h.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = gravity * (terrain.z[i] + state.h[i]);
    return w;
}

namespace {

// Largest-h representative of { h >= 0 : fl(z + h) == W }, found by walking
// the monotone staircase h -> fl(z + h) from the naive difference. Exact
// equality of z + h across wet cells is what keeps a lake stationary in
// floating point, not just to rounding error.
double depth_matching_surface(double z, double W) {
    double h = W - z;
    if (h <= 0.0) return 0.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    while (z + h > W) h = std::nextafter(h, -inf);
    while (z + h < W) h = std::nextafter(h, inf);
    return h > 0.0 && z + h == W ? h : std::max(W - z, 0.0);
}

}  // namespace

FieldState make_lake_state(const Mesh& mesh, const Terrain& terrain, double w_level,
                           double gravity) {
    const double W = w_level / gravity;  // surface elevation
    FieldState s = FieldState::zeros(mesh);
    for (CellIndex i = 0; i < mesh.cell_count(); ++i)
        s.h[i] = depth_matching_surface(terrain.z[i], W);
    return s;
}

FieldState make_uniform_flow_state(const Mesh& mesh, Vec2 slope, double theta,
                                   double h, const FrictionParams& friction,
                                   double gravity) {
    const double s = norm(slope);
    if (!(s > 0.0))
        throw std::invalid_argument("uniform flow: slope must be nonzero");
    if (!(h > 0.0))
        throw std::invalid_argument("uniform flow: depth must be positive");
    const double K = friction_K(h, theta, friction);
    if (!(K > 0.0))
        throw std::invalid_argument("uniform flow: drag coefficient must be positive");
    const double speed = std::sqrt(theta * h * gravity * s / K);
    const Vec2 v = slope * (-speed / s);  // downhill

    FieldState st = FieldState::zeros(mesh);
    st.h.assign(mesh.cell_count(), h);
    st.v.assign(mesh.cell_count(), v);
    return st;
}

}  // namespace vswe
