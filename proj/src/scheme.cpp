#include "vswe/scheme.hpp"

#include <cmath>
#include <stdexcept>

#include "vswe/parallel.hpp"

namespace vswe {

InterfaceValues interface_values_from(double theta_h_i, Vec2 v_i, double w_i,
                                      double theta_h_j, Vec2 v_j, double w_j, Vec2 n) {
    InterfaceValues iv;
    iv.v = (v_i + v_j) * 0.5;
    iv.vn = dot(iv.v, n);
    iv.w = (w_i + w_j) * 0.5;
    if (iv.vn > 0.0) {
        iv.theta_h_up = theta_h_i;
    } else if (iv.vn < 0.0) {
        iv.theta_h_up = theta_h_j;
    } else {
        // No flow crosses the interface; the advective fluxes vanish, so this
        // value only feeds the viscosity scale.
        iv.theta_h_up = std::max(theta_h_i, theta_h_j);
    }
    iv.theta_h_s = (iv.vn != 0.0) ? iv.theta_h_up
                                  : (w_i > w_j ? theta_h_i : theta_h_j);
    return iv;
}

InterfaceValues interface_values(const Edge& edge, const FieldState& state,
                                 const Terrain& terrain, std::span<const double> w) {
    const CellIndex i = edge.left, j = edge.right;
    return interface_values_from(terrain.theta[i] * state.h[i], state.v[i], w[i],
                                 terrain.theta[j] * state.h[j], state.v[j], w[j],
                                 edge.normal);
}

InterfaceValues ghost_interface(const Edge& edge, const FieldState& state,
                                const Terrain& terrain, std::span<const double> w,
                                const Mesh& mesh, double gravity) {
    const CellIndex i = edge.left;
    const double w_ghost = gravity * bed_elevation(mesh, terrain, edge.right);
    const double vn_owner = dot(state.v[i], edge.normal);
    // Outflow carries the owner's depth; inflow carries none.
    const double h_ghost = vn_owner > 0.0 ? state.h[i] : 0.0;
    return interface_values_from(terrain.theta[i] * state.h[i], state.v[i], w[i],
                                 terrain.theta[i] * h_ghost, state.v[i], w_ghost,
                                 edge.normal);
}

void assemble_rhs(const Mesh& mesh, const Terrain& terrain, const FieldState& state,
                  const PhysicsParams& physics, std::span<const double> mu,
                  int workers, SemidiscreteRHS& rhs, EdgeWorkspace& ws) {
    if (!mesh.has_ghosts())
        throw std::logic_error("scheme: mesh has open boundary sides; attach ghosts first");
    if (!mu.empty() && mu.size() != mesh.edge_count())
        throw std::invalid_argument("scheme: viscosity array size mismatch");

    const std::vector<double> w = free_surface(state, terrain, physics.gravity);
    const std::size_t n_edges = mesh.edge_count();
    ws.resize(n_edges);
    rhs.resize(mesh.cell_count());

    parallel_for(n_edges, workers, [&](std::size_t e) {
        const Edge& edge = mesh.edge(e);
        const bool ghost = mesh.is_ghost(edge.right);
        const InterfaceValues iv =
            ghost ? ghost_interface(edge, state, terrain, w, mesh, physics.gravity)
                  : interface_values(edge, state, terrain, w);

        const double l = edge.length;
        ws.mass_flux[e] = l * iv.theta_h_up * iv.vn;
        ws.momentum_flux[e] = (l * iv.theta_h_up * iv.vn) * iv.v;

        const double w_i = w[edge.left];
        const double w_j = ghost ? physics.gravity * bed_elevation(mesh, terrain, edge.right)
                                 : w[edge.right];
        ws.surface_term[e] = (-0.5 * l * (w_j - w_i) * iv.theta_h_s) * edge.normal;

        if (!mu.empty() && !ghost) {
            const Vec2 dv = state.v[edge.right] - state.v[edge.left];
            ws.viscous_term[e] = (l * mu[e]) * dv;
        } else {
            ws.viscous_term[e] = Vec2{0.0, 0.0};
        }
    });

    parallel_for(mesh.cell_count(), workers, [&](std::size_t ci) {
        const CellIndex c = static_cast<CellIndex>(ci);
        double mass = 0.0;
        Vec2 mom{0.0, 0.0};
        for (const CellEdge& ce : mesh.edges_of(c)) {
            // ce.sign flips the oriented fluxes for the right-side cell; the
            // surface term is the same vector seen from either side.
            mass -= ce.sign * ws.mass_flux[ce.edge];
            mom -= ce.sign * ws.momentum_flux[ce.edge];
            mom += ws.surface_term[ce.edge];
            mom += ce.sign * ws.viscous_term[ce.edge];
        }
        rhs.mass[ci] = mass;
        rhs.momentum[ci] = mom;

        const double K = friction_K(state.h[ci], terrain.theta[ci], physics.friction);
        const double speed = norm(state.v[ci]);
        rhs.friction[ci] = (-mesh.cell(c).area * K * speed) * state.v[ci];
    });
}

std::vector<double> viscosity_coefficients(const Mesh& mesh, const Terrain& terrain,
                                           const FieldState& state, double gravity) {
    std::vector<double> mu(mesh.edge_count(), 0.0);
    std::vector<double> c(mesh.cell_count());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = norm(state.v[i]) + std::sqrt(gravity * state.h[i]);

    const std::vector<double> w = free_surface(state, terrain, gravity);
    for (std::size_t e = 0; e < mu.size(); ++e) {
        const Edge& edge = mesh.edge(e);
        if (mesh.is_ghost(edge.right)) continue;  // exchange term vanishes there
        const InterfaceValues iv = interface_values(edge, state, terrain, w);
        mu[e] = iv.theta_h_up * std::max(c[edge.left], c[edge.right]);
    }
    return mu;
}

}  // namespace vswe
