#pragma once

#include <span>
#include <vector>

#include "vswe/mesh.hpp"
#include "vswe/physics.hpp"
#include "vswe/state.hpp"

namespace vswe {

/// Values assigned to one interface from the adjacent cell states:
/// arithmetic-mean velocity and free surface, the upwinded theta*h entering
/// the advective fluxes, and the selected theta*h entering the free-surface
/// gradient term (upwind value where flow crosses the interface; on a
/// non-flowing interface, the value from the higher-surface side, which is
/// what makes lakes exact fixed points).
struct InterfaceValues {
    Vec2 v;            // mean velocity
    double vn = 0.0;   // v . n (n points left -> right)
    double w = 0.0;    // mean free surface level
    double theta_h_up = 0.0;
    double theta_h_s = 0.0;
};

/// Interface values from explicit side data (n is the left cell's outward
/// unit normal). The vn == 0 test is exact: lakes carry exact zeros and a
/// tolerance would break the stationarity of the selection rule.
InterfaceValues interface_values_from(double theta_h_i, Vec2 v_i, double w_i,
                                      double theta_h_j, Vec2 v_j, double w_j, Vec2 n);

/// Internal interface of the mesh; w is the per-cell free surface array.
InterfaceValues interface_values(const Edge& edge, const FieldState& state,
                                 const Terrain& terrain, std::span<const double> w);

/// Boundary interface (free discharge): the ghost side takes the owner's
/// velocity, depth h_i when flow exits and 0 when it enters, and the free
/// surface of its assigned bed altitude with zero stored water.
InterfaceValues ghost_interface(const Edge& edge, const FieldState& state,
                                const Terrain& terrain, std::span<const double> w,
                                const Mesh& mesh, double gravity);

/// Right-hand side of the semidiscrete system, per cell:
///   mass:     sigma d(theta h)/dt   = mass_i (+ sigma * source)
///   momentum: sigma d(theta h v)/dt = momentum_i + friction_i
/// `momentum` bundles the advective flux (plus any viscous exchange) with the
/// free-surface gradient term; `friction` is the explicit drag evaluation
/// -sigma K |v| v, reported separately because time integration treats it
/// implicitly.
struct SemidiscreteRHS {
    std::vector<double> mass;      // m^3/s
    std::vector<Vec2> momentum;    // m^4/s^2
    std::vector<Vec2> friction;    // m^4/s^2

    void resize(std::size_t n) {
        mass.assign(n, 0.0);
        momentum.assign(n, Vec2{0.0, 0.0});
        friction.assign(n, Vec2{0.0, 0.0});
    }
};

/// Per-edge scratch arrays reused across steps.
struct EdgeWorkspace {
    std::vector<double> mass_flux;   // l * theta_h_up * vn        (left -> right)
    std::vector<Vec2> momentum_flux; // l * theta_h_up * v_mean * vn
    std::vector<Vec2> surface_term;  // -(1/2) l (w_j - w_i) theta_h_s n; same for both sides
    std::vector<Vec2> viscous_term;  // l * mu * (v_right - v_left)

    void resize(std::size_t n) {
        mass_flux.assign(n, 0.0);
        momentum_flux.assign(n, Vec2{0.0, 0.0});
        surface_term.assign(n, Vec2{0.0, 0.0});
        viscous_term.assign(n, Vec2{0.0, 0.0});
    }
};

/// Assembles the spatial operators in two deterministic phases: a per-edge
/// flux pass (parallel, disjoint writes) and a per-cell gather in the fixed
/// canonical edge order, so results do not depend on the worker count.
/// `mu` holds one artificial-viscosity coefficient per edge; pass an empty
/// span to disable the viscous exchange.
void assemble_rhs(const Mesh& mesh, const Terrain& terrain, const FieldState& state,
                  const PhysicsParams& physics, std::span<const double> mu,
                  int workers, SemidiscreteRHS& rhs, EdgeWorkspace& ws);

/// Edge viscosity mu = (theta h)_(i,j) * max(c_i, c_j) with c = |v| + sqrt(g h).
/// On a non-flowing interface the upwind value is undefined, so the larger of
/// the two theta*h values is used; the viscous exchange vanishes there anyway
/// whenever the adjacent velocities agree. Ghost edges get mu = 0 because the
/// ghost velocity mirrors the owner and the exchange term is identically zero.
std::vector<double> viscosity_coefficients(const Mesh& mesh, const Terrain& terrain,
                                           const FieldState& state, double gravity);

}  // namespace vswe
