#pragma once

#include <limits>
#include <span>
#include <vector>

#include "vswe/mesh.hpp"
#include "vswe/physics.hpp"
#include "vswe/scheme.hpp"
#include "vswe/state.hpp"

namespace vswe {

enum class DtBound { positivity, cfl, min_of_both };

struct StepPolicy {
    double safety = 0.9;                 // in (0, 1]
    DtBound bound = DtBound::min_of_both;
    double dt_max = 1.0;                 // s
    double dt_min = 0.0;                 // abort below this
    bool viscosity = true;               // apply the artificial-viscosity exchange

    // Wetting-front guards, applied after velocity recovery. Pressure and
    // viscous impulses at a front are finite while the receiving film's mass
    // is nearly zero, so raw recovery produces runaway speeds there. Films
    // below h_thin carry no momentum; thicker cells are capped at the given
    // Froude number. Both act strictly by removing kinetic energy and only
    // trigger on front cells (every legitimate flow here stays under
    // Froude 2), so lake/uniform-flow exactness is untouched.
    double h_thin = 1e-5;                // m; 0 disables
    double froude_max = 3.0;             // 0 disables
};

/// Transport bound: dt < phi_min / max_i |v_i| keeps the upwinded depth update
/// a convex combination, hence nonnegative. Unconstrained (all at rest)
/// returns dt_max.
double dt_positivity(const FieldState& state, const Mesh& mesh, const StepPolicy& policy);

/// Wave-speed bound phi_min / max_i (|v_i| + sqrt(g h_i)).
double dt_cfl(const FieldState& state, const Mesh& mesh, const StepPolicy& policy,
              double gravity);

/// State after the explicit transport substep, still before sources and drag:
/// depths carry theta h^* / theta (updated in increment form so a zero
/// right-hand side reproduces the inputs bit for bit) and `momentum` carries
/// (theta h v)^*. Depths in [-1e-12 * max theta h, 0) are snapped to zero and
/// the lost volume accumulated; anything below that bound throws SolverError.
struct TransportResult {
    std::vector<double> h;
    std::vector<Vec2> momentum;
    double clamped_volume = 0.0;  // m^3
};

void hyperbolic_substep(const Mesh& mesh, const Terrain& terrain, const FieldState& state,
                        const SemidiscreteRHS& rhs, double dt, TransportResult& out);

/// Implicit per-cell mass-source update: solves
///   u = theta_h_star + dt * (r(t_next) - theta * iota(t_next, u / theta))
/// by bisection (the residual is strictly increasing in u). A negative root
/// (infiltration overdraw) is clamped to zero and reported through *deficit,
/// in theta*h units. Throws SolverError if the root is not located within
/// 100 iterations.
double source_substep_h(double theta_h_star, double t_next, double theta,
                        const SourceModel& sources, double dt,
                        double* deficit = nullptr);

/// Nonnegative root of dt K s^2 + theta_h s = m, evaluated in the
/// cancellation-free form; this is the post-drag speed.
double friction_speed(double theta_h_next, double momentum_norm, double K, double dt);

/// Implicit drag update: velocity keeps the direction of the intermediate
/// momentum, with magnitude from friction_speed. Dry cells get exactly zero.
Vec2 friction_substep_v(double theta_h_next, double theta, Vec2 momentum_star,
                        double K, double dt);

struct StepReport {
    double t = 0.0;             // time after the step
    double dt = 0.0;
    double mass = 0.0;          // sum sigma theta h, after
    double energy = 0.0;        // sum sigma E, after
    double max_speed = 0.0;
    double clamped_mass = 0.0;  // volume snapped to zero during this step
};

/// Scratch space reused across steps; bind() caches the mesh shape factor.
struct StepWorkspace {
    EdgeWorkspace edges;
    SemidiscreteRHS rhs;
    std::vector<double> mu;
    TransportResult transport;
    double phi_min = 0.0;

    void bind(const Mesh& mesh);
};

/// One full step: dt selection (safety * min of enabled bounds, capped by
/// dt_max and dt_limit), explicit transport with viscosity, implicit source
/// and drag substeps, primitive recovery with the dry guard. `dt_limit` lets
/// a run loop land exactly on output times.
StepReport advance(FieldState& state, const Mesh& mesh, const Terrain& terrain,
                   const PhysicsParams& physics, const SourceModel& sources,
                   const StepPolicy& policy, StepWorkspace& ws, int workers = 1,
                   double dt_limit = std::numeric_limits<double>::infinity());

}  // namespace vswe
