#include "vswe/timestep.hpp"

#include <algorithm>
#include <cmath>

#include "vswe/diagnostics.hpp"
#include "vswe/errors.hpp"
#include "vswe/fmt.hpp"
#include "vswe/reduce.hpp"

namespace vswe {

namespace {

double max_speed(const FieldState& state) {
    double m = 0.0;
    for (const Vec2& v : state.v) m = std::max(m, norm(v));
    return m;
}

}  // namespace

double dt_positivity(const FieldState& state, const Mesh& mesh, const StepPolicy& policy) {
    const double vmax = max_speed(state);
    if (vmax == 0.0) return policy.dt_max;
    return std::min(policy.dt_max, min_area_to_perimeter(mesh) / vmax);
}

double dt_cfl(const FieldState& state, const Mesh& mesh, const StepPolicy& policy,
              double gravity) {
    double cmax = 0.0;
    for (std::size_t i = 0; i < state.h.size(); ++i)
        cmax = std::max(cmax, norm(state.v[i]) + std::sqrt(gravity * state.h[i]));
    if (cmax == 0.0) return policy.dt_max;
    return std::min(policy.dt_max, min_area_to_perimeter(mesh) / cmax);
}

void hyperbolic_substep(const Mesh& mesh, const Terrain& terrain, const FieldState& state,
                        const SemidiscreteRHS& rhs, double dt, TransportResult& out) {
    const std::size_t n = mesh.cell_count();
    out.h.resize(n);
    out.momentum.resize(n);
    out.clamped_volume = 0.0;

    double max_theta_h = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_theta_h = std::max(max_theta_h, terrain.theta[i] * state.h[i]);
    const double hard_floor = -1e-12 * max_theta_h;

    NeumaierSum clamped;
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = mesh.cell(static_cast<CellIndex>(i)).area;
        const double theta = terrain.theta[i];
        // Increment form: a zero mass rate leaves the stored depth untouched,
        // which is what keeps lake states exact fixed points.
        double h_star = state.h[i] + (dt * rhs.mass[i]) / (sigma * theta);
        if (h_star < 0.0) {
            const double th = theta * h_star;
            if (th < hard_floor)
                throw SolverError("positivity violated in transport substep: theta*h = " +
                                  fmt_double(th) + " at cell " + std::to_string(i) +
                                  " (time step too large)");
            clamped.add(sigma * (-th));
            h_star = 0.0;
        }
        out.h[i] = h_star;
        out.momentum[i] = (theta * state.h[i]) * state.v[i] + (dt / sigma) * rhs.momentum[i];
    }
    out.clamped_volume = clamped.value();
}

double source_substep_h(double theta_h_star, double t_next, double theta,
                        const SourceModel& sources, double dt, double* deficit) {
    const double r = sources.rain.rate(t_next);
    const double rained = theta_h_star + dt * r;

    double root;
    if (sources.infiltration.kind == InfiltrationModel::Kind::none) {
        root = rained;
    } else if (!sources.infiltration.h_gated) {
        // Depth-independent law: the implicit update is explicit after all.
        root = rained - dt * theta * sources.infiltration.rate(t_next, 1.0);
    } else {
        // Gated law: the update is genuinely implicit in u = theta*h. The
        // residual is strictly increasing with R(0) <= 0, so [0, rained]
        // brackets the root; pad the top against the last-bit rounding of
        // `rained` itself.
        const auto residual = [&](double u) {
            return u - theta_h_star -
                   dt * (r - theta * sources.infiltration.rate(t_next,
                                                               std::max(u, 0.0) / theta));
        };
        double lo = 0.0;
        double hi = rained * (1.0 + 1e-12) + 1e-300;
        if (residual(lo) > 0.0 || residual(hi) < 0.0)
            throw SolverError("mass source solve: root escaped its bracket");
        bool converged = false;
        root = hi;
        for (int it = 0; it < 100 && !converged; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) {  // interval at machine width
                root = mid;
                converged = true;
                break;
            }
            (residual(mid) < 0.0 ? lo : hi) = mid;
        }
        if (!converged) {
            if (hi - lo > 1e-12 * std::max(1.0, std::abs(rained)))
                throw SolverError("mass source solve did not converge in 100 iterations");
            root = 0.5 * (lo + hi);
        }
    }
    if (root < 0.0) {
        if (deficit) *deficit += -root;
        root = 0.0;
    }
    return root;
}

double friction_speed(double theta_h_next, double momentum_norm, double K, double dt) {
    if (momentum_norm == 0.0) return 0.0;
    const double disc = theta_h_next * theta_h_next + 4.0 * dt * K * momentum_norm;
    return 2.0 * momentum_norm / (theta_h_next + std::sqrt(disc));
}

Vec2 friction_substep_v(double theta_h_next, double theta, Vec2 momentum_star,
                        double K, double dt) {
    if (theta_h_next <= theta * kDryDepth) return {0.0, 0.0};
    const double m = norm(momentum_star);
    if (m == 0.0) return {0.0, 0.0};
    const double s = friction_speed(theta_h_next, m, K, dt);
    return momentum_star * (s / m);
}

void StepWorkspace::bind(const Mesh& mesh) { phi_min = min_area_to_perimeter(mesh); }

StepReport advance(FieldState& state, const Mesh& mesh, const Terrain& terrain,
                   const PhysicsParams& physics, const SourceModel& sources,
                   const StepPolicy& policy, StepWorkspace& ws, int workers,
                   double dt_limit) {
    if (!(policy.safety > 0.0 && policy.safety <= 1.0))
        throw std::invalid_argument("advance: safety factor must lie in (0, 1]");
    if (!(policy.dt_min <= policy.dt_max))
        throw std::invalid_argument("advance: need dt_min <= dt_max");
    if (ws.phi_min <= 0.0) ws.bind(mesh);

    // Bound selection on the pre-step state.
    double bound = policy.dt_max;
    if (policy.bound != DtBound::cfl) {
        const double vmax = max_speed(state);
        if (vmax > 0.0) bound = std::min(bound, ws.phi_min / vmax);
    }
    if (policy.bound != DtBound::positivity) {
        double cmax = 0.0;
        for (std::size_t i = 0; i < state.h.size(); ++i)
            cmax = std::max(cmax, norm(state.v[i]) + std::sqrt(physics.gravity * state.h[i]));
        if (cmax > 0.0) bound = std::min(bound, ws.phi_min / cmax);
    }
    double dt = std::min(policy.safety * bound, policy.dt_max);
    if (dt < policy.dt_min)
        throw SolverError("time step " + std::to_string(dt) + " fell below dt_min");
    dt = std::min(dt, dt_limit);

    if (policy.viscosity)
        ws.mu = viscosity_coefficients(mesh, terrain, state, physics.gravity);
    else
        ws.mu.clear();

    assemble_rhs(mesh, terrain, state, physics, ws.mu, workers, ws.rhs, ws.edges);
    hyperbolic_substep(mesh, terrain, state, ws.rhs, dt, ws.transport);

    StepReport rep;
    rep.clamped_mass = ws.transport.clamped_volume;
    const double t_next = state.time + dt;

    const bool with_sources = !sources.is_zero();
    NeumaierSum source_deficit;
    const std::size_t n = mesh.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = terrain.theta[i];
        double h_next = ws.transport.h[i];
        if (with_sources) {
            double cell_deficit = 0.0;
            const double th_next = source_substep_h(theta * h_next, t_next, theta,
                                                    sources, dt, &cell_deficit);
            source_deficit.add(mesh.cell(static_cast<CellIndex>(i)).area * cell_deficit);
            h_next = th_next / theta;
        }
        const double K = friction_K(h_next, theta, physics.friction);
        Vec2 v = friction_substep_v(theta * h_next, theta, ws.transport.momentum[i],
                                    K, dt);
        if (h_next <= std::max(kDryDepth, policy.h_thin)) {
            v = {0.0, 0.0};
        } else if (policy.froude_max > 0.0) {
            const double cap = policy.froude_max * std::sqrt(physics.gravity * h_next);
            const double speed = norm(v);
            if (speed > cap) v *= cap / speed;
        }
        state.v[i] = v;
        state.h[i] = h_next;
    }
    rep.clamped_mass += source_deficit.value();

    state.time = t_next;
    rep.t = state.time;
    rep.dt = dt;
    rep.mass = total_volume(mesh, terrain, state);
    rep.energy = total_energy(mesh, terrain, state, physics.gravity);
    rep.max_speed = max_speed(state);
    return rep;
}

}  // namespace vswe
