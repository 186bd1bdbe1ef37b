#include "vswe/riemann.hpp"

#include <cmath>
#include <stdexcept>

#include "vswe/errors.hpp"
#include "vswe/mesh.hpp"
#include "vswe/state.hpp"
#include "vswe/timestep.hpp"

namespace vswe {

namespace {

// Velocity of the state connected to (h_r, 0) by a right-moving shock.
double shock_velocity(double h, double h_r, double g) {
    return (h - h_r) * std::sqrt(0.5 * g * (h + h_r) / (h * h_r));
}

// Velocity of the state connected to (h_l, 0) through the left rarefaction.
double fan_velocity(double h, double h_l, double g) {
    return 2.0 * (std::sqrt(g * h_l) - std::sqrt(g * h));
}

}  // namespace

ExactDamBreak::ExactDamBreak(double h_left, double h_right, double gravity)
    : g_(gravity), h_l_(h_left), h_r_(h_right) {
    if (!(h_right > 0.0))
        throw std::invalid_argument(
            "exact dam break: dry-bed pattern (h_right == 0) is not supported");
    if (!(h_left > h_right))
        throw std::invalid_argument(
            "exact dam break: requires h_left > h_right (rarefaction-shock pattern)");

    // Middle depth: the fan and shock branches carry the same velocity there.
    const auto match = [&](double h) {
        return fan_velocity(h, h_l_, g_) - shock_velocity(h, h_r_, g_);
    };
    double lo = h_r_, hi = h_l_;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (match(mid) > 0.0 ? lo : hi) = mid;
    }
    h_m_ = 0.5 * (lo + hi);
    v_m_ = fan_velocity(h_m_, h_l_, g_);
    c_l_ = std::sqrt(g_ * h_l_);
    c_m_ = std::sqrt(g_ * h_m_);
    s_ = h_m_ * v_m_ / (h_m_ - h_r_);

    // Self-check: mass and momentum jump conditions across the shock, scaled
    // by the natural flux magnitudes.
    const double jm = h_m_ * (v_m_ - s_) - h_r_ * (0.0 - s_);
    const double jq = (h_m_ * v_m_ * (v_m_ - s_) + 0.5 * g_ * h_m_ * h_m_) -
                      (0.0 + 0.5 * g_ * h_r_ * h_r_);
    const double mass_scale = h_l_ * (std::abs(s_) + c_l_);
    const double mom_scale = g_ * h_l_ * h_l_;
    jump_residual_ = std::max(std::abs(jm) / mass_scale, std::abs(jq) / mom_scale);
    if (jump_residual_ > 1e-10)
        throw SolverError("exact dam break: jump-condition self-check failed");

    // Invariant v + 2 sqrt(g h) must be constant through the fan.
    const double inv0 = 2.0 * c_l_;
    for (int k = 0; k <= 16; ++k) {
        const double xi = -c_l_ + (v_m_ - c_m_ + c_l_) * k / 16.0;
        const Sample smp = at(xi);
        const double inv = smp.v + 2.0 * std::sqrt(g_ * smp.h);
        if (std::abs(inv - inv0) > 1e-10 * inv0)
            throw SolverError("exact dam break: rarefaction invariant drifted");
    }
}

ExactDamBreak::Sample ExactDamBreak::at(double xi) const {
    if (xi <= -c_l_) return {h_l_, 0.0};
    if (xi < v_m_ - c_m_) {
        const double c = (2.0 * c_l_ - xi) / 3.0;  // sqrt(g h) inside the fan
        return {c * c / g_, 2.0 * (c_l_ - c)};
    }
    if (xi < s_) return {h_m_, v_m_};
    return {h_r_, 0.0};
}

Profile1D run_riemann_1d(const RiemannIC& ic, std::uint32_t cells, double t_end,
                         bool with_friction, const Riemann1DOptions& opt) {
    if (cells < 10)
        throw std::invalid_argument("riemann run: need at least 10 cells");
    if (!(ic.h_left >= 0.0 && ic.h_right >= 0.0))
        throw std::invalid_argument("riemann run: negative initial depth");

    const double dx = opt.domain_length / cells;
    Mesh mesh = build_structured_mesh(MeshKind::rectangular, cells, 1, dx);
    mesh = attach_ghosts(mesh, GhostPolicy::copy_owner());

    // Side walls: ghosts on the lateral faces take a high bed so the strip
    // stays one-dimensional; the two end ghosts keep free discharge.
    const double wall = ic.z + std::max(ic.h_left, ic.h_right) + 100.0;
    for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
        const Edge& edge = mesh.edge(e);
        if (mesh.is_ghost(edge.right) && edge.normal.x == 0.0)
            mesh.set_ghost_altitude(edge.right, wall);
    }

    Terrain terrain;
    terrain.z.assign(mesh.cell_count(), ic.z);
    terrain.theta.resize(mesh.cell_count());
    FieldState state = FieldState::zeros(mesh);
    for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
        const bool left = mesh.cell(i).centroid.x < ic.x0;
        terrain.theta[i] = left ? ic.theta_left : ic.theta_right;
        state.h[i] = left ? ic.h_left : ic.h_right;
        state.v[i] = {left ? ic.v_left : ic.v_right, 0.0};
    }

    PhysicsParams physics = opt.physics;
    if (!with_friction) physics.friction = {};

    StepPolicy policy;
    policy.viscosity = opt.viscosity;
    StepWorkspace ws;
    double prev_time = -1.0;
    while (state.time < t_end && state.time != prev_time) {
        prev_time = state.time;
        advance(state, mesh, terrain, physics, SourceModel::none(), policy, ws,
                opt.workers, t_end - state.time);
    }

    Profile1D p;
    p.x.resize(mesh.cell_count());
    p.h.resize(mesh.cell_count());
    p.v.resize(mesh.cell_count());
    for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
        p.x[i] = mesh.cell(i).centroid.x;
        p.h[i] = state.h[i];
        p.v[i] = state.v[i].x;
    }
    return p;
}

double l1_error(const std::vector<double>& x, const std::vector<double>& h_num,
                const std::vector<double>& h_ref) {
    if (x.size() != h_num.size() || x.size() != h_ref.size() || x.empty())
        throw std::invalid_argument("l1_error: profile length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(h_num[i] - h_ref[i]);
    return acc / static_cast<double>(x.size());
}

}  // namespace vswe
