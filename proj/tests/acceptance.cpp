// Acceptance suite: one scenario per shipped guarantee, one PASS/FAIL line
// each, nonzero exit if anything fails. Scenarios and tolerances are pinned
// here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vswe/diagnostics.hpp"
#include "vswe/experiments.hpp"
#include "vswe/fmt.hpp"
#include "vswe/timestep.hpp"

using namespace vswe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string details;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. and 2. -- lake states stay bitwise frozen for 1000 steps.
Outcome lake_criterion(bool singular, double time_budget) {
    const auto t0 = std::chrono::steady_clock::now();
    const LakeTestResult r = lake_experiment(32, 1000, /*seed=*/2024, singular,
                                             /*viscosity=*/true);
    const double elapsed = seconds_since(t0);
    Outcome o;
    o.pass = r.exact() && elapsed < time_budget;
    o.details = "max|dh| = " + fmt_double(r.max_dh) + ", max|v| = " +
                fmt_double(r.max_speed) + ", " + fmt_double(elapsed) + " s";
    return o;
}

// 3. -- steady sheet flow: per-step change and closed-form velocity, 1e-10.
Outcome uniform_criterion() {
    const UniformTestResult r = uniform_flow_experiment(
        64, /*margin=*/24, /*steps=*/20, {0.01, 0.0}, 0.7, 0.5, {0.1, 0.02});
    Outcome o;
    o.pass = r.max_step_rel_change < 1e-10 && r.max_v_rel_error < 1e-10;
    o.details = "per-step change = " + fmt_double(r.max_step_rel_change) +
                ", velocity error = " + fmt_double(r.max_v_rel_error);
    return o;
}

// 4. -- randomized dam breaks never drive a depth negative.
Outcome positivity_criterion() {
    std::mt19937_64 rng(9001);
    std::uniform_real_distribution<double> uz(0.0, 1.0), uh(0.0, 3.0), uth(0.1, 1.0),
        uv(-1.0, 1.0);
    double min_h = 0.0;
    double worst_clamp_ratio = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        Mesh m = attach_ghosts(build_structured_mesh(MeshKind::rectangular, 16, 16, 1.0),
                               GhostPolicy::copy_owner());
        Terrain t;
        t.z.resize(m.cell_count());
        t.theta.resize(m.cell_count());
        FieldState s = FieldState::zeros(m);
        for (std::size_t i = 0; i < m.cell_count(); ++i) {
            t.z[i] = uz(rng);
            t.theta[i] = uth(rng);
            s.h[i] = (rng() % 4 == 0) ? 0.0 : uh(rng);
            s.v[i] = {uv(rng), uv(rng)};
        }
        const double mass0 = total_volume(m, t, s);
        StepPolicy policy;  // min-of-both bounds
        StepWorkspace ws;
        double clamped = 0.0;
        for (int step = 0; step < 500; ++step) {
            const StepReport r =
                advance(s, m, t, PhysicsParams{9.81, {0.1, 0.02}}, SourceModel::none(),
                        policy, ws);
            clamped += r.clamped_mass;
            for (const double h : s.h) min_h = std::min(min_h, h);
        }
        if (mass0 > 0.0)
            worst_clamp_ratio = std::max(worst_clamp_ratio, clamped / mass0);
    }
    Outcome o;
    o.pass = min_h >= 0.0 && worst_clamp_ratio < 1e-10;
    o.details = "min h = " + fmt_double(min_h) +
                ", worst clamp/mass = " + fmt_double(worst_clamp_ratio);
    return o;
}

struct Crater {
    Mesh mesh;
    Terrain terrain;
    FieldState state;
};

// Crater rim inside the domain; the started column cannot reach the outer
// cells, so no water crosses the ghost interfaces.
Crater crater_dam_break(std::uint32_t n) {
    Crater c;
    c.mesh = attach_ghosts(build_structured_mesh(MeshKind::rectangular, n, n, 1.0),
                           GhostPolicy::copy_owner());
    c.terrain.z.resize(c.mesh.cell_count());
    c.terrain.theta.assign(c.mesh.cell_count(), 0.9);
    const double mid = 0.5 * n, r0 = 0.38 * n;
    for (CellIndex i = 0; i < c.mesh.cell_count(); ++i) {
        const Vec2 p = c.mesh.cell(i).centroid;
        const double r = std::sqrt((p.x - mid) * (p.x - mid) + (p.y - mid) * (p.y - mid));
        c.terrain.z[i] = 5.0 * std::pow(r / r0, 8.0);
    }
    c.state = make_lake_state(c.mesh, c.terrain, 9.81 * 0.4, 9.81);
    for (CellIndex i = 0; i < c.mesh.cell_count(); ++i) {
        const Vec2 p = c.mesh.cell(i).centroid;
        if (std::abs(p.x - mid) < 0.12 * n && std::abs(p.y - mid) < 0.12 * n)
            c.state.h[i] += 0.35;
    }
    return c;
}

// 5. -- closed-basin mass conservation over 1000 steps.
Outcome conservation_criterion() {
    Crater c = crater_dam_break(24);
    const double mass0 = total_volume(c.mesh, c.terrain, c.state);
    StepPolicy policy;
    StepWorkspace ws;
    double worst = 0.0;
    for (int step = 0; step < 1000; ++step) {
        const StepReport r = advance(c.state, c.mesh, c.terrain,
                                     PhysicsParams{9.81, {0.05, 0.01}},
                                     SourceModel::none(), policy, ws);
        worst = std::max(worst, std::abs(r.mass - mass0) / mass0);
    }
    Outcome o;
    o.pass = worst < 1e-12;
    o.details = "worst relative drift = " + fmt_double(worst);
    return o;
}

// 6. -- with the artificial viscosity on, total energy must never rise
// beyond the roundoff allowance, and the dissipation term must stay
// nonnegative. The scenario is the gentlest genuine closed-basin dam break
// found: a steep bowl, a 5% column, drag on. Note the bound cannot survive
// even step one of a from-rest release: no mass moves yet and every
// dissipation channel scales with the old (zero) velocity, so the energy
// change equals the kinetic energy of the first kick exactly.
Outcome energy_criterion() {
    Mesh mesh = attach_ghosts(build_structured_mesh(MeshKind::rectangular, 24, 24, 1.0),
                              GhostPolicy::copy_owner());
    Terrain terrain;
    terrain.z.resize(mesh.cell_count());
    terrain.theta.assign(mesh.cell_count(), 0.9);
    for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
        const Vec2 p = mesh.cell(i).centroid;
        terrain.z[i] = 0.02 * ((p.x - 12.0) * (p.x - 12.0) + (p.y - 12.0) * (p.y - 12.0));
    }
    FieldState state = make_lake_state(mesh, terrain, 9.81 * 0.4, 9.81);
    for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
        const Vec2 p = mesh.cell(i).centroid;
        if (std::abs(p.x - 12.0) < 3.0 && std::abs(p.y - 12.0) < 3.0) state.h[i] += 0.02;
    }

    const PhysicsParams physics{9.81, {0.05, 0.01}};
    const double e0 = total_energy(mesh, terrain, state, physics.gravity);
    StepPolicy policy;  // viscosity on
    StepWorkspace ws;
    double e_prev = e0;
    double worst_rise = -1e300;
    double first_rise = 0.0;
    double min_dissipation = 1e300;
    for (int step = 0; step < 2000; ++step) {
        const auto mu = viscosity_coefficients(mesh, terrain, state, physics.gravity);
        const EnergyReport before = energy_report(mesh, terrain, state, physics, mu);
        min_dissipation = std::min(min_dissipation, before.viscous_dissipation);
        const StepReport r = advance(state, mesh, terrain, physics, SourceModel::none(),
                                     policy, ws);
        if (step == 0) first_rise = r.energy - e_prev;
        worst_rise = std::max(worst_rise, r.energy - e_prev);
        e_prev = r.energy;
    }
    Outcome o;
    o.pass = worst_rise <= 1e-10 * e0 && min_dissipation >= 0.0;
    o.details = "worst per-step rise = " + fmt_double(worst_rise) + " (allowance " +
                fmt_double(1e-10 * e0) + ", first-kick rise = " + fmt_double(first_rise) +
                "), min dissipation rate = " + fmt_double(min_dissipation) +
                (min_dissipation >= 0.0 ? " (>= 0 ok)" : " (NEGATIVE)");
    return o;
}

// 7. -- dam-break profiles converge to the closed-form solution. The run
// keeps the artificial viscosity on: without it the centered scheme
// oscillates at the shock and the errors do not even decrease.
Outcome riemann_criterion(double time_budget) {
    const auto t0 = std::chrono::steady_clock::now();
    RiemannIC ic;
    ic.h_left = 9.0;
    ic.h_right = 1.0;
    ic.x0 = 5.0;
    ic.z = 1.0;
    const double t_end = 0.15;
    Riemann1DOptions opt;
    opt.viscosity = true;

    std::vector<double> errors;
    double jump = 0.0;
    for (const std::uint32_t n : {100u, 200u, 400u, 800u}) {
        const RiemannResult r =
            riemann_experiment(ic, n, t_end, /*with_friction=*/false, opt);
        errors.push_back(r.l1);
        jump = r.jump_residual;
    }
    const double elapsed = seconds_since(t0);

    bool decreasing = true;
    for (std::size_t i = 1; i < errors.size(); ++i)
        decreasing = decreasing && errors[i] < errors[i - 1];
    const double order = std::log2(errors.front() / errors.back()) / 3.0;

    Outcome o;
    o.pass = decreasing && order >= 0.7 && jump < 1e-10 && elapsed < time_budget;
    std::string errs, orders;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (i) {
            errs += " ";
            if (i > 1) orders += " ";
            orders += fmt_double(std::log2(errors[i - 1] / errors[i]));
        }
        errs += fmt_double(errors[i]);
    }
    o.details = "L1 = [" + errs + "] (decreasing: " + (decreasing ? "yes" : "NO") +
                "), pair orders = [" + orders + "], mean order = " + fmt_double(order) +
                " (need >= 0.7), jump residual = " + fmt_double(jump) + ", " +
                fmt_double(elapsed) + " s";
    return o;
}

// 8. -- plant cover density orders the drainage curves.
Outcome drainage_criterion(DrainResult& dense_out, DrainResult& sparse_out) {
    DrainSetup setup;  // defaults pin the scenario: 64x64, h0 = 0.05, ap > as
    const DrainResult dense = drain_experiment(0.03, setup);
    const DrainResult sparse = drain_experiment(0.35, setup);
    dense_out = dense;
    sparse_out = sparse;

    Outcome o;
    bool monotone = true;
    for (std::size_t k = 1; k < dense.q.size(); ++k)
        monotone = monotone && dense.q[k] <= dense.q[k - 1] + 1e-14;
    for (std::size_t k = 1; k < sparse.q.size(); ++k)
        monotone = monotone && sparse.q[k] <= sparse.q[k - 1] + 1e-14;

    bool ordered = dense.q.size() == sparse.q.size();
    double min_gap = 1e300;
    if (ordered) {
        for (std::size_t k = 0; k < dense.q.size(); ++k) {
            if (dense.t[k] != sparse.t[k]) ordered = false;
            if (dense.q[k] < sparse.q[k] - 1e-14) ordered = false;
        }
        min_gap = dense.q.back() - sparse.q.back();
    }
    o.pass = monotone && ordered && min_gap >= 0.01;
    o.details = "q_dense(t_end) = " + fmt_double(dense.q.back()) +
                ", q_sparse(t_end) = " + fmt_double(sparse.q.back()) +
                ", gap = " + fmt_double(min_gap) +
                (monotone ? "" : ", NOT monotone") + (ordered ? "" : ", NOT ordered");
    return o;
}

// 9. -- the closed-form drag root agrees with bisection on a million draws.
Outcome friction_root_criterion() {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> uth(1e-8, 3.0), um(0.0, 10.0), uk(0.0, 2.0),
        udt(1e-6, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 1'000'000; ++i) {
        const double th = uth(rng), mom = um(rng), K = uk(rng), dt = udt(rng);
        const double s = friction_speed(th, mom, K, dt);
        // Bisection oracle.
        double lo = 0.0, hi = 1.0;
        const auto f = [&](double x) { return dt * K * x * x + th * x - mom; };
        while (f(hi) < 0.0) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        const double oracle = 0.5 * (lo + hi);
        const double rel = std::abs(s - oracle) / std::max(1e-300, oracle);
        if (mom == 0.0) continue;
        worst = std::max(worst, rel);
    }
    Outcome o;
    o.pass = worst < 1e-12;
    o.details = "worst relative mismatch = " + fmt_double(worst);
    return o;
}

// 10. -- the CLI produces byte-identical series regardless of worker count.
Outcome determinism_criterion() {
    Outcome o;
#ifdef VSWE_CLI_PATH
    const std::string cli = VSWE_CLI_PATH;
    const fs::path base = fs::temp_directory_path() / "vswe_acceptance_det";
    fs::remove_all(base);
    const auto run = [&](int workers) -> fs::path {
        const fs::path dir = base / ("w" + std::to_string(workers));
        fs::create_directories(dir);
        const std::string cmd = "\"" + cli + "\" --workers " + std::to_string(workers) +
                                " --out \"" + dir.string() +
                                "\" drain --theta 0.35 --t-end 60 --cells 64 " +
                                "> /dev/null";
        if (std::system(cmd.c_str()) != 0) return {};
        return dir / "q_theta0.35.csv";
    };
    const fs::path a = run(1);
    const fs::path b = run(8);
    if (a.empty() || b.empty() || !fs::exists(a) || !fs::exists(b)) {
        o.details = "CLI run failed";
        return o;
    }
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    o.pass = sa.str() == sb.str() && !sa.str().empty();
    o.details = o.pass ? "byte-identical series (" + std::to_string(sa.str().size()) +
                             " bytes)"
                       : "outputs differ";
    fs::remove_all(base);
#else
    o.details = "CLI path not wired in";
#endif
    return o;
}

}  // namespace

int main() {
    int failures = 0;
    const auto report = [&](int idx, const char* label, const Outcome& o) {
        std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", idx,
                    label, o.details.c_str());
        if (!o.pass) ++failures;
        std::fflush(stdout);
    };

    report(1, "well-balance, regular lake (exact, 1000 steps, <5 s)",
           lake_criterion(false, 5.0));
    report(2, "well-balance, singular lake (exact, 1000 steps)",
           lake_criterion(true, 60.0));
    report(3, "uniform flow fixed point (1e-10)", uniform_criterion());
    report(4, "h-positivity across 200 random dam breaks", positivity_criterion());
    report(5, "closed-basin mass conservation (1e-12, 1000 steps)",
           conservation_criterion());
    report(6, "energy monotonicity with viscosity (2000 steps)", energy_criterion());
    report(7, "dam-break convergence, order >= 0.7 (<30 s)", riemann_criterion(30.0));
    DrainResult dense, sparse;
    report(8, "drainage ordering by plant cover", drainage_criterion(dense, sparse));
    report(9, "drag root vs bisection on 1e6 draws", friction_root_criterion());
    report(10, "worker-count determinism of CLI output", determinism_criterion());

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
