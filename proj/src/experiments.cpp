#include "vswe/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "vswe/errors.hpp"
#include "vswe/fmt.hpp"
#include "vswe/reduce.hpp"

namespace vswe {

SimulationResult simulate(
    FieldState& state, const Mesh& mesh, const Terrain& terrain,
    const PhysicsParams& physics, const SourceModel& sources, const StepPolicy& policy,
    double t_end, double series_dt, double snapshot_dt,
    const std::function<void(const StepReport&)>& on_series,
    const std::function<void(const FieldState&, std::uint64_t)>& on_snapshot,
    std::span<const CellIndex> sink_cells, int workers) {
    SimulationResult res;
    StepWorkspace ws;
    ws.bind(mesh);

    const bool snapshots = on_snapshot && snapshot_dt > 0.0;
    std::uint64_t snapshot_index = 0;
    if (snapshots) on_snapshot(state, snapshot_index++);
    double next_series = state.time + series_dt;
    double next_snapshot = state.time + snapshot_dt;

    while (state.time < t_end) {
        double limit = t_end - state.time;
        if (series_dt > 0.0) limit = std::min(limit, next_series - state.time);
        if (snapshots) limit = std::min(limit, next_snapshot - state.time);

        const double before = state.time;
        const StepReport rep =
            advance(state, mesh, terrain, physics, sources, policy, ws, workers, limit);
        if (state.time == before) break;  // step shorter than time resolution
        ++res.steps;
        res.clamped_total += rep.clamped_mass;
        if (res.steps % 1000 == 0)
            log_msg(1, "t = " + fmt_double(state.time) + " dt = " + fmt_double(rep.dt) +
                           " after " + std::to_string(res.steps) + " steps");

        if (!sink_cells.empty()) {
            NeumaierSum drained;
            for (const CellIndex c : sink_cells) {
                drained.add(mesh.cell(c).area * terrain.theta[c] * state.h[c]);
                state.h[c] = 0.0;
                state.v[c] = {0.0, 0.0};
            }
            res.sink_discharge += drained.value();
        }

        const bool series_due =
            series_dt <= 0.0 || state.time >= next_series || state.time >= t_end;
        if (on_series && series_due) on_series(rep);
        if (series_dt > 0.0 && state.time >= next_series) next_series += series_dt;

        if (snapshots && state.time >= next_snapshot) {
            on_snapshot(state, snapshot_index++);
            next_snapshot += snapshot_dt;
        }
    }
    log_msg(1, "run finished at t = " + fmt_double(state.time) + " in " +
                   std::to_string(res.steps) + " steps");
    return res;
}

// --- lake ---------------------------------------------------------------------

LakeTestResult lake_experiment(std::uint32_t cells, std::uint64_t steps,
                               std::uint64_t seed, bool singular, bool viscosity,
                               int workers) {
    Mesh mesh = build_structured_mesh(MeshKind::rectangular, cells, cells, 1.0);
    Terrain terrain;
    terrain.theta.resize(mesh.cell_count());
    terrain.z.resize(mesh.cell_count());

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uz(0.0, 1.0);
    std::uniform_real_distribution<double> uth(0.2, 1.0);
    double surface = 0.0;  // target free-surface elevation
    if (singular) {
        // Paraboloid bowl; the lake covers roughly the lowest 40% of cells.
        const double c = 0.5 * cells;
        std::vector<double> sorted;
        for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
            const Vec2 p = mesh.cell(i).centroid;
            const double r2 = (p.x - c) * (p.x - c) + (p.y - c) * (p.y - c);
            terrain.z[i] = 4.0 * r2 / (c * c);
            terrain.theta[i] = uth(rng);
            sorted.push_back(terrain.z[i]);
        }
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() * 2 / 5,
                         sorted.end());
        surface = sorted[sorted.size() * 2 / 5];
    } else {
        for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
            terrain.z[i] = uz(rng);
            terrain.theta[i] = uth(rng);
        }
        surface = 1.5;  // above every bed sample, so all cells are wet
    }

    // Closed basin: walls above the water line; a draining boundary would be
    // a flow, not a lake.
    mesh = attach_ghosts(mesh, GhostPolicy::fixed(surface + 10.0));

    const double g = kDefaultGravity;
    FieldState state = make_lake_state(mesh, terrain, g * surface, g);
    const FieldState initial = state;

    StepPolicy policy;
    policy.viscosity = viscosity;
    StepWorkspace ws;
    ws.bind(mesh);

    LakeTestResult out;
    out.steps = steps;
    for (std::uint64_t s = 0; s < steps; ++s) {
        advance(state, mesh, terrain, PhysicsParams{g, {0.05, 0.01}},
                SourceModel::none(), policy, ws, workers);
        for (std::size_t i = 0; i < state.h.size(); ++i) {
            out.max_dh = std::max(out.max_dh, std::abs(state.h[i] - initial.h[i]));
            out.max_speed = std::max(out.max_speed, norm(state.v[i]));
        }
    }
    return out;
}

// --- uniform flow ---------------------------------------------------------------

UniformTestResult uniform_flow_experiment(std::uint32_t window, std::uint32_t margin,
                                          std::uint64_t steps, Vec2 slope, double theta,
                                          double depth, const FrictionParams& friction,
                                          double gravity, int workers) {
    const std::uint32_t n = window + 2 * margin;
    Mesh mesh = build_structured_mesh(MeshKind::rectangular, n, n, 1.0);
    mesh = attach_ghosts(mesh, GhostPolicy::copy_owner());
    const Terrain terrain = plane_terrain(mesh, slope, 0.0, theta);
    FieldState state =
        make_uniform_flow_state(mesh, slope, theta, depth, friction, gravity);
    const Vec2 v_expected = state.v.front();

    const auto in_window = [&](CellIndex i) {
        const std::uint32_t ix = i % n, iy = i / n;
        return ix >= margin && ix < margin + window && iy >= margin &&
               iy < margin + window;
    };

    StepPolicy policy;
    StepWorkspace ws;
    ws.bind(mesh);
    const PhysicsParams physics{gravity, friction};

    UniformTestResult out;
    out.v_expected = v_expected;
    FieldState prev = state;
    for (std::uint64_t s = 0; s < steps; ++s) {
        advance(state, mesh, terrain, physics, SourceModel::none(), policy, ws, workers);
        for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
            if (!in_window(i)) continue;
            const double rel_h = std::abs(state.h[i] - prev.h[i]) / depth;
            const double rel_v = norm(state.v[i] - prev.v[i]) / norm(v_expected);
            out.max_step_rel_change =
                std::max({out.max_step_rel_change, rel_h, rel_v});
        }
        prev = state;
    }
    for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
        if (!in_window(i)) continue;
        out.max_v_rel_error = std::max(
            out.max_v_rel_error, norm(state.v[i] - v_expected) / norm(v_expected));
    }
    return out;
}

// --- drainage -------------------------------------------------------------------

DrainResult drain_experiment(double theta, const DrainSetup& setup, int workers) {
    Mesh mesh = build_structured_mesh(MeshKind::rectangular, setup.n, setup.n,
                                      setup.spacing);
    mesh = attach_ghosts(mesh, GhostPolicy::copy_owner());  // free discharge

    // Tilted valley: falls toward x = 0, side slopes funnel to the axis.
    Terrain terrain;
    terrain.z.resize(mesh.cell_count());
    terrain.theta.assign(mesh.cell_count(), theta);
    const double yc = 0.5 * setup.n * setup.spacing;
    for (CellIndex i = 0; i < mesh.cell_count(); ++i) {
        const Vec2 p = mesh.cell(i).centroid;
        terrain.z[i] = setup.slope_x * p.x + setup.slope_y * std::abs(p.y - yc);
    }

    FieldState state = FieldState::zeros(mesh);
    state.h.assign(mesh.cell_count(), setup.h0);

    const PhysicsParams physics{setup.gravity, setup.friction};
    StepPolicy policy;

    DrainResult out;
    WaterContent q(mesh, state);
    out.t.push_back(0.0);
    out.q.push_back(1.0);
    out.energy.push_back(total_energy(mesh, terrain, state, setup.gravity));
    out.mass.push_back(total_volume(mesh, terrain, state));

    simulate(
        state, mesh, terrain, physics, SourceModel::none(), policy, setup.t_end,
        setup.series_dt, 0.0,
        [&](const StepReport& rep) {
            q.record(state);
            out.t.push_back(rep.t);
            out.q.push_back(q.values().back());
            out.energy.push_back(rep.energy);
            out.mass.push_back(rep.mass);
        },
        nullptr, {}, workers);
    return out;
}

// --- dam break -------------------------------------------------------------------

RiemannResult riemann_experiment(const RiemannIC& ic, std::uint32_t cells, double t_end,
                                 bool with_friction, const Riemann1DOptions& opt) {
    RiemannResult out;
    out.profile = run_riemann_1d(ic, cells, t_end, with_friction, opt);
    if (ic.theta_left == 1.0 && ic.theta_right == 1.0 && ic.v_left == 0.0 &&
        ic.v_right == 0.0 && ic.h_left > ic.h_right && ic.h_right > 0.0) {
        const ExactDamBreak exact(ic.h_left, ic.h_right, opt.physics.gravity);
        out.jump_residual = exact.jump_residual();
        out.h_exact.resize(out.profile.x.size());
        out.v_exact.resize(out.profile.x.size());
        std::vector<double> xs, hn, hx;
        for (std::size_t i = 0; i < out.profile.x.size(); ++i) {
            const auto s = exact.at((out.profile.x[i] - ic.x0) / t_end);
            out.h_exact[i] = s.h;
            out.v_exact[i] = s.v;
            if (std::abs(out.profile.x[i] - ic.x0) <= opt.compare_halfwidth) {
                xs.push_back(out.profile.x[i]);
                hn.push_back(out.profile.h[i]);
                hx.push_back(s.h);
            }
        }
        out.l1 = l1_error(xs, hn, hx);
    }
    return out;
}

// --- configured run ---------------------------------------------------------------

namespace {

struct BuiltRun {
    Mesh mesh;
    Terrain terrain;
    FieldState state;
    std::vector<CellIndex> sinks;
};

BuiltRun build_run(const RunConfig& cfg) {
    BuiltRun b;
    std::optional<Raster> dem;
    if (cfg.terrain.dem_path) dem = read_esri_ascii(cfg.terrain.dem_path.value());

    if (cfg.mesh) {
        const MeshSpec& m = *cfg.mesh;
        b.mesh = build_structured_mesh(m.kind, m.nx, m.ny, m.spacing, m.origin);
    } else {
        b.mesh = build_structured_mesh(MeshKind::rectangular, dem->ncols, dem->nrows,
                                       dem->cellsize, {dem->xllcorner, dem->yllcorner});
    }
    b.mesh = attach_ghosts(std::move(b.mesh), cfg.ghost);

    if (dem) {
        std::optional<Raster> porosity;
        if (cfg.terrain.porosity_path)
            porosity = read_esri_ascii(cfg.terrain.porosity_path.value());
        TerrainBuild tb = terrain_from_rasters(b.mesh, *dem, porosity,
                                               cfg.terrain.porosity_const.value_or(1.0),
                                               cfg.terrain.nodata);
        b.terrain = std::move(tb.terrain);
        b.sinks = std::move(tb.sink_cells);
    } else {
        b.terrain = plane_terrain(b.mesh, *cfg.terrain.plane_slope, cfg.terrain.plane_z0,
                                  cfg.terrain.porosity_const.value_or(1.0));
    }
    b.terrain.validate(b.mesh);

    switch (cfg.init.kind) {
        case InitSpec::Kind::lake:
            b.state = make_lake_state(b.mesh, b.terrain, cfg.init.w_level,
                                      cfg.physics.gravity);
            break;
        case InitSpec::Kind::uniform_depth:
            b.state = FieldState::zeros(b.mesh);
            b.state.h.assign(b.mesh.cell_count(), cfg.init.h0);
            break;
        case InitSpec::Kind::dam_break:
            b.state = FieldState::zeros(b.mesh);
            for (CellIndex i = 0; i < b.mesh.cell_count(); ++i)
                b.state.h[i] = b.mesh.cell(i).centroid.x < cfg.init.x0 ? cfg.init.h_left
                                                                       : cfg.init.h_right;
            break;
        case InitSpec::Kind::raster: {
            const Raster hr = read_esri_ascii(cfg.init.h_raster);
            b.state = FieldState::zeros(b.mesh);
            for (CellIndex i = 0; i < b.mesh.cell_count(); ++i) {
                const double v = hr.values[raster_cell_index(hr, b.mesh.cell(i).centroid)];
                b.state.h[i] = hr.is_nodata(v) ? 0.0 : std::max(0.0, v);
            }
            break;
        }
    }
    for (const CellIndex c : b.sinks) b.state.h[c] = 0.0;
    return b;
}

}  // namespace

SimulationResult run_from_config(const RunConfig& cfg,
                                 const std::filesystem::path& out_dir, int workers) {
    BuiltRun b = build_run(cfg);
    std::filesystem::create_directories(out_dir);

    std::ofstream series(out_dir / "series.csv");
    series << "t,dt,mass,energy,max_v,clamped_mass\n";
    std::ofstream content(out_dir / "content.csv");
    content << "t,q,energy,mass\n";

    // q(t) is undefined for a dry start (rain-driven runs); report zero then.
    const double q0 = depth_integral(b.mesh, b.state);
    const auto content_row = [&](double t, double energy, double mass) {
        const double q = q0 > 0.0 ? depth_integral(b.mesh, b.state) / q0 : 0.0;
        std::string row;
        append_double(row, t);
        row += ',';
        append_double(row, q);
        row += ',';
        append_double(row, energy);
        row += ',';
        append_double(row, mass);
        row += '\n';
        content << row;
    };
    content_row(b.state.time,
                total_energy(b.mesh, b.terrain, b.state, cfg.physics.gravity),
                total_volume(b.mesh, b.terrain, b.state));

    FieldState last_good = b.state;
    try {
        return simulate(
            b.state, b.mesh, b.terrain, cfg.physics, cfg.sources, cfg.policy,
            cfg.output.t_end, cfg.output.series_dt, cfg.output.snapshot_dt,
            [&](const StepReport& rep) {
                std::string row;
                append_double(row, rep.t);
                row += ',';
                append_double(row, rep.dt);
                row += ',';
                append_double(row, rep.mass);
                row += ',';
                append_double(row, rep.energy);
                row += ',';
                append_double(row, rep.max_speed);
                row += ',';
                append_double(row, rep.clamped_mass);
                row += '\n';
                series << row;
                content_row(rep.t, rep.energy, rep.mass);
                last_good = b.state;
            },
            [&](const FieldState& s, std::uint64_t idx) {
                write_snapshot(b.mesh, b.terrain, s, cfg.physics.gravity, idx, out_dir);
            },
            b.sinks, workers);
    } catch (const SolverError&) {
        write_snapshot(b.mesh, b.terrain, last_good, cfg.physics.gravity,
                       999999, out_dir / "abort");
        throw;
    }
}

}  // namespace vswe
