#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "vswe/diagnostics.hpp"
#include "vswe/io.hpp"
#include "vswe/riemann.hpp"
#include "vswe/timestep.hpp"

namespace vswe {

/// Scheduled time loop shared by every driver: advances to t_end, landing
/// exactly on series/snapshot times (the step is shortened, never stretched,
/// so the stability bounds still hold). `sink_cells` are drained after each
/// step with the removed volume tallied as discharge.
struct SimulationResult {
    std::uint64_t steps = 0;
    double clamped_total = 0.0;   // volume snapped to zero across the run
    double sink_discharge = 0.0;  // volume removed through sink cells
};

SimulationResult simulate(
    FieldState& state, const Mesh& mesh, const Terrain& terrain,
    const PhysicsParams& physics, const SourceModel& sources, const StepPolicy& policy,
    double t_end, double series_dt, double snapshot_dt,
    const std::function<void(const StepReport&)>& on_series,
    const std::function<void(const FieldState&, std::uint64_t)>& on_snapshot,
    std::span<const CellIndex> sink_cells = {}, int workers = 1);

// --- canonical experiments ---------------------------------------------------

/// Lake at rest on random (regular) or bowl (singular) terrain inside closed
/// walls; reports the worst deviation from the initial state over the run.
/// Both deviations must be exactly zero.
struct LakeTestResult {
    double max_dh = 0.0;
    double max_speed = 0.0;
    std::uint64_t steps = 0;
    bool exact() const { return max_dh == 0.0 && max_speed == 0.0; }
};

LakeTestResult lake_experiment(std::uint32_t cells, std::uint64_t steps,
                               std::uint64_t seed, bool singular, bool viscosity,
                               int workers = 1);

/// Steady sheet flow on a plane, watched through an interior window that the
/// boundary influence cannot reach within the allotted steps.
struct UniformTestResult {
    double max_step_rel_change = 0.0;  // worst per-step relative change in the window
    double max_v_rel_error = 0.0;      // window velocity vs the closed form, at the end
    Vec2 v_expected;
};

UniformTestResult uniform_flow_experiment(std::uint32_t window, std::uint32_t margin,
                                          std::uint64_t steps, Vec2 slope, double theta,
                                          double depth, const FrictionParams& friction,
                                          double gravity = kDefaultGravity,
                                          int workers = 1);

/// Drainage of an initially uniform sheet on a synthetic tilted valley with
/// free discharge; q(t) sampled on the shared cadence.
struct DrainResult {
    std::vector<double> t;
    std::vector<double> q;
    std::vector<double> energy;
    std::vector<double> mass;
};

struct DrainSetup {
    std::uint32_t n = 64;           // n x n cells
    double spacing = 1.0;           // m
    double slope_x = 0.05;          // valley tilt along the outlet axis
    double slope_y = 0.02;          // cross-valley side slopes
    double h0 = 0.05;               // initial sheet depth, m
    double t_end = 200.0;
    double series_dt = 5.0;
    FrictionParams friction{0.1, 0.01};
    double gravity = kDefaultGravity;
};

DrainResult drain_experiment(double theta, const DrainSetup& setup, int workers = 1);

/// Dam-break run plus, for unit porosity, the closed-form overlay and its
/// length-weighted L1 depth error.
struct RiemannResult {
    Profile1D profile;
    std::vector<double> h_exact;  // empty unless theta == 1 on both sides
    std::vector<double> v_exact;
    double l1 = 0.0;
    double jump_residual = 0.0;
};

RiemannResult riemann_experiment(const RiemannIC& ic, std::uint32_t cells, double t_end,
                                 bool with_friction, const Riemann1DOptions& opt = {});

/// Full configured run: builds mesh/terrain/initial state, integrates with
/// scheduled CSV series (t, dt, mass, energy, max_v, clamped_mass), a water
/// content series (t, q, E, mass) and raster snapshots under `out_dir`.
/// On SolverError the last valid state is dumped beneath out_dir/abort before
/// the exception propagates.
SimulationResult run_from_config(const RunConfig& cfg,
                                 const std::filesystem::path& out_dir, int workers = 1);

}  // namespace vswe
