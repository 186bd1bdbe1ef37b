// Batch driver for the shallow-water-over-vegetation engine. Subcommands run
// either a fully configured simulation or one of the canonical experiments
// (lake fixed point, uniform sheet flow, dam break against the closed-form
// solution, valley drainage). All results land as CSV/ASCII-grid files;
// nothing is interactive.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vswe/errors.hpp"
#include "vswe/experiments.hpp"
#include "vswe/fmt.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

void write_profile_csv(const std::filesystem::path& path, const vswe::RiemannResult& r) {
    std::ofstream out(path);
    std::string buf = "x,h_num,v_num,h_exact,v_exact\n";
    const bool overlay = !r.h_exact.empty();
    for (std::size_t i = 0; i < r.profile.x.size(); ++i) {
        vswe::append_double(buf, r.profile.x[i]);
        buf += ',';
        vswe::append_double(buf, r.profile.h[i]);
        buf += ',';
        vswe::append_double(buf, r.profile.v[i]);
        buf += ',';
        vswe::append_double(buf, overlay ? r.h_exact[i] : 0.0);
        buf += ',';
        vswe::append_double(buf, overlay ? r.v_exact[i] : 0.0);
        buf += '\n';
    }
    out << buf;
}

void write_series_csv(const std::filesystem::path& path, const vswe::DrainResult& d) {
    std::ofstream out(path);
    std::string buf = "t,q,energy,mass\n";
    for (std::size_t i = 0; i < d.t.size(); ++i) {
        vswe::append_double(buf, d.t[i]);
        buf += ',';
        vswe::append_double(buf, d.q[i]);
        buf += ',';
        vswe::append_double(buf, d.energy[i]);
        buf += ',';
        vswe::append_double(buf, d.mass[i]);
        buf += '\n';
    }
    out << buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-volume shallow water flow over vegetated terrain"};
    app.require_subcommand(1);

    int workers = 1;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    app.add_option("--workers", workers, "worker threads for the flux loops")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for synthetic terrains");

    // run
    auto* run = app.add_subcommand("run", "integrate a configured simulation");
    std::string config_path;
    run->add_option("--config", config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);

    // riemann
    auto* riemann = app.add_subcommand("riemann", "1-D dam break on a flat bed");
    double hl = 9.0, hr = 1.0, x0 = 5.0, length = 10.0, t_end = 0.15;
    double theta_l = 1.0, theta_r = 1.0;
    std::uint32_t cells = 400;
    bool with_friction = false, with_viscosity = false;
    riemann->add_option("--hl", hl, "left depth");
    riemann->add_option("--hr", hr, "right depth");
    riemann->add_option("--cells", cells, "number of cells")->check(CLI::PositiveNumber);
    riemann->add_option("--x0", x0, "diaphragm position");
    riemann->add_option("--length", length, "domain length");
    riemann->add_option("--t-end", t_end, "final time");
    riemann->add_option("--theta-left", theta_l, "porosity left of the diaphragm");
    riemann->add_option("--theta-right", theta_r, "porosity right of the diaphragm");
    riemann->add_flag("--with-friction", with_friction, "keep the drag term on");
    riemann->add_flag("--with-viscosity", with_viscosity, "keep artificial viscosity on");

    // lake-test
    auto* lake = app.add_subcommand("lake-test", "lake-at-rest fixed point check");
    std::uint32_t lake_cells = 32;
    std::uint64_t lake_steps = 1000;
    bool singular = false, no_viscosity = false;
    lake->add_option("--cells", lake_cells, "cells per side")->check(CLI::PositiveNumber);
    lake->add_option("--steps", lake_steps, "number of steps");
    lake->add_flag("--singular", singular, "partially wet basin (bowl terrain)");
    lake->add_flag("--no-viscosity", no_viscosity, "disable artificial viscosity");

    // uniform-test
    auto* uniform = app.add_subcommand("uniform-test", "steady sheet flow check");
    double slope_x = 0.01, slope_y = 0.0, u_theta = 0.7, u_h = 0.5;
    double alpha_p = 0.1, alpha_s = 0.02;
    std::uint32_t window = 64, margin = 24;
    std::uint64_t u_steps = 20;
    uniform->add_option("--slope-x", slope_x, "bed gradient, x");
    uniform->add_option("--slope-y", slope_y, "bed gradient, y");
    uniform->add_option("--theta", u_theta, "porosity");
    uniform->add_option("--depth", u_h, "sheet depth");
    uniform->add_option("--alpha-p", alpha_p, "plant drag strength");
    uniform->add_option("--alpha-s", alpha_s, "soil drag strength");
    uniform->add_option("--cells", window, "observation window side");
    uniform->add_option("--margin", margin, "buffer cells around the window");
    uniform->add_option("--steps", u_steps, "number of steps");

    // drain
    auto* drain = app.add_subcommand("drain", "valley drainage, water content series");
    double d_theta = 0.35, d_tend = 200.0, d_series = 5.0;
    std::uint32_t d_n = 64;
    drain->add_option("--theta", d_theta, "porosity (plant cover density)")->required();
    drain->add_option("--t-end", d_tend, "final time");
    drain->add_option("--series-dt", d_series, "sampling cadence");
    drain->add_option("--cells", d_n, "cells per side");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        std::filesystem::create_directories(out_dir);

        if (*run) {
            const vswe::RunConfig cfg = vswe::load_config(config_path);
            const auto res = vswe::run_from_config(cfg, out_dir, workers);
            std::printf("steps=%llu clamped_volume=%s sink_discharge=%s\n",
                        static_cast<unsigned long long>(res.steps),
                        vswe::fmt_double(res.clamped_total).c_str(),
                        vswe::fmt_double(res.sink_discharge).c_str());
            return 0;
        }

        if (*riemann) {
            vswe::RiemannIC ic;
            ic.h_left = hl;
            ic.h_right = hr;
            ic.theta_left = theta_l;
            ic.theta_right = theta_r;
            ic.x0 = x0;
            ic.z = 1.0;
            vswe::Riemann1DOptions opt;
            opt.domain_length = length;
            opt.viscosity = with_viscosity;
            opt.workers = workers;
            opt.physics.friction = {alpha_p, alpha_s};
            const auto res = vswe::riemann_experiment(ic, cells, t_end, with_friction, opt);
            write_profile_csv(std::filesystem::path(out_dir) / "profile.csv", res);
            if (!res.h_exact.empty())
                std::printf("l1_error=%s jump_residual=%s\n",
                            vswe::fmt_double(res.l1).c_str(),
                            vswe::fmt_double(res.jump_residual).c_str());
            else
                std::printf("no closed-form overlay for this initial condition\n");
            return 0;
        }

        if (*lake) {
            const auto res = vswe::lake_experiment(lake_cells, lake_steps, seed, singular,
                                                   !no_viscosity, workers);
            std::printf("max |dstate/step| = %s (depth), %s (speed) over %llu steps\n",
                        vswe::fmt_double(res.max_dh).c_str(),
                        vswe::fmt_double(res.max_speed).c_str(),
                        static_cast<unsigned long long>(res.steps));
            return res.exact() ? 0 : 1;
        }

        if (*uniform) {
            const auto res = vswe::uniform_flow_experiment(
                window, margin, u_steps, {slope_x, slope_y}, u_theta, u_h,
                {alpha_p, alpha_s}, vswe::kDefaultGravity, workers);
            std::printf("per-step relative change = %s\n",
                        vswe::fmt_double(res.max_step_rel_change).c_str());
            std::printf("velocity error vs closed form = %s (expected v = %s, %s)\n",
                        vswe::fmt_double(res.max_v_rel_error).c_str(),
                        vswe::fmt_double(res.v_expected.x).c_str(),
                        vswe::fmt_double(res.v_expected.y).c_str());
            return res.max_step_rel_change < 1e-10 ? 0 : 1;
        }

        if (*drain) {
            vswe::DrainSetup setup;
            setup.n = d_n;
            setup.t_end = d_tend;
            setup.series_dt = d_series;
            const auto res = vswe::drain_experiment(d_theta, setup, workers);
            const std::string name = "q_theta" + vswe::fmt_double(d_theta) + ".csv";
            write_series_csv(std::filesystem::path(out_dir) / name, res);
            std::printf("q(t_end) = %s after %s s\n",
                        vswe::fmt_double(res.q.back()).c_str(),
                        vswe::fmt_double(res.t.back()).c_str());
            return 0;
        }
    } catch (const vswe::SolverError& e) {
        std::cerr << "solver abort: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
