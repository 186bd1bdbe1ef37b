#pragma once

#include <vector>

#include "vswe/mesh.hpp"
#include "vswe/physics.hpp"
#include "vswe/vec2.hpp"

namespace vswe {

/// Per-cell bed elevation z (m) and porosity theta (fraction of plan area not
/// occupied by plant stems, 0 < theta <= 1).
struct Terrain {
    std::vector<double> z;
    std::vector<double> theta;

    void validate(const Mesh& mesh) const;
};

Terrain uniform_terrain(const Mesh& mesh, double z, double theta);

/// Planar bed z = z0 + slope . centroid with constant porosity.
Terrain plane_terrain(const Mesh& mesh, Vec2 slope, double z0, double theta);

/// Bed elevation seen across an interface, resolving ghost altitude policy.
double bed_elevation(const Mesh& mesh, const Terrain& terrain, CellIndex id);

/// Primitive flow fields: depth h (m) and velocity v (m/s), plus model time.
struct FieldState {
    std::vector<double> h;
    std::vector<Vec2> v;
    double time = 0.0;

    static FieldState zeros(const Mesh& mesh);
};

/// Free surface level w = g (z + h) per cell.
std::vector<double> free_surface(const FieldState& state, const Terrain& terrain,
                                 double gravity);

/// Read-only conservative lens over a primitive state: theta*h and theta*h*v,
/// with dry cells reading as exactly (0, 0). Converting back yields the
/// untouched primitive fields, so the round trip is exact by construction.
class ConservativeView {
public:
    ConservativeView(const FieldState& state, const Terrain& terrain)
        : state_(state), terrain_(terrain) {}

    double theta_h(CellIndex i) const {
        const double h = state_.h[i];
        return h <= kDryDepth ? 0.0 : terrain_.theta[i] * h;
    }
    Vec2 theta_hv(CellIndex i) const {
        const double th = theta_h(i);
        return th == 0.0 ? Vec2{0.0, 0.0} : th * state_.v[i];
    }

    const FieldState& primitive() const { return state_; }

private:
    const FieldState& state_;
    const Terrain& terrain_;
};

/// Lake at rest with free surface level w_level = g * W. Wet depths are nudged
/// by ulps so z + h reproduces the surface elevation W bit for bit on every
/// wet cell; cells with bed above W stay dry. Velocity is zero.
FieldState make_lake_state(const Mesh& mesh, const Terrain& terrain, double w_level,
                           double gravity);

/// Constant-depth steady sheet flow on the planar bed z - z0 = slope . x.
/// The velocity points downhill with magnitude sqrt(theta h g |slope| / K):
/// the unique constant state balancing the bed gradient against drag.
FieldState make_uniform_flow_state(const Mesh& mesh, Vec2 slope, double theta,
                                   double h, const FrictionParams& friction,
                                   double gravity);

}  // namespace vswe
