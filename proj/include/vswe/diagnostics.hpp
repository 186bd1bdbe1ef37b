#pragma once

#include <span>
#include <vector>

#include "vswe/mesh.hpp"
#include "vswe/physics.hpp"
#include "vswe/scheme.hpp"
#include "vswe/state.hpp"

namespace vswe {

/// Cell energy density E = theta (|v|^2 h / 2 + g h^2 / 2 + g z h).
/// Totals below weight it by cell area.
inline double cell_energy(double h, Vec2 v, double z, double theta, double gravity) {
    return theta * (0.5 * dot(v, v) * h + 0.5 * gravity * h * h + gravity * z * h);
}

/// Sum of sigma_i * E_i in fixed cell order (compensated).
double total_energy(const Mesh& mesh, const Terrain& terrain, const FieldState& state,
                    double gravity);

/// Water volume sum sigma_i * theta_i * h_i (compensated, fixed order).
double total_volume(const Mesh& mesh, const Terrain& terrain, const FieldState& state);

/// Plain depth integral sum sigma_i * h_i, the numerator of the water
/// content ratio q(t).
double depth_integral(const Mesh& mesh, const FieldState& state);

/// Energy flux vector through an internal interface,
///   H = (1/2) theta_h_up (w_i v_i + w_j v_j + <v_i, v_j> v_mean),
/// the discrete counterpart of theta h v (|v|^2/2 + w). The same vector serves
/// both sides; only the normal flips.
Vec2 energy_flux_H(const Edge& edge, const FieldState& state, const Terrain& terrain,
                   std::span<const double> w);

/// Energy bookkeeping of one state: per-cell densities, the area-weighted
/// total, the flux leaving through boundary interfaces, and the two
/// dissipation channels (drag, artificial viscosity).
struct EnergyReport {
    std::vector<double> cell;        // E_i densities
    double total = 0.0;              // sum sigma E
    double boundary_flux = 0.0;      // sum over ghost edges of l <H, n>
    double friction_dissipation = 0.0;  // sum sigma K |v|^3
    double viscous_dissipation = 0.0;   // sum over edges of l mu |v_i - v_j|^2
};

EnergyReport energy_report(const Mesh& mesh, const Terrain& terrain,
                           const FieldState& state, const PhysicsParams& physics,
                           std::span<const double> mu);

/// Exact algebraic split of the total-energy change between two states:
///   dE = term_mass + term_momentum + quad_h + quad_v
/// with quad_h = g/2 sum theta sigma (dh)^2 and quad_v = sum theta sigma
/// h_next |dv|^2 / 2 both nonnegative. `friction` is the identifiable drag
/// contribution -dt sum sigma K(h_next) |v_next| <v_next, v_prev>; whatever
/// `term_mass + term_momentum` holds beyond it (interior exchange, boundary
/// and source contributions) lands in `remainder`.
struct EnergyStepAudit {
    double dE = 0.0;
    double term_mass = 0.0;
    double term_momentum = 0.0;
    double quad_h = 0.0;
    double quad_v = 0.0;
    double friction = 0.0;
    double remainder = 0.0;
};

EnergyStepAudit energy_step_audit(const Mesh& mesh, const Terrain& terrain,
                                  const FieldState& before, const FieldState& after,
                                  double dt, const PhysicsParams& physics);

/// Water content series q(t) = depth_integral(t) / depth_integral(0).
class WaterContent {
public:
    WaterContent(const Mesh& mesh, const FieldState& initial);

    void record(const FieldState& state);
    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& values() const { return q_; }

private:
    const Mesh& mesh_;
    double q0_;
    std::vector<double> t_, q_;
};

}  // namespace vswe
