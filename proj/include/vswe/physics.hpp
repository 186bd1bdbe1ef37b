#pragma once

#include <vector>

namespace vswe {

inline constexpr double kDefaultGravity = 9.81;  // m/s^2

/// Water depth below which a cell counts as dry: velocity is forced to zero
/// and the cell is excluded from momentum-recovery division.
inline constexpr double kDryDepth = 1e-10;  // m

/// Strength of the water-plant (alpha_p, 1/m) and water-soil (alpha_s)
/// interactions entering the drag coefficient.
struct FrictionParams {
    double alpha_p = 0.0;
    double alpha_s = 0.0;
};

/// Drag coefficient K(h, theta) = alpha_p * h * (1 - theta) + theta * alpha_s.
/// Linear and nondecreasing in h; reduces to alpha_s on bare soil (theta = 1).
inline double friction_K(double h, double theta, const FrictionParams& p) {
    return p.alpha_p * h * (1.0 - theta) + theta * p.alpha_s;
}

struct PhysicsParams {
    double gravity = kDefaultGravity;
    FrictionParams friction;
};

/// Piecewise-constant, left-continuous rain series: rate(t) = r_k for
/// t_k < t <= t_{k+1}, and r_last beyond the final breakpoint.
struct Hyetograph {
    std::vector<double> t;  // strictly increasing breakpoints
    std::vector<double> r;  // rate holding after each breakpoint, m/s

    double at(double time) const;
};

struct RainModel {
    enum class Kind { constant, hyetograph };
    Kind kind = Kind::constant;
    double constant_rate = 0.0;  // m/s
    Hyetograph series;

    double rate(double t) const {
        return kind == Kind::constant ? constant_rate : series.at(t);
    }

    static RainModel none() { return {}; }
    static RainModel constant(double r) { return {Kind::constant, r, {}}; }
    static RainModel from_series(Hyetograph h) {
        return {Kind::hyetograph, 0.0, std::move(h)};
    }
};

/// Infiltration laws. All are continuous in h and bounded by `bound()`:
///   none            iota = 0
///   constant        iota = rate
///   horton          iota = f_c + (f_0 - f_c) exp(-k t)
/// With `h_gated`, the rate ramps linearly to zero on [0, gate_depth] so no
/// water infiltrates from a dry cell while iota stays continuous.
struct InfiltrationModel {
    enum class Kind { none, constant, horton };
    Kind kind = Kind::none;
    double constant_rate = 0.0;            // m/s
    double horton_f0 = 0.0;                // initial capacity, m/s
    double horton_fc = 0.0;                // asymptotic capacity, m/s
    double horton_k = 0.0;                 // decay rate, 1/s
    bool h_gated = false;
    double gate_depth = 1e-6;              // m

    double rate(double t, double h) const;
    double bound() const;  // iota_m: strict upper bound of |rate| on h >= 0

    static InfiltrationModel none() { return {}; }
    static InfiltrationModel constant(double r, bool gated = true) {
        InfiltrationModel m;
        m.kind = Kind::constant;
        m.constant_rate = r;
        m.h_gated = gated;
        return m;
    }
    static InfiltrationModel horton(double f0, double fc, double k, bool gated = true) {
        InfiltrationModel m;
        m.kind = Kind::horton;
        m.horton_f0 = f0;
        m.horton_fc = fc;
        m.horton_k = k;
        m.h_gated = gated;
        return m;
    }
};

struct SourceModel {
    RainModel rain;
    InfiltrationModel infiltration;

    bool is_zero() const {
        return rain.kind == RainModel::Kind::constant && rain.constant_rate == 0.0 &&
               infiltration.kind == InfiltrationModel::Kind::none;
    }

    static SourceModel none() { return {}; }
};

/// Net mass source M = r(t) - theta * iota(t, h), in m/s.
inline double mass_source(double t, double h, double theta, const SourceModel& m) {
    return m.rain.rate(t) - theta * m.infiltration.rate(t, h);
}

}  // namespace vswe
