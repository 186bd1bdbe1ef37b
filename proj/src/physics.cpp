#include "vswe/physics.hpp"

#include <algorithm>
#include <cmath>

namespace vswe {

double Hyetograph::at(double time) const {
    if (t.empty() || time <= t.front()) return 0.0;
    // Left-continuous lookup: the value set at breakpoint t_k applies on
    // (t_k, t_{k+1}].
    const auto it = std::lower_bound(t.begin(), t.end(), time);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    return r[k - 1];
}

double InfiltrationModel::rate(double t, double h) const {
    double base = 0.0;
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::constant: base = constant_rate; break;
        case Kind::horton: base = horton_fc + (horton_f0 - horton_fc) * std::exp(-horton_k * t); break;
    }
    if (h_gated) {
        const double hh = std::max(h, 0.0);
        base *= std::min(1.0, hh / gate_depth);
    }
    return base;
}

double InfiltrationModel::bound() const {
    switch (kind) {
        case Kind::none: return 0.0;
        case Kind::constant: return std::abs(constant_rate);
        case Kind::horton: return std::max(std::abs(horton_f0), std::abs(horton_fc));
    }
    return 0.0;
}

}  // namespace vswe
