#pragma once

#include <cmath>

namespace vswe {

/// Neumaier compensated accumulator. Used for the mass/energy audits so the
/// measurement itself does not drown the drift being measured. Deterministic:
/// always fed in fixed cell/edge order.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace vswe
