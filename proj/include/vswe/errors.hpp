#pragma once

#include <stdexcept>

namespace vswe {

/// Fatal integration failure (positivity violation, vanishing time step,
/// source solver breakdown). The batch driver dumps the last valid state and
/// exits with a dedicated code when it sees one of these.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (raster or run configuration).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vswe
