#pragma once

#include "theicp/model.hpp"

#include <vector>

namespace theicp {

/// Reference row of a bundled example: a documented starting point and the
/// solution it converges to (4-decimal published values).
struct ReferenceRow {
    Vector u0;
    double lambda = 0.0;
    Vector x;
    Vector rho;
    int iterations = 0;  ///< originally reported iteration count
};

/// A bundled benchmark problem with its solver parameters and reference rows.
struct BundledExample {
    int id = 0;
    ProblemTriple problem;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    std::vector<ReferenceRow> rows;
};

/// Bundled examples 1..3: a 4x4 matrix pair (m=2), a 3rd-order 4-dimensional
/// pair and a 4th-order 3-dimensional pair, all with C = -identity over the
/// nonnegative orthant. Throws std::invalid_argument for ids outside 1..3.
const BundledExample& bundled_example(int id);

}  // namespace theicp
