#pragma once

// Umbrella header: alternating row/column matrix balancing over exact
// rationals or doubles, with support certification, exact nullspaces and the
// finite-termination classifier.

#include "error.hpp"     // IWYU pragma: export
#include "export.hpp"    // IWYU pragma: export
#include "io.hpp"        // IWYU pragma: export
#include "matrix.hpp"    // IWYU pragma: export
#include "rational.hpp"  // IWYU pragma: export
#include "rng.hpp"       // IWYU pragma: export
#include "scalar.hpp"    // IWYU pragma: export
#include "scaling.hpp"   // IWYU pragma: export
#include "structure.hpp" // IWYU pragma: export
#include "termination.hpp" // IWYU pragma: export
