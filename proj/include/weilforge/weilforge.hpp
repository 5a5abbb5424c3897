#pragma once

// Umbrella header: exact Weil-algebra arithmetic, affine-structure criteria,
// near-points and jets of R^n, and the scripting front end.

#include "weilforge/affine.hpp"
#include "weilforge/algebra.hpp"
#include "weilforge/derivation.hpp"
#include "weilforge/ideal.hpp"
#include "weilforge/json_io.hpp"
#include "weilforge/linalg.hpp"
#include "weilforge/points.hpp"
#include "weilforge/poly.hpp"
#include "weilforge/rational.hpp"
#include "weilforge/script.hpp"
