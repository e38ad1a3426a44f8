#pragma once

// Umbrella header: rank-one perturbations of cone automorphisms, membership
// margins for seven cone families, closed-form inverses, and constructive
// witnesses that the inverse of such a perturbation is not a positive map.

#include "conewit/cone.hpp"
#include "conewit/errors.hpp"
#include "conewit/maps.hpp"
#include "conewit/numerics.hpp"
#include "conewit/operators.hpp"
#include "conewit/point.hpp"
#include "conewit/report.hpp"
#include "conewit/rng.hpp"
#include "conewit/scenario.hpp"
#include "conewit/suites.hpp"
#include "conewit/textform.hpp"
#include "conewit/witness.hpp"
