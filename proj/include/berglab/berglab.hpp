#ifndef BERGLAB_BERGLAB_HPP
#define BERGLAB_BERGLAB_HPP

// Umbrella header for the numerical laboratory: invariant Kahler geometry on
// the sphere, Bergman densities of the hyperplane bundle powers, expansion
// coefficient extraction, character obstructions, and the corrector iteration
// for approximate critical metrics.

#include "berglab/version.hpp"
#include "berglab/errors.hpp"
#include "berglab/rational.hpp"
#include "berglab/legendre.hpp"
#include "berglab/moment_grid.hpp"
#include "berglab/invariant_function.hpp"
#include "berglab/geom.hpp"
#include "berglab/bergman.hpp"
#include "berglab/expansion.hpp"
#include "berglab/equivariant.hpp"
#include "berglab/corrector.hpp"
#include "berglab/random.hpp"
#include "berglab/io.hpp"

#endif
