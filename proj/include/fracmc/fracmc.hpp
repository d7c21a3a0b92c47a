#pragma once

// Umbrella header for the fracmc library: numerical fractional area and
// fractional mean curvature for compact oriented hypersurfaces with
// boundary (planar curves and triangle meshes), analytic shapes and
// barriers, sliding probes, and a planar normal-variation flow.

#include "fracmc/curvature.hpp"
#include "fracmc/errors.hpp"
#include "fracmc/estimate.hpp"
#include "fracmc/flow.hpp"
#include "fracmc/fractional_area.hpp"
#include "fracmc/hypersurface.hpp"
#include "fracmc/io.hpp"
#include "fracmc/parallel.hpp"
#include "fracmc/probes.hpp"
#include "fracmc/quadrature.hpp"
#include "fracmc/rng.hpp"
#include "fracmc/shapes.hpp"
#include "fracmc/side_partition.hpp"
#include "fracmc/vec.hpp"
