#pragma once

// Umbrella header: discrepancy statistics, generating functions, contour
// inversion, and the two instanton analyses.

#include "quadisc/discrepancy.hpp"
#include "quadisc/genfun.hpp"
#include "quadisc/laplace.hpp"
#include "quadisc/lego_instanton.hpp"
#include "quadisc/numeric.hpp"
#include "quadisc/point_set.hpp"
#include "quadisc/quadrature.hpp"
#include "quadisc/rng.hpp"
#include "quadisc/spectral.hpp"
#include "quadisc/wiener_instanton.hpp"
