#pragma once

// Umbrella header.

#include "gsvd/decomposition.hpp"
#include "gsvd/ensemble.hpp"
#include "gsvd/errors.hpp"
#include "gsvd/experiments.hpp"
#include "gsvd/laws.hpp"
#include "gsvd/linalg.hpp"
#include "gsvd/quadrature.hpp"
#include "gsvd/samplers.hpp"
#include "gsvd/special.hpp"
#include "gsvd/stats.hpp"
#include "gsvd/structure.hpp"
#include "gsvd/version.hpp"
