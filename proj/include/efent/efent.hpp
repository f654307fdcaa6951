#pragma once

// Umbrella header: closed-form Sharma-Mittal / Renyi / Tsallis / Shannon
// entropies and divergences of exponential-family distributions, plus the
// sampling, estimation, and serialization layers.

#include "efent/dist_spec.hpp"
#include "efent/errors.hpp"
#include "efent/estimation.hpp"
#include "efent/expfam.hpp"
#include "efent/families.hpp"
#include "efent/measures.hpp"
#include "efent/natural_param.hpp"
#include "efent/rng.hpp"
#include "efent/spd_matrix.hpp"
