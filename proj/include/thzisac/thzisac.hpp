#pragma once

#include "thzisac/array_model.hpp"
#include "thzisac/capacity.hpp"
#include "thzisac/config.hpp"
#include "thzisac/csv.hpp"
#include "thzisac/errors.hpp"
#include "thzisac/experiments.hpp"
#include "thzisac/montecarlo.hpp"
#include "thzisac/noise.hpp"
#include "thzisac/quadrature.hpp"
#include "thzisac/rng.hpp"
#include "thzisac/sensing.hpp"
#include "thzisac/spectral.hpp"
#include "thzisac/stats.hpp"
#include "thzisac/tradeoff.hpp"
#include "thzisac/util.hpp"
