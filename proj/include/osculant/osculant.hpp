#pragma once

// Umbrella header.

#include "osculant/binary_form.hpp"
#include "osculant/convexity.hpp"
#include "osculant/curve.hpp"
#include "osculant/discriminant.hpp"
#include "osculant/errors.hpp"
#include "osculant/parallel.hpp"
#include "osculant/projection.hpp"
#include "osculant/projective.hpp"
#include "osculant/rational_poly.hpp"
#include "osculant/sampling.hpp"
#include "osculant/simplex.hpp"
#include "osculant/stratification.hpp"
#include "osculant/tangency.hpp"
#include "osculant/tolerances.hpp"
#include "osculant/trig_series.hpp"
