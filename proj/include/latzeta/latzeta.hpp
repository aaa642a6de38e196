#pragma once

#include "bernoulli.hpp"
#include "core.hpp"
#include "em2d.hpp"
#include "extrapolation.hpp"
#include "lerch.hpp"
#include "quadrature.hpp"
#include "test_functions.hpp"
#include "weil.hpp"
