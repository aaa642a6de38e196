#pragma once

#include <cmath>

namespace latzeta
{

/// Fractional part x - floor(x), always in [0, 1).
inline double frac(double x)
{
    const double r = x - std::floor(x);
    // x slightly below an integer can round up to exactly 1.
    return r >= 1.0 ? 0.0 : r;
}

/// First periodized Bernoulli polynomial P1(x) = frac(x) - 1/2.
///
/// At integers this returns -1/2 (B1 evaluated at 0). The half-open
/// Euler-MacLaurin identity sum_{alpha < n <= beta} is exact only with
/// this choice; the midpoint value 0 would be off by half an endpoint term.
inline double p1(double x)
{
    return frac(x) - 0.5;
}

}
