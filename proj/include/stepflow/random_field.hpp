#pragma once

#include <cstdint>

#include "stepflow/field.hpp"

namespace stepflow {

/// Counter-based generator: the i-th draw of stream `seed` is
/// splitmix64(seed + (i + 1) * golden). Same numbers on every platform.
std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t counter);
/// Uniform in [0, 1) with 53 random bits.
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

/// Band-limited zero-mean field: modes 0 < |k|_inf <= kmax with uniform
/// random coefficients damped by (1 + |k|^2)^-1, rescaled to max|h~| = amplitude.
ScalarField random_smooth_field(Grid grid, Vec2 slope, double amplitude, int kmax, std::uint64_t seed);

}  // namespace stepflow
