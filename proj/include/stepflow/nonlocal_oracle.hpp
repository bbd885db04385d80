#pragma once

#include "stepflow/field.hpp"

namespace stepflow {

/// Brute-force value of int_{R^2} (x - y)/|x - y|^3 . grad h~(y) dy at x, for
/// checking nonlocal_kernel_apply. Independent of the FFT path: grad h~ comes
/// from a direct DFT of the samples.
///
/// A smooth cutoff chi(|z|) splits the kernel. Near part: chi K in polar
/// coordinates, pairing z with -z so the integrand stays bounded (Gauss-Legendre
/// in |z|, trapezoid in angle). Far part: (1 - chi) K summed on the sample grid
/// over periodic images with |x - y| <= (R + 1/2) L, R = truncation_radius.
double nonlocal_quadrature_oracle(const ScalarField& f, Vec2 x, int truncation_radius);

}  // namespace stepflow
