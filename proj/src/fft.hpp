#pragma once

#include <complex>
#include <span>
#include <vector>

namespace stepflow::fft {

// Real <-> half-complex 2-D transforms of an n x n row-major array.
// forward() is normalized by 1/n^2 so that coefficients match the Fourier
// series convention; inverse() is unnormalized synthesis.
std::vector<std::complex<double>> forward(std::span<const double> values, int n);
std::vector<double> inverse(std::span<const std::complex<double>> coeffs, int n);

}  // namespace stepflow::fft
