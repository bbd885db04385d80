#pragma once

// Pointwise slope kernels over struct-of-arrays gradient samples. These are
// the hot loops of energy and chemical-potential evaluation; a scalar
// reference and an AVX2 variant exist, picked once at startup.
//
// STEPFLOW_SIMD=scalar forces the reference path.

#include <cstddef>
#include <string_view>

#include "stepflow/coefficients.hpp"

namespace stepflow::kernels {

struct Coeffs {
  double a, c1, c2, c3, gamma0;
  static Coeffs from(const ModelCoefficients& c) { return {c.a, c.c1, c.c2, c.c3, c.gamma0}; }
};

/// Unweighted sums over samples. `r_bracket` = sum r c1 log1p(r/gamma0),
/// i.e. sum r (c1 log(r + gamma0) + c2).
struct DensitySums {
  double r_bracket = 0.0;
  double r = 0.0;
  double r3 = 0.0;
};

using FluxFn = void (*)(const double* px, const double* py, double* zx, double* zy, std::size_t n, const Coeffs& c);
using DensityFn = DensitySums (*)(const double* px, const double* py, std::size_t n, const Coeffs& c);

struct Table {
  std::string_view name;
  FluxFn flux;
  DensityFn density;
};

const Table& scalar();
/// nullptr when the build or the CPU lacks AVX2/FMA.
const Table* avx2();
/// The table selected for this process.
const Table& active();

}  // namespace stepflow::kernels
