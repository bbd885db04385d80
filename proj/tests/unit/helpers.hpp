#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "stepflow/field.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline stepflow::ScalarField add_scaled(const stepflow::ScalarField& f, const stepflow::ScalarField& v, double eps) {
  std::vector<double> x(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += eps * v.values()[i];
  return stepflow::ScalarField::from_unnormalized(f.grid(), std::move(x), f.slope());
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_diff(const stepflow::ScalarField& a, const stepflow::ScalarField& b) {
  return max_diff(std::vector<double>(a.values().begin(), a.values().end()),
                  std::vector<double>(b.values().begin(), b.values().end()));
}

}  // namespace testing
