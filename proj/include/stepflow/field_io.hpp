#pragma once

#include <filesystem>
#include <string>

#include "stepflow/field.hpp"

namespace stepflow {

// Binary snapshot: int64 n, double L, double B1, double B2, then n*n doubles
// row-major (index i1 * n + i2), all in native byte order.
void write_snapshot(const ScalarField& f, const std::filesystem::path& path);
ScalarField read_snapshot(const std::filesystem::path& path);

/// Columns x1, x2, h (h~ alone), h_total (h~ + B.x, for step contours).
void write_field_csv(const ScalarField& f, const std::filesystem::path& path);

/// Shortest round-trip text for CSV/JSON: 17 significant digits, '.' decimal.
std::string format_double(double v);

}  // namespace stepflow
