#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "stepflow/coefficients.hpp"
#include "stepflow/local_energy.hpp"

namespace stepflow {

/// Log-radial x angular sample grid. r_min <= 0 means 1e-10 min(1, gamma0).
struct AuditSpec {
  int n_radii = 100;
  int n_angles = 100;
  double r_min = 0.0;
  double r_max = 1e3;
};

struct AuditRow {
  double r = 0.0;
  double phi = 0.0;
  double psi_eigmin = 0.0;
  double psi_norm = 0.0;
  double psi0_eigmin = 0.0;
};

struct AuditReport {
  std::size_t samples = 0;
  double modulus = 0.0;  // a c1 beta

  // Psi: min eigmin and the worst eigmin / ||H|| ratio.
  double psi_min_eig = 0.0;
  double psi_worst_ratio = 0.0;
  bool psi_convex = false;  // eigmin >= -1e-9 ||H|| at every sample

  // Strict convexity: min (eigmin - a c1 beta) / ||H||.
  double strict_worst_ratio = 0.0;
  bool strict_ok = false;

  // Psi0: most negative eigmin seen, and an on-axis witness (largest sampled
  // radius with a negative eigenvalue).
  double psi0_min_eig = 0.0;
  Slope psi0_min_at{};
  bool psi0_nonconvex = false;
  Slope psi0_witness{};
  double psi0_witness_eig = 0.0;
  // Outer edge of the nonconvex disc: root of c1 log t + c1 + c2 + 3 c3 t^2.
  double psi0_nonconvex_radius = 0.0;

  std::vector<AuditRow> rows;
};

AuditReport convexity_audit(const ModelCoefficients& c, const AuditSpec& spec = {});

/// Radius below which d11 Psi0 < 0 on the p2 axis.
double psi0_nonconvex_radius(const ModelCoefficients& c);

/// Columns r, phi, psi_eigmin, psi_norm, psi0_eigmin.
void write_audit_csv(const AuditReport& r, const std::filesystem::path& path);

/// Columns r, psi0, psi along the p1 axis for |p| <= r_max, for the density plots.
void write_density_csv(const ModelCoefficients& c, double r_max, int points, const std::filesystem::path& path);

}  // namespace stepflow
