#pragma once

// Energy families used for the scaling and bunching-vs-meandering study.
//
// Meander: h = B (x1 + A sin(omega x2)), omega = 2 pi m / L. Its energy is
//   E = -(c1 pi L^2 / 2) A^2 B^2 omega + L int_0^L Psi(B, A B omega cos(omega y)) dy.
// One bunch (1+1): steps of density rho packed into a band of width H/rho,
//   E11 = c1 L H^2 log(pi H / (L rho)) + a L H (c1 log rho + c2 + c3 rho^2).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stepflow/coefficients.hpp"
#include "stepflow/energy.hpp"
#include "stepflow/field.hpp"

namespace stepflow {

struct MeanderProfile {
  double A = 0.0;
  double omega = 0.0;
  double B = 0.0;

  /// Throws InvalidInput unless A >= 0, B > 0 and omega L / (2 pi) is a
  /// positive integer.
  void validate(double L) const;
};

/// Closed-form nonlocal part plus periodic trapezoid in y with quadrature_n
/// nodes for the local part.
EnergyBreakdown meander_energy(const MeanderProfile& p, const ModelCoefficients& c, double L, int quadrature_n);
/// Same family with Psi0 in place of Psi (total only).
double meander_energy_psi0(const MeanderProfile& p, const ModelCoefficients& c, double L, int quadrature_n);

/// h~ = A B sin(omega x2), slope (B, 0).
ScalarField meander_field(const MeanderProfile& p, Grid g);

/// A* = c1 pi^2 / (4 c3 omega^2 B) a^-1.
double dominant_balance_amplitude(const ModelCoefficients& c, double omega, double B);

/// -c1^3 pi^5 L^2 / (96 c3^2 omega^3) a^-2.
double meander_leading_energy(const ModelCoefficients& c, double omega, double L);

struct AmplitudeMinimum {
  double A = 0.0;
  double energy = 0.0;
  int iterations = 0;
};

/// Golden-section search for argmin_A meander_energy on [A*/10, 10 A*],
/// stopping at relative width rel_tol.
AmplitudeMinimum minimize_meander_amplitude(const ModelCoefficients& c, double omega, double B, double L,
                                            int quadrature_n, double rel_tol = 1e-8);

/// Relative residual (rhs - lhs) / lhs of the stationarity condition
///   c1 pi L / (a omega) = int_0^L (phi'(r) / (a r)) cos^2(omega y) dy.
double meander_first_order_residual(const MeanderProfile& p, const ModelCoefficients& c, double L, int quadrature_n);

struct ScalingPoint {
  double a = 0.0;
  double A_star = 0.0;
  double A = 0.0;  // minimizer
  double energy = 0.0;
  double energy_psi0 = 0.0;  // same A, Psi0 density
  double lower_bound = 0.0;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;  // a strictly decreasing
  double slope = 0.0;                // d log(-E) / d log a over the fit window
  double fit_prefactor = 0.0;        // exp(intercept) of that fit
  double reference_prefactor = 0.0;  // c1^3 pi^5 L^2 / (96 c3^2 omega^3)
  double prefactor_at_smallest = 0.0;  // -E a^2 at the smallest a
  int fit_points = 0;
};

/// For each a (c's own a is ignored) minimize the meander family and fit
/// log(-E) against log a over the last fit_decades decades.
ScalingReport upper_bound_scaling_scan(const ModelCoefficients& c, double omega, double B, double L,
                                       const std::vector<double>& a_list, int quadrature_n = 512,
                                       double fit_decades = 2.0);

struct LowerBound {
  double full = 0.0;              // all four terms
  double leading_constant = 0.0;  // c1^3 L^5 / (54 c3^2)
  double r_star = 0.0;            // c1 L / (3 c3 a) + 2 |B|
};

/// E >= -c1^3 L^5/(54 c3^2) a^-2 - c1^2 L^4 |B|/(3 c3) a^-1 - 2 c1 L^3 |B|^2
///      - 5 a c3 |B|^3 L^2.
LowerBound lower_bound(const ModelCoefficients& c, double B, double L);
/// g(r) = -(c1 L / 2) r^2 + a c3 r^3 - 3 a c3 |B| r^2.
double lower_bound_g(double r, const ModelCoefficients& c, double B, double L);

struct BunchProfile {
  double H = 0.0;
  double rho = 0.0;
  double L = 0.0;

  /// Throws InvalidInput unless H, rho, L > 0 and H / rho <= L.
  void validate() const;
};

/// Closed form E11 (per unit length in y, times L).
double bunch_energy_1p1(const BunchProfile& p, const ModelCoefficients& c);
/// Same closed form without the profile check (for sweeps where the band
/// would not fit in the cell).
double bunch_energy_1p1_unchecked(double H, double rho, double L, const ModelCoefficients& c);
/// First (nonlocal) term of the closed form, c1 L H^2 log(pi H / (L rho)).
double bunch_first_term(const BunchProfile& p, const ModelCoefficients& c);
/// rho* = sqrt(c1 H / (2 c3)) a^-1/2.
double bunch_rho_star(const ModelCoefficients& c, double H);

/// c1 L rho^2 int int_{[-w,w]^2} log|sin(pi (x - y) / L)| dx dy, w = H/(2 rho),
/// reduced to 2 int_0^{2w} (2w - s) log|sin(pi s / L)| ds and integrated with
/// Gauss-Legendre on panels graded towards the log singularities.
double bunch_double_integral_oracle(const BunchProfile& p, const ModelCoefficients& c);
/// The same double integral from the Fourier series of log|sin|:
///   -W^2 log 2 - sum_k (1/k) (L / (pi k))^2 sin^2(pi k W / L), W = H / rho.
double bunch_double_integral_series(const BunchProfile& p, const ModelCoefficients& c, int terms = 200000);

/// 1-D samples of the one-bunch height on [0, L] (for figures).
double bunch_height(const BunchProfile& p, double x);

enum class SweepVariable { StepSpacing, Misfit };

struct TransitionSweep {
  SweepVariable vary = SweepVariable::StepSpacing;
  int N = 15;                 // steps per period
  double eps0 = 0.012;        // fixed misfit (StepSpacing sweeps)
  double lt_over_a = 80.0;    // fixed l_t / a (Misfit sweeps)
  double lo = 3.0;            // l_t / a or eps0
  double hi = 160.0;
  int points = 60;
  bool log_spacing = true;
};

struct TransitionRow {
  double param = 0.0;  // l_t / a or eps0
  double e21 = 0.0;    // E_{2+1} / L^2
  double e11 = 0.0;    // E_{1+1} / L^2
  double diff = 0.0;   // e21 - e11
  bool bunch_fits = false;
};

struct TransitionReport {
  std::vector<TransitionRow> rows;  // sorted by param
  std::vector<double> crossings;    // bisected roots of diff
  int sign_changes = 0;
  /// diff > 0 (bunching lower) at the small end and < 0 at the large end.
  bool bunching_at_small_end = false;
};

/// Energy densities of both families at one sweep point. Throws InvalidInput
/// when eps0 = 0 (c1 = 0).
TransitionRow transition_point(const TransitionSweep& s, const PhysicalParams& material, double param);
TransitionReport transition_scan(const TransitionSweep& s, const PhysicalParams& material);

void write_scaling_csv(const ScalingReport& r, const std::filesystem::path& path);
void write_transition_csv(const TransitionReport& r, const TransitionSweep& s, const std::filesystem::path& path);

}  // namespace stepflow
