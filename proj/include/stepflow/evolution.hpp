#pragma once

// H^-1 gradient flow h_t = Lap mu with mu = -c1 (K * grad h) - div zeta(grad h).
//
// IMEX step on each Fourier mode K = 2 pi k / L (k != 0):
//   (1 - dt c1 |K|^2 m + dt kappa |K|^4) h^{n+1}
//       = h^n + dt (|K|^2 (div zeta)^n + kappa |K|^4 h^n),   m = 2 pi |K|.
// The nonlocal term is linear and diagonal, so it sits on the left; kappa
// |K|^4 is a biharmonic stabilizer added on both sides. Mode 0 is frozen and
// Nyquist modes are dropped.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "stepflow/coefficients.hpp"
#include "stepflow/energy.hpp"
#include "stepflow/field.hpp"

namespace stepflow {

enum class DtControl { Fixed, Adaptive };

struct EvolutionConfig {
  double dt = 0.0;
  double t_end = 0.0;
  /// Unset: default_kappa, refreshed every step.
  std::optional<double> kappa;
  DtControl dt_control = DtControl::Adaptive;
  int record_every = 1;
  int max_halvings = 20;
  /// Stop after this many accepted steps even if t_end is not reached; 0 = no cap.
  std::size_t max_steps = 0;

  /// Throws InvalidInput.
  void validate() const;
};

struct TraceRecord {
  double t = 0.0;
  EnergyBreakdown energy;
  double mass = 0.0;       // mean of h~
  double max_slope = 0.0;  // max |grad h| on the grid
  double ht_norm = 0.0;    // ||(h^{n+1} - h^n) / dt||_L2
  double dt = 0.0;
};

struct EvolutionTrace {
  std::vector<TraceRecord> records;
  std::size_t steps = 0;
  std::size_t halvings = 0;
};

struct EvolveResult {
  ScalarField field;
  EvolutionTrace trace;
};

/// max(3 a c3 max(1, max|grad h|), eigmax(Hess Psi) / 2) over the padded slopes.
double default_kappa(const ScalarField& f, const ModelCoefficients& c);

/// 0.1 / max_k |c1 |K|^2 m - kappa |K|^4|.
double default_dt(const Grid& g, const ModelCoefficients& c, double kappa);

/// One IMEX step. Throws StepRejected if a denominator is non-positive or the
/// result is not finite.
ScalarField step(const ScalarField& f, double dt, double kappa, const ModelCoefficients& c);
ScalarField step(const ScalarField& f, const EvolutionConfig& cfg, const ModelCoefficients& c);

using StepObserver = std::function<void(const ScalarField&, const TraceRecord&)>;

/// Steps until t_end (or max_steps). Adaptive control halves dt whenever the
/// energy rises by more than 1e-12 |E| and retries, at most max_halvings
/// times per step; after a clean step dt doubles back towards cfg.dt.
EvolveResult evolve(const ScalarField& f0, const EvolutionConfig& cfg, const ModelCoefficients& c,
                    const StepObserver& observer = {});

/// ||Lap mu||_L2, zero at a critical point.
double steady_residual(const ScalarField& f, const ModelCoefficients& c);

struct MinimizeResult {
  ScalarField field;
  double residual = 0.0;
  std::size_t steps = 0;
  bool converged = false;
};

/// Runs the flow until steady_residual <= rel_tol * steady_residual(f0).
MinimizeResult minimize(const ScalarField& f0, const ModelCoefficients& c, double dt, double rel_tol,
                        std::size_t max_steps);

/// Exponential rate of mode k about the flat state grad h = B:
///   sigma = 2 pi c1 |K|^3 - |K|^2 K^T Hess Psi(B) K.
double linear_growth_rate(const ModelCoefficients& c, Vec2 B, double L, int k1, int k2);

}  // namespace stepflow
