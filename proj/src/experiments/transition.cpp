#include <cmath>
#include <fstream>
#include <numbers>

#include "stepflow/errors.hpp"
#include "stepflow/experiments.hpp"
#include "stepflow/field_io.hpp"
#include "stepflow/parallel.hpp"

namespace stepflow {
namespace {

// E21 is evaluated with enough nodes to resolve cos over one period; the
// integrand is analytic, so this is far past rounding.
constexpr int kQuadrature = 2048;

}  // namespace

TransitionRow transition_point(const TransitionSweep& s, const PhysicalParams& material, double param) {
  PhysicalParams m = material;
  double lt_over_a;
  if (s.vary == SweepVariable::StepSpacing) {
    m.eps0 = s.eps0;
    lt_over_a = param;
  } else {
    m.eps0 = param;
    lt_over_a = s.lt_over_a;
  }
  if (m.eps0 == 0.0) throw InvalidInput("eps0 = 0 gives c1 = 0; both misfit gains vanish");
  if (!(lt_over_a > 0.0) || s.N < 1) throw InvalidInput("transition sweep needs l_t > 0 and N >= 1");
  const ModelCoefficients c = derive_coefficients(m);

  // L = N l_t, H = N a, B = a / l_t, omega = 2 pi / L.
  const double lt = lt_over_a * m.a;
  const double L = s.N * lt;
  const double H = s.N * m.a;
  const double B = m.a / lt;
  const double omega = 2.0 * std::numbers::pi / L;

  const double A = dominant_balance_amplitude(c, omega, B);
  const double e21 = meander_energy({A, omega, B}, c, L, kQuadrature).total;
  const double rho = bunch_rho_star(c, H);
  const double e11 = bunch_energy_1p1_unchecked(H, rho, L, c);

  TransitionRow r;
  r.param = param;
  r.e21 = e21 / (L * L);
  r.e11 = e11 / (L * L);
  r.diff = r.e21 - r.e11;
  r.bunch_fits = H / rho <= L;
  return r;
}

TransitionReport transition_scan(const TransitionSweep& s, const PhysicalParams& material) {
  if (s.points < 2 || !(s.lo > 0.0) || !(s.hi > s.lo)) throw InvalidInput("transition sweep needs 0 < lo < hi, points >= 2");
  TransitionReport rep;
  rep.rows.resize(static_cast<std::size_t>(s.points));
  parallel_for(rep.rows.size(), [&](std::size_t i) {
    const double t = static_cast<double>(i) / (s.points - 1);
    const double v = s.log_spacing ? s.lo * std::pow(s.hi / s.lo, t) : s.lo + (s.hi - s.lo) * t;
    rep.rows[i] = transition_point(s, material, v);
  });

  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i];
    const auto& b = rep.rows[i + 1];
    if ((a.diff > 0.0) == (b.diff > 0.0)) continue;
    ++rep.sign_changes;
    double lo = a.param, hi = b.param;
    const bool lo_positive = a.diff > 0.0;
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((transition_point(s, material, mid).diff > 0.0) == lo_positive ? lo : hi) = mid;
    }
    rep.crossings.push_back(0.5 * (lo + hi));
  }
  rep.bunching_at_small_end = rep.rows.front().diff > 0.0 && rep.rows.back().diff < 0.0;
  return rep;
}

void write_transition_csv(const TransitionReport& r, const TransitionSweep& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << (s.vary == SweepVariable::StepSpacing ? "lt_over_a" : "eps0") << ",e21_density,e11_density,diff,bunch_fits\n";
  for (const auto& row : r.rows) {
    out << format_double(row.param) << ',' << format_double(row.e21) << ',' << format_double(row.e11) << ','
        << format_double(row.diff) << ',' << (row.bunch_fits ? 1 : 0) << '\n';
  }
}

}  // namespace stepflow
