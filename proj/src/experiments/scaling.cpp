#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "stepflow/errors.hpp"
#include "stepflow/experiments.hpp"
#include "stepflow/field_io.hpp"
#include "stepflow/parallel.hpp"

namespace stepflow {

ScalingReport upper_bound_scaling_scan(const ModelCoefficients& c, double omega, double B, double L,
                                       const std::vector<double>& a_list, int quadrature_n, double fit_decades) {
  if (a_list.size() < 2) throw InvalidInput("scaling scan needs at least two values of a");
  std::vector<double> as = a_list;
  std::sort(as.begin(), as.end(), std::greater<>());
  if (std::adjacent_find(as.begin(), as.end()) != as.end()) throw InvalidInput("duplicate a in scaling scan");
  if (!(as.back() > 0.0)) throw InvalidInput("a must be positive");

  ScalingReport rep;
  rep.points.resize(as.size());
  parallel_for(as.size(), [&](std::size_t i) {
    ModelCoefficients ci = c;
    ci.a = as[i];
    const auto m = minimize_meander_amplitude(ci, omega, B, L, quadrature_n);
    ScalingPoint& pt = rep.points[i];
    pt.a = as[i];
    pt.A_star = dominant_balance_amplitude(ci, omega, B);
    pt.A = m.A;
    pt.energy = m.energy;
    pt.energy_psi0 = meander_energy_psi0({m.A, omega, B}, ci, L, quadrature_n);
    pt.lower_bound = lower_bound(ci, B, L).full;
  });

  // Least squares over a in [a_min, a_min 10^fit_decades].
  const double a_cut = as.back() * std::pow(10.0, fit_decades) * (1.0 + 1e-12);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (const auto& p : rep.points) {
    if (p.a > a_cut || !(p.energy < 0.0)) continue;
    const double x = std::log(p.a), y = std::log(-p.energy);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k < 2) throw InvalidInput("fit window holds fewer than two negative energies");
  rep.fit_points = k;
  rep.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  rep.fit_prefactor = std::exp((sy - rep.slope * sx) / k);
  rep.reference_prefactor = std::pow(c.c1, 3) * std::pow(std::numbers::pi, 5) * L * L /
                            (96.0 * c.c3 * c.c3 * std::pow(omega, 3));
  const auto& last = rep.points.back();
  rep.prefactor_at_smallest = -last.energy * last.a * last.a;
  return rep;
}

void write_scaling_csv(const ScalingReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << "a,A_star,A,energy,energy_psi0,lower_bound\n";
  for (const auto& p : r.points) {
    out << format_double(p.a) << ',' << format_double(p.A_star) << ',' << format_double(p.A) << ','
        << format_double(p.energy) << ',' << format_double(p.energy_psi0) << ',' << format_double(p.lower_bound)
        << '\n';
  }
}

}  // namespace stepflow
