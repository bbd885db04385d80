#include "stepflow/convexity_audit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "stepflow/errors.hpp"
#include "stepflow/field_io.hpp"

namespace stepflow {

double psi0_nonconvex_radius(const ModelCoefficients& c) {
  auto f = [&](double t) { return c.c1 * std::log(t) + c.c1 + c.c2 + 3.0 * c.c3 * t * t; };
  // f is increasing and tends to -inf at 0; bracket in log space.
  double lo = 1e-300, hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
    if (hi / lo - 1.0 < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

AuditReport convexity_audit(const ModelCoefficients& c, const AuditSpec& spec) {
  if (spec.n_radii < 2 || spec.n_angles < 4) throw InvalidInput("audit grid too small");
  const double r_min = spec.r_min > 0.0 ? spec.r_min : 1e-10 * std::min(1.0, c.gamma0);
  if (!(spec.r_max > r_min)) throw InvalidInput("audit needs r_max > r_min");

  AuditReport rep;
  rep.modulus = c.strict_convexity_modulus();
  rep.psi_min_eig = INFINITY;
  rep.psi_worst_ratio = INFINITY;
  rep.strict_worst_ratio = INFINITY;
  rep.psi0_min_eig = INFINITY;
  rep.psi_convex = true;
  rep.strict_ok = true;
  rep.rows.reserve(static_cast<std::size_t>(spec.n_radii) * spec.n_angles);

  const double lr = std::log(spec.r_max / r_min);
  for (int i = 0; i < spec.n_radii; ++i) {
    const double r = r_min * std::exp(lr * i / (spec.n_radii - 1));
    for (int j = 0; j < spec.n_angles; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / spec.n_angles;
      // Snap exact axis directions; cos(pi/2) is not 0 in floating point.
      const bool axis = (4 * j) % spec.n_angles == 0;
      Slope p{r * std::cos(phi), r * std::sin(phi)};
      if (axis) {
        const int q = (4 * j) / spec.n_angles;
        p = q == 0 ? Slope{r, 0.0} : q == 1 ? Slope{0.0, r} : q == 2 ? Slope{-r, 0.0} : Slope{0.0, -r};
      }
      const HessianSample h = hessian_psi(p, c);
      const HessianSample h0 = hessian_psi0(p, c);
      const double nrm = h.norm();

      rep.psi_min_eig = std::min(rep.psi_min_eig, h.eigmin);
      rep.psi_worst_ratio = std::min(rep.psi_worst_ratio, h.eigmin / nrm);
      if (h.eigmin < -1e-9 * nrm) rep.psi_convex = false;
      rep.strict_worst_ratio = std::min(rep.strict_worst_ratio, (h.eigmin - rep.modulus) / nrm);
      if (h.eigmin < rep.modulus - 1e-9 * nrm) rep.strict_ok = false;

      if (h0.eigmin < rep.psi0_min_eig) {
        rep.psi0_min_eig = h0.eigmin;
        rep.psi0_min_at = p;
      }
      if (axis && h0.eigmin < 0.0 && r >= std::hypot(rep.psi0_witness[0], rep.psi0_witness[1])) {
        rep.psi0_nonconvex = true;
        rep.psi0_witness = p;
        rep.psi0_witness_eig = h0.eigmin;
      }
      rep.rows.push_back({r, phi, h.eigmin, nrm, h0.eigmin});
      ++rep.samples;
    }
  }
  rep.psi0_nonconvex_radius = psi0_nonconvex_radius(c);
  return rep;
}

void write_audit_csv(const AuditReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << "r,phi,psi_eigmin,psi_norm,psi0_eigmin\n";
  for (const auto& row : r.rows) {
    out << format_double(row.r) << ',' << format_double(row.phi) << ',' << format_double(row.psi_eigmin) << ','
        << format_double(row.psi_norm) << ',' << format_double(row.psi0_eigmin) << '\n';
  }
}

void write_density_csv(const ModelCoefficients& c, double r_max, int points, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  out << "r,psi0,psi\n";
  for (int i = 0; i <= points; ++i) {
    const double r = r_max * i / points;
    out << format_double(r) << ',' << format_double(psi0({r, 0.0}, c)) << ',' << format_double(psi({r, 0.0}, c))
        << '\n';
  }
}

}  // namespace stepflow
