#include "filament/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace filament {

namespace {

double quad_sum(const GridSpec& g, const std::vector<double>& f) {
  double acc = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
  return acc * g.h;
}

}  // namespace

InvariantSample invariants(const FilamentState& state) {
  const UnitVecField& v = state.v;
  const GridSpec& g = v.grid();
  const VecField vs = derivative(v.field, 1);
  const VecField vss = derivative(v.field, 2);
  const VecField vsss = derivative(v.field, 3);

  const int n = g.n_nodes();
  std::vector<double> q1(n), q2(n), q3a(n), q3b(n), q3c(n), q3d(n);
  for (int i = 0; i < n; ++i) {
    const double s1 = dot(vs[i], vs[i]);
    const double s2 = dot(vss[i], vss[i]);
    q1[i] = s1;
    q2[i] = s2;
    q3a[i] = dot(vsss[i], vsss[i]);
    q3b[i] = s1 * s2;
    const double sd = dot(vs[i], vss[i]);
    q3c[i] = sd * sd;
    q3d[i] = s1 * s1 * s1;
  }

  InvariantSample out;
  out.t = state.t;
  out.I1 = quad_sum(g, q1);
  {
    std::vector<double> q14(n);
    for (int i = 0; i < n; ++i) q14[i] = q1[i] * q1[i];
    out.I2 = quad_sum(g, q2) - 1.25 * quad_sum(g, q14);
  }
  out.I3 = quad_sum(g, q3a) - 3.5 * quad_sum(g, q3b) - 14.0 * quad_sum(g, q3c) +
           21.0 / 8.0 * quad_sum(g, q3d);
  out.unit_drift = v.unit_defect();
  out.bres_left = norm(cross(v[0], vss[0]));
  out.bres_right = norm(cross(v[n - 1], vss[n - 1]));
  return out;
}

BoundaryIdentityReport boundary_identity_check(const FilamentState& state, double eps) {
  const UnitVecField& v = state.v;
  const GridSpec& g = v.grid();
  const int n = g.n_cells;

  BoundaryIdentityReport out;
  for (int side = 0; side < 2; ++side) {
    const int node = side == 0 ? 0 : n;
    const Vec3 vb = v[node];
    const Vec3 vs = derivative_at(v.field, 1, node);
    const Vec3 vss = derivative_at(v.field, 2, node);
    const Vec3 rhs = -eps * cross(vb, vss) - dot(vs, vs) * vb;
    const double disc = norm(vss - rhs);
    (side == 0 ? out.vss_relation_left : out.vss_relation_right) = disc;
  }

  const VecField vs = derivative(v.field, 1);
  const VecField vss = derivative(v.field, 2);
  const VecField vsss = derivative(v.field, 3);
  for (int k = 1; k <= 5; ++k) {
    const int i = k * n / 6;
    out.unit_identity_2 = std::max(out.unit_identity_2, std::abs(dot(v[i], vss[i]) + dot(vs[i], vs[i])));
    out.unit_identity_3 =
        std::max(out.unit_identity_3, std::abs(dot(v[i], vsss[i]) + 3.0 * dot(vs[i], vss[i])));
  }
  return out;
}

HasimotoProfile hasimoto_profile(const UnitVecField& v, double kappa_floor) {
  const GridSpec& g = v.grid();
  const VecField vs = derivative(v.field, 1);
  const VecField vss = derivative(v.field, 2);
  const int n = g.n_nodes();

  HasimotoProfile p;
  p.s.resize(n);
  p.kappa.resize(n);
  p.tau.resize(n);
  p.psi.resize(n);
  bool any_curved = false;
  for (int i = 0; i < n; ++i) {
    p.s[i] = g.node(i);
    p.kappa[i] = norm(vs[i]);
    if (p.kappa[i] >= kappa_floor) {
      any_curved = true;
      // Torsion in the B' = +tau N frame convention; with this sign the
      // transform solves the cubic Schrodinger equation in the form used
      // here (the mirrored convention flips the equation's sign).
      p.tau[i] = dot(cross(vs[i], v[i]), vss[i]) / (p.kappa[i] * p.kappa[i]);
    } else {
      p.tau[i] = 0.0;
    }
  }
  if (!any_curved)
    throw NumericalError("hasimoto: transform undefined, curvature below floor everywhere");

  double phase = 0.0;
  p.psi[0] = p.kappa[0];
  for (int i = 1; i < n; ++i) {
    phase += 0.5 * g.h * (p.tau[i - 1] + p.tau[i]);
    p.psi[i] = p.kappa[i] * std::exp(std::complex<double>(0.0, phase));
  }
  return p;
}

NlsResidualReport nls_residual(const std::vector<FilamentState>& states,
                               double kappa_floor) {
  if (states.size() < 3)
    throw ValidationError("nls residual: need at least three time levels");
  const double dt = states[1].t - states[0].t;
  for (std::size_t k = 1; k < states.size(); ++k)
    if (std::abs(states[k].t - states[k - 1].t - dt) > 1e-9 * std::max(1.0, dt))
      throw ValidationError("nls residual: states must be uniformly spaced in t");

  const GridSpec& g = states[0].v.grid();
  const int n = g.n_cells;

  std::vector<HasimotoProfile> profiles;
  profiles.reserve(states.size());
  for (const auto& st : states) profiles.push_back(hasimoto_profile(st.v, kappa_floor));

  // Margin keeps the probes away from the one-sided stencil zone and the
  // pinned boundary rows.
  const int margin = std::max(3, n / 16);

  NlsResidualReport rep;
  for (std::size_t k = 1; k + 1 < states.size(); ++k) {
    const auto& pm = profiles[k - 1];
    const auto& p0 = profiles[k];
    const auto& pp = profiles[k + 1];

    // psi_ss by the grid stencils, components packed into a VecField.
    VecField packed(g);
    for (int i = 0; i < g.n_nodes(); ++i)
      packed[i] = Vec3{p0.psi[i].real(), p0.psi[i].imag(), 0.0};
    const VecField psi_ss = derivative(packed, 2);

    std::vector<int> probes;
    for (int i = margin; i <= n - margin; ++i) {
      if (pm.kappa[i] >= kappa_floor && p0.kappa[i] >= kappa_floor &&
          pp.kappa[i] >= kappa_floor)
        probes.push_back(i);
    }
    if (probes.empty()) continue;

    std::vector<std::complex<double>> r(probes.size()), r_alt(probes.size());
    std::complex<double> num = 0.0, num_alt = 0.0;
    double den = 0.0;
    for (std::size_t idx = 0; idx < probes.size(); ++idx) {
      const int i = probes[idx];
      const std::complex<double> psi_t = (pp.psi[i] - pm.psi[i]) / (2.0 * dt);
      const std::complex<double> lap(psi_ss[i].x, psi_ss[i].y);
      const std::complex<double> cubic =
          0.5 * std::norm(p0.psi[i]) * p0.psi[i];
      const std::complex<double> it = std::complex<double>(0.0, 1.0) * psi_t;
      r[idx] = it - lap - cubic;
      r_alt[idx] = it + lap + cubic;
      num += r[idx] * std::conj(p0.psi[i]);
      num_alt += r_alt[idx] * std::conj(p0.psi[i]);
      den += std::norm(p0.psi[i]);
    }
    // Best real multiple of psi removes the free time-dependent phase.
    const double theta = num.real() / den;
    const double theta_alt = num_alt.real() / den;
    for (std::size_t idx = 0; idx < probes.size(); ++idx) {
      const int i = probes[idx];
      rep.residual = std::max(rep.residual, std::abs(r[idx] - theta * p0.psi[i]));
      rep.residual_opposite_sign =
          std::max(rep.residual_opposite_sign, std::abs(r_alt[idx] - theta_alt * p0.psi[i]));
    }
    rep.probe_nodes = static_cast<int>(probes.size());
    ++rep.probe_times;
  }
  if (rep.probe_times == 0)
    throw NumericalError("nls residual: no probe nodes above the curvature floor");
  return rep;
}

}  // namespace filament
