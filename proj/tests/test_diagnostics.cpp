#include <cmath>

#include "doctest.h"
#include "filament/data.hpp"
#include "filament/diagnostics.hpp"
#include "filament/dynamics.hpp"

using namespace filament;

namespace {

FilamentState state_of(const Datum& d) { return {0.0, d.field, std::nullopt, 0, {}}; }

std::vector<FilamentState> midpoint_levels(const Datum& d, double dt, int pre_steps,
                                           int levels) {
  SolverConfig cfg;
  cfg.eps = 0.0;
  cfg.dt = dt;
  cfg.a = d.a;
  FilamentState st = state_of(d);
  for (int k = 0; k < pre_steps; ++k) st = step_midpoint_sphere(st, cfg);
  std::vector<FilamentState> out{st};
  for (int k = 1; k < levels; ++k) {
    st = step_midpoint_sphere(st, cfg);
    out.push_back(st);
  }
  return out;
}

}  // namespace

TEST_CASE("invariants of the constant field vanish") {
  GridSpec g(64);
  const Datum d = make_constant_e3(g);
  const InvariantSample s = invariants(state_of(d));
  CHECK(std::abs(s.I1) < 1e-10);
  CHECK(std::abs(s.I2) < 1e-10);
  CHECK(std::abs(s.I3) < 1e-6);
  CHECK(s.unit_drift < 1e-14);
  CHECK(s.bres_left < 1e-8);
}

TEST_CASE("invariants of the quarter circle match hand integration") {
  GridSpec g(256);
  const Datum d = make_quarter_circle(g);
  const InvariantSample s = invariants(state_of(d));
  const double lam = 0.25 * M_PI * M_PI;  // |v_s|^2
  CHECK(std::abs(s.I1 - lam) < 1e-4);
  CHECK(std::abs(s.I2 + 0.25 * lam * lam) < 1e-3);
  // I3 = ||v_sss||^2 - 7/2 lam^3 - 0 + 21/8 lam^3 = lam^3 (1 - 7/2 + 21/8)
  const double i3 = lam * lam * lam * (1.0 - 3.5 + 21.0 / 8.0);
  CHECK(std::abs(s.I3 - i3) < 2e-2);
  CHECK(s.bres_left <= 10.0 * g.h * g.h);
  CHECK(s.bres_right <= 10.0 * g.h * g.h);
}

TEST_CASE("boundary identity check on the constant field") {
  GridSpec g(64);
  const Datum d = make_constant_e3(g);
  const BoundaryIdentityReport r = boundary_identity_check(state_of(d), 0.1);
  CHECK(r.vss_relation_left < 1e-8);
  CHECK(r.vss_relation_right < 1e-8);
  CHECK(r.unit_identity_2 < 1e-8);
  CHECK(r.unit_identity_3 < 1e-8);
}

TEST_CASE("boundary identity check on the steady quarter circle") {
  GridSpec g(128);
  const Datum d = make_quarter_circle(g);
  for (double eps : {0.0, 0.05, 0.2}) {
    const BoundaryIdentityReport r = boundary_identity_check(state_of(d), eps);
    CHECK(r.vss_relation_left <= 10.0 * g.h * g.h);
    CHECK(r.vss_relation_right <= 10.0 * g.h * g.h);
  }
  const BoundaryIdentityReport r = boundary_identity_check(state_of(d), 0.0);
  CHECK(r.unit_identity_2 <= 10.0 * g.h * g.h);
  CHECK(r.unit_identity_3 <= 10.0 * g.h * g.h);
}

TEST_CASE("hasimoto transform is undefined on a straight filament") {
  GridSpec g(64);
  const Datum d = make_constant_e3(g);
  CHECK_THROWS_AS(hasimoto_profile(d.field), NumericalError);
}

TEST_CASE("hasimoto profile of the quarter circle") {
  GridSpec g(128);
  const Datum d = make_quarter_circle(g);
  const HasimotoProfile p = hasimoto_profile(d.field);
  for (int i = 0; i < g.n_nodes(); ++i) {
    CHECK(std::abs(p.kappa[i] - 0.5 * M_PI) <= 10.0 * g.h * g.h);
    CHECK(std::abs(p.tau[i]) <= 10.0 * g.h * g.h);
    CHECK(std::abs(std::abs(p.psi[i]) - p.kappa[i]) < 1e-14);  // |psi| = kappa
  }
}

TEST_CASE("helix torsion has the frame sign convention") {
  // The unit-speed helix with pitch angle alpha has |tau| = k sin(alpha);
  // the B' = +tau N convention makes it negative for a right-handed helix.
  GridSpec g(256);
  const double alpha = 0.5, k = 2.0 * M_PI;
  const Datum d = make_helix_tangent(g, alpha, k);
  const HasimotoProfile p = hasimoto_profile(d.field);
  const double expected = -k * std::sin(alpha);
  for (int i = 8; i <= g.n_cells - 8; ++i)
    CHECK(p.tau[i] == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("nls residual of the steady quarter circle is gauge-removable") {
  GridSpec g(128);
  const Datum d = make_quarter_circle(g);
  const auto levels = midpoint_levels(d, 1e-5, 0, 3);
  const NlsResidualReport r = nls_residual(levels);
  CHECK(r.residual <= 1e-3);
  CHECK(r.probe_times == 1);
  CHECK(r.probe_nodes > 0);
}

TEST_CASE("nls residual shrinks under simultaneous refinement") {
  auto run = [](int n, double dt) {
    GridSpec g(n);
    const Datum d = make_perturbed_quarter_circle(g, 0.3, 1);
    const auto levels = midpoint_levels(d, dt, 40, 3);
    return nls_residual(levels).residual;
  };
  const double r1 = run(64, 2e-5);
  const double r2 = run(128, 1e-5);
  CHECK(r1 / r2 >= 2.0);  // slope >= 1
}

TEST_CASE("the opposite sign convention is detectably worse") {
  GridSpec g(128);
  const Datum d = make_perturbed_quarter_circle(g, 0.3, 1);
  const auto levels = midpoint_levels(d, 1e-5, 40, 3);
  const NlsResidualReport r = nls_residual(levels);
  CHECK(r.residual_opposite_sign > 50.0 * r.residual);
}

TEST_CASE("nls residual needs at least three uniform levels") {
  GridSpec g(64);
  const Datum d = make_quarter_circle(g);
  auto levels = midpoint_levels(d, 1e-5, 0, 2);
  CHECK_THROWS_AS(nls_residual(levels), ValidationError);
  levels = midpoint_levels(d, 1e-5, 0, 3);
  levels[2].t += 1e-3;
  CHECK_THROWS_AS(nls_residual(levels), ValidationError);
}

TEST_CASE("frame decomposition identity at probe nodes") {
  // For unit v the triple (v, v_s/|v_s|, v x v_s/|v_s|) is orthonormal, so
  // v_s x d^n v = -(v . d^n v) v x v_s + ((v x v_s) . d^n v) v pointwise.
  GridSpec g(192);
  const Datum d = make_perturbed_quarter_circle(g, 0.2, 6);
  const VecField vs = derivative(d.field.field, 1);
  for (int n : {2, 3}) {
    const VecField dn = derivative(d.field.field, n);
    for (int k = 1; k <= 5; ++k) {
      const int i = k * g.n_cells / 6;
      const Vec3 v = d.field[i];
      const Vec3 lhs = cross(vs[i], dn[i]);
      const Vec3 rhs = -dot(v, dn[i]) * cross(v, vs[i]) + dot(cross(v, vs[i]), dn[i]) * v;
      CHECK(norm(lhs - rhs) <= 100.0 * g.h * g.h * (1.0 + norm(lhs)));
    }
  }
}
