#include <cmath>

#include "doctest.h"
#include "filament/data.hpp"
#include "filament/grid.hpp"
#include "filament/jets.hpp"

using namespace filament;

TEST_CASE("binomials") {
  CHECK(binom(0, 0) == 1.0);
  CHECK(binom(5, 2) == 10.0);
  CHECK(binom(6, 3) == 20.0);
  CHECK(binom(3, 4) == 0.0);
}

TEST_CASE("product jets follow the Leibniz rule") {
  // sin(s) cos(s) = sin(2s)/2; compare derivative values at s0.
  const double s0 = 0.37;
  const int L = 6;
  const JetScalar p = mul(jet_sin(1.0, 0.0, s0, L), jet_cos(1.0, 0.0, s0, L));
  const JetScalar q = 0.5 * jet_sin(2.0, 0.0, s0, L);
  for (int j = 0; j < L; ++j) CHECK(p.d[j] == doctest::Approx(q.d[j]).epsilon(1e-12));
}

TEST_CASE("polynomial jets carry exact derivative values") {
  // s^3 (1-s)^3 = s^3 - 3 s^4 + 3 s^5 - s^6 at s = 0.
  const JetScalar e = jet_poly({0, 0, 0, 1, -3, 3, -1}, 0.0, 7);
  CHECK(e.d[0] == 0.0);
  CHECK(e.d[2] == 0.0);
  CHECK(e.d[3] == doctest::Approx(6.0));
  CHECK(e.d[4] == doctest::Approx(-72.0));
  CHECK(e.d[5] == doctest::Approx(360.0));
  CHECK(e.d[6] == doctest::Approx(-720.0));
}

TEST_CASE("inv_sqrt jet matches the closed form") {
  // g = 1 + s^2 at s0 = 0.5; y = (1+s^2)^{-1/2}.
  const double s0 = 0.5;
  const JetScalar g = jet_poly({1, 0, 1}, s0, 4);
  const JetScalar y = inv_sqrt(g);
  const double v = 1.0 / std::sqrt(1.25);
  CHECK(y.d[0] == doctest::Approx(v).epsilon(1e-13));
  CHECK(y.d[1] == doctest::Approx(-s0 * std::pow(1.25, -1.5)).epsilon(1e-12));
  // y'' = -(1+s^2)^{-3/2} + 3 s^2 (1+s^2)^{-5/2}
  const double y2 = -std::pow(1.25, -1.5) + 3 * s0 * s0 * std::pow(1.25, -2.5);
  CHECK(y.d[2] == doctest::Approx(y2).epsilon(1e-12));
  CHECK_THROWS_AS(inv_sqrt(JetScalar(3)), NumericalError);
}

TEST_CASE("normalized jets are unit to all represented orders") {
  const int L = 7;
  JetVec3 w(L);
  const JetScalar a = jet_cos(1.7, 0.3, 0.2, L);
  const JetScalar b = jet_sin(0.8, -0.5, 0.2, L);
  const JetScalar c = jet_poly({1.2, 0.4, -0.3, 0.1}, 0.2, L);
  for (int j = 0; j < L; ++j) w.d[j] = Vec3{a.d[j], b.d[j], c.d[j]};
  const JetVec3 u = normalize(w);
  const JetScalar n2 = dot(u, u);
  CHECK(n2.d[0] == doctest::Approx(1.0).epsilon(1e-13));
  for (int j = 1; j < L; ++j) CHECK(std::abs(n2.d[j]) < 1e-9);
}

TEST_CASE("cross and dot jets agree with scalar differentiation") {
  // u = (sin s, cos s, s), w = (s^2, 1, 2s): compare (u x w) and (u . w)
  // jets against jets of the componentwise closed forms.
  const double s0 = 0.6;
  const int L = 5;
  JetVec3 u(L), w(L);
  const JetScalar ss = jet_sin(1, 0, s0, L), cc = jet_cos(1, 0, s0, L);
  const JetScalar lin = jet_poly({0, 1}, s0, L), sq = jet_poly({0, 0, 1}, s0, L);
  const JetScalar two_s = jet_poly({0, 2}, s0, L), one = jet_poly({1}, s0, L);
  for (int j = 0; j < L; ++j) {
    u.d[j] = Vec3{ss.d[j], cc.d[j], lin.d[j]};
    w.d[j] = Vec3{sq.d[j], one.d[j], two_s.d[j]};
  }
  const JetVec3 x = cross(u, w);
  // (u x w)_1 = cos(s) 2s - s * 1
  const JetScalar x1 = mul(cc, two_s) + (-1.0) * lin;
  for (int j = 0; j < L; ++j) CHECK(x.d[j].x == doctest::Approx(x1.d[j]).epsilon(1e-11));
  const JetScalar d = dot(u, w);
  const JetScalar dref = mul(ss, sq) + cc + mul(lin, two_s);
  for (int j = 0; j < L; ++j) CHECK(d.d[j] == doctest::Approx(dref.d[j]).epsilon(1e-11));
}

TEST_CASE("deriv shifts and guards length") {
  JetVec3 j(4);
  j.d[2] = Vec3{1, 2, 3};
  const JetVec3 d2 = deriv(j, 2);
  CHECK(d2.len() == 2);
  CHECK(d2.d[0].x == 1.0);
  CHECK_THROWS_AS(deriv(j, 4), NumericalError);
}

TEST_CASE("stencil-derived jets approach the closed-form jets") {
  // The helix tangent has closed-form boundary jets; one-sided stencils on
  // the sampled field must reproduce the low orders to truncation accuracy.
  GridSpec g(256);
  const Datum d = make_helix_tangent(g);
  const JetVec3& exact = d.jets->first;
  for (int k = 1; k <= 3; ++k) {
    const Vec3 approx = derivative_at(d.field.field, k, 0);
    const double scale = 1.0 + norm(exact.d[k]);
    CHECK(norm(approx - exact.d[k]) < 200.0 * g.h * g.h * scale);
  }
}
