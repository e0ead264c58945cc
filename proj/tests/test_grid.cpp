#include <cmath>

#include "doctest.h"
#include "filament/grid.hpp"

using namespace filament;

namespace {

VecField sampled(const GridSpec& g, Vec3 (*f)(double)) {
  VecField out(g);
  for (int i = 0; i < g.n_nodes(); ++i) out[i] = f(g.node(i));
  return out;
}

}  // namespace

TEST_CASE("grid spec invariants") {
  GridSpec g(64);
  CHECK(g.n_nodes() == 65);
  CHECK(std::abs(g.h * g.n_cells - 1.0) < 1e-14);
  CHECK_THROWS_AS(GridSpec(7), ValidationError);
}

TEST_CASE("fd weights reproduce the classic stencils") {
  const auto d1 = fd_weights({-1, 0, 1}, 1);
  CHECK(d1[0] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(d1[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(d1[2] == doctest::Approx(0.5).epsilon(1e-14));
  const auto d2 = fd_weights({-1, 0, 1}, 2);
  CHECK(d2[0] == doctest::Approx(1.0));
  CHECK(d2[1] == doctest::Approx(-2.0));
  CHECK(d2[2] == doctest::Approx(1.0));
}

TEST_CASE("derivative of a constant vanishes") {
  GridSpec g(32);
  VecField f(g);
  for (auto& v : f.data) v = Vec3{0.7, -0.2, 1.3};
  for (int k = 1; k <= 4; ++k) {
    // one-sided weights carry rounding that 1/h^k amplifies
    const VecField d = derivative(f, k);
    CHECK(sup_norm(d) < 1e-7);
  }
}

TEST_CASE("derivative of the linear field is exactly one") {
  GridSpec g(32);
  const VecField f = sampled(g, [](double s) { return Vec3{s, 0, 0}; });
  const VecField d = derivative(f, 1);
  for (int i = 0; i < d.size(); ++i) {
    CHECK(d[i].x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d[i].y) < 1e-12);
  }
}

TEST_CASE("second derivative of sin has C <= 10 at n=64") {
  GridSpec g(64);
  const VecField f = sampled(g, [](double s) { return Vec3{std::sin(M_PI * s), 0, 0}; });
  const VecField d2 = derivative(f, 2);
  double maxe = 0.0;
  for (int i = 0; i < d2.size(); ++i)
    maxe = std::max(maxe, std::abs(d2[i].x + M_PI * M_PI * std::sin(M_PI * g.node(i))));
  CHECK(maxe <= 10.0 * g.h * g.h);
}

TEST_CASE("derivative errors shrink at least x4 when n doubles") {
  auto max_err = [](int n, int k) {
    GridSpec g(n);
    VecField f(g);
    for (int i = 0; i < g.n_nodes(); ++i) {
      const double s = g.node(i);
      f[i] = Vec3{std::sin(M_PI * s), std::cos(2.0 * s), std::exp(0.3 * s)};
    }
    const VecField d = derivative(f, k);
    double m = 0.0;
    for (int i = 0; i < g.n_nodes(); ++i) {
      const double s = g.node(i);
      const Vec3 exact{std::pow(M_PI, k) * std::sin(M_PI * s + k * M_PI / 2),
                       std::pow(2.0, k) * std::cos(2.0 * s + k * M_PI / 2),
                       std::pow(0.3, k) * std::exp(0.3 * s)};
      m = std::max(m, norm(d[i] - exact));
    }
    return m;
  };
  for (int k = 1; k <= 4; ++k) {
    const double ratio = max_err(64, k) / max_err(128, k);
    CHECK(ratio >= 3.5);
  }
}

TEST_CASE("derivative is linear") {
  GridSpec g(48);
  const VecField f = sampled(g, [](double s) { return Vec3{std::sin(2 * s), s * s, std::cos(s)}; });
  const VecField h = sampled(g, [](double s) { return Vec3{s, std::exp(-s), std::sin(5 * s)}; });
  const double alpha = 1.7, beta = -0.4;
  const VecField lhs = derivative(alpha * f + beta * h, 2);
  const VecField rhs = alpha * derivative(f, 2) + beta * derivative(h, 2);
  CHECK(sup_norm(lhs - rhs) < 1e-8 * (sup_norm(lhs) + 1.0));
}

TEST_CASE("discrete integration by parts") {
  for (int n : {64, 128}) {
    GridSpec g(n);
    const VecField f = sampled(g, [](double s) { return Vec3{std::sin(2 * s), s * s, 1.0}; });
    const VecField h = sampled(g, [](double s) { return Vec3{std::cos(s), s, std::exp(0.2 * s)}; });
    const double boundary = dot(f[n], h[n]) - dot(f[0], h[0]);
    const double defect =
        l2_inner(derivative(f, 1), h) + l2_inner(f, derivative(h, 1)) - boundary;
    CHECK(std::abs(defect) <= 10.0 * g.h * g.h);
  }
}

TEST_CASE("l2 inner product examples") {
  GridSpec g(256);
  VecField ones(g), e2(g);
  for (auto& v : ones.data) v = Vec3{1, 0, 0};
  for (auto& v : e2.data) v = Vec3{0, 1, 0};
  CHECK(l2_inner(ones, ones) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(l2_inner(ones, e2)) < 1e-15);

  const VecField f = sampled(g, [](double s) { return Vec3{std::sin(M_PI * s), 0, 0}; });
  CHECK(std::abs(l2_inner(f, f) - 0.5) < 1e-6);
  CHECK(std::abs(l2_inner(f, f, Quadrature::kSimpson) - 0.5) < 1e-6);

  GridSpec g2(128);
  VecField a(g2);
  CHECK_THROWS_AS(l2_inner(ones, a), ValidationError);
}

TEST_CASE("simpson is exact on cubics") {
  GridSpec g(64);
  const VecField f = sampled(g, [](double s) { return Vec3{s, 0, 0}; });
  const VecField h = sampled(g, [](double s) { return Vec3{s * s, 0, 0}; });
  // int s^3 = 1/4
  CHECK(l2_inner(f, h, Quadrature::kSimpson) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("sobolev norm examples") {
  GridSpec g(256);
  VecField zero(g);
  CHECK(sobolev_norm(zero, 3) == 0.0);
  VecField e3(g);
  for (auto& v : e3.data) v = Vec3{0, 0, 1};
  CHECK(sobolev_norm(e3, 0) == doctest::Approx(1.0).epsilon(1e-14));

  const VecField f = sampled(g, [](double s) { return Vec3{std::sin(M_PI * s), 0, 0}; });
  const double exact = std::sqrt(0.5 + M_PI * M_PI / 2.0);
  CHECK(std::abs(sobolev_norm(f, 1) - exact) < 1e-4);
}

TEST_CASE("unit field validation and projection") {
  GridSpec g(16);
  VecField f(g);
  for (int i = 0; i < g.n_nodes(); ++i) f[i] = Vec3{2.0, 0.0, 0.0};
  CHECK_THROWS_AS(UnitVecField::validated(f), ValidationError);
  const UnitVecField u = UnitVecField::projected(f);
  CHECK(u.unit_defect() < 1e-15);
  VecField bad(g);
  for (auto& v : bad.data) v = Vec3{1, 0, 0};
  bad[3] = Vec3{std::nan(""), 0, 0};
  CHECK_THROWS_AS(UnitVecField::projected(bad), ValidationError);
}

TEST_CASE("derivative order out of range") {
  GridSpec g(16);
  VecField f(g);
  CHECK_THROWS_AS(derivative(f, 5), ValidationError);
  CHECK_THROWS_AS(derivative(f, 0), ValidationError);
}

TEST_CASE("derivative_at agrees with the full-field derivative") {
  GridSpec g(48);
  VecField f(g);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double s = g.node(i);
    f[i] = Vec3{std::sin(2.2 * s), std::exp(-s), s * s * s};
  }
  for (int k = 1; k <= 4; ++k) {
    const VecField d = derivative(f, k);
    for (int i : {0, 1, 2, 24, 46, 47, 48})
      CHECK(norm(derivative_at(f, k, i) - d[i]) < 1e-12 * (1.0 + norm(d[i])));
  }
}
