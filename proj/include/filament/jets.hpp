#pragma once

#include <vector>

#include "filament/errors.hpp"
#include "filament/vec3.hpp"

namespace filament {

// Truncated jets at a single point, stored as derivative values:
// d[j] = (d/ds)^j f evaluated there. Products use Leibniz' rule, so all
// operations are exact on the represented orders.

double binom(int n, int k);

struct JetScalar {
  std::vector<double> d;

  JetScalar() = default;
  explicit JetScalar(int len) : d(len, 0.0) {}
  int len() const { return static_cast<int>(d.size()); }
};

struct JetVec3 {
  std::vector<Vec3> d;

  JetVec3() = default;
  explicit JetVec3(int len) : d(len) {}
  int len() const { return static_cast<int>(d.size()); }

  static JetVec3 constant(const Vec3& v, int len) {
    JetVec3 j(len);
    j.d[0] = v;
    return j;
  }
};

JetVec3 operator+(const JetVec3& a, const JetVec3& b);
JetVec3 operator-(const JetVec3& a, const JetVec3& b);
JetVec3 operator*(double a, const JetVec3& j);

JetScalar operator+(const JetScalar& a, const JetScalar& b);
JetScalar operator*(double a, const JetScalar& j);

// Leibniz products.
JetVec3 cross(const JetVec3& a, const JetVec3& b);
JetScalar dot(const JetVec3& a, const JetVec3& b);
JetScalar mul(const JetScalar& a, const JetScalar& b);
JetVec3 mul(const JetScalar& a, const JetVec3& b);

// k-fold derivative: shifts the coefficients down, shortening the jet.
JetVec3 deriv(const JetVec3& j, int k);

// g^(-1/2) for a scalar jet with g[0] > 0.
JetScalar inv_sqrt(const JetScalar& g);

// w / |w| as a jet.
JetVec3 normalize(const JetVec3& w);

// Jets of basic scalar functions at point s0.
JetScalar jet_sin(double omega, double phase, double s0, int len);
JetScalar jet_cos(double omega, double phase, double s0, int len);
// Polynomial sum c_k s^k.
JetScalar jet_poly(const std::vector<double>& coeffs, double s0, int len);

}  // namespace filament
