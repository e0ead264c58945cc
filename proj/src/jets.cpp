#include "filament/jets.hpp"

#include <algorithm>
#include <cmath>

namespace filament {

double binom(int n, int k) {
  // Pascal triangle built once (thread-safe static init); 32 rows cover
  // every order this code can reach.
  constexpr int kRows = 33;
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t;
    t.reserve(kRows);
    for (int row = 0; row < kRows; ++row) {
      std::vector<double> r(row + 1, 1.0);
      for (int j = 1; j < row; ++j) r[j] = t[row - 1][j - 1] + t[row - 1][j];
      t.push_back(std::move(r));
    }
    return t;
  }();
  if (n < 0 || k < 0 || k > n) return 0.0;
  if (n >= kRows) throw ValidationError("binomial order beyond the supported range");
  return table[n][k];
}

namespace {
int min_len(int a, int b) { return std::min(a, b); }
}  // namespace

JetVec3 operator+(const JetVec3& a, const JetVec3& b) {
  JetVec3 r(min_len(a.len(), b.len()));
  for (int i = 0; i < r.len(); ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

JetVec3 operator-(const JetVec3& a, const JetVec3& b) {
  JetVec3 r(min_len(a.len(), b.len()));
  for (int i = 0; i < r.len(); ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

JetVec3 operator*(double a, const JetVec3& j) {
  JetVec3 r = j;
  for (auto& v : r.d) v = a * v;
  return r;
}

JetScalar operator+(const JetScalar& a, const JetScalar& b) {
  JetScalar r(min_len(a.len(), b.len()));
  for (int i = 0; i < r.len(); ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

JetScalar operator*(double a, const JetScalar& j) {
  JetScalar r = j;
  for (auto& v : r.d) v *= a;
  return r;
}

JetVec3 cross(const JetVec3& a, const JetVec3& b) {
  JetVec3 r(min_len(a.len(), b.len()));
  for (int n = 0; n < r.len(); ++n) {
    Vec3 acc{};
    for (int k = 0; k <= n; ++k) acc += binom(n, k) * cross(a.d[k], b.d[n - k]);
    r.d[n] = acc;
  }
  return r;
}

JetScalar dot(const JetVec3& a, const JetVec3& b) {
  JetScalar r(min_len(a.len(), b.len()));
  for (int n = 0; n < r.len(); ++n) {
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += binom(n, k) * dot(a.d[k], b.d[n - k]);
    r.d[n] = acc;
  }
  return r;
}

JetScalar mul(const JetScalar& a, const JetScalar& b) {
  JetScalar r(min_len(a.len(), b.len()));
  for (int n = 0; n < r.len(); ++n) {
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += binom(n, k) * a.d[k] * b.d[n - k];
    r.d[n] = acc;
  }
  return r;
}

JetVec3 mul(const JetScalar& a, const JetVec3& b) {
  JetVec3 r(min_len(a.len(), b.len()));
  for (int n = 0; n < r.len(); ++n) {
    Vec3 acc{};
    for (int k = 0; k <= n; ++k) acc += (binom(n, k) * a.d[k]) * b.d[n - k];
    r.d[n] = acc;
  }
  return r;
}

JetVec3 deriv(const JetVec3& j, int k) {
  if (j.len() <= k) throw NumericalError("jet: not enough orders for derivative");
  JetVec3 r(j.len() - k);
  for (int i = 0; i < r.len(); ++i) r.d[i] = j.d[i + k];
  return r;
}

JetScalar inv_sqrt(const JetScalar& g) {
  if (g.len() == 0 || g.d[0] <= 0.0)
    throw NumericalError("jet: inv_sqrt needs a positive leading value");
  JetScalar y(g.len());
  y.d[0] = 1.0 / std::sqrt(g.d[0]);
  // (y^2 g)^(n) = 0 for n >= 1; solve each order for y^(n).
  for (int n = 1; n < g.len(); ++n) {
    double rest = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double cnk = binom(n, k);
      for (int j = 0; j <= k; ++j) {
        if (k == n && (j == 0 || j == n)) continue;
        rest += cnk * binom(k, j) * y.d[j] * y.d[k - j] * g.d[n - k];
      }
    }
    y.d[n] = -rest / (2.0 * y.d[0] * g.d[0]);
  }
  return y;
}

JetVec3 normalize(const JetVec3& w) { return mul(inv_sqrt(dot(w, w)), w); }

JetScalar jet_sin(double omega, double phase, double s0, int len) {
  JetScalar r(len);
  for (int j = 0; j < len; ++j)
    r.d[j] = std::pow(omega, j) * std::sin(omega * s0 + phase + j * M_PI / 2.0);
  return r;
}

JetScalar jet_cos(double omega, double phase, double s0, int len) {
  return jet_sin(omega, phase + M_PI / 2.0, s0, len);
}

JetScalar jet_poly(const std::vector<double>& coeffs, double s0, int len) {
  JetScalar r(len);
  for (int j = 0; j < len; ++j) {
    double acc = 0.0;
    for (int k = j; k < static_cast<int>(coeffs.size()); ++k) {
      // d^j/ds^j s^k = k!/(k-j)! s^(k-j)
      double fall = 1.0;
      for (int t = 0; t < j; ++t) fall *= (k - t);
      acc += coeffs[k] * fall * std::pow(s0, k - j);
    }
    r.d[j] = acc;
  }
  return r;
}

}  // namespace filament
