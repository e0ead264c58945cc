#include "filament/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace filament {

double invert(const Mat3& a, Mat3& out) {
  const auto& m = a.m;
  const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
  if (det == 0.0) return 0.0;
  const double inv = 1.0 / det;
  out.m[0][0] = c00 * inv;
  out.m[1][0] = c01 * inv;
  out.m[2][0] = c02 * inv;
  out.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv;
  out.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv;
  out.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv;
  out.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv;
  out.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv;
  out.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv;
  return det;
}

VecField operator+(const VecField& a, const VecField& b) {
  if (!(a.grid == b.grid)) throw ValidationError("field: grid mismatch");
  VecField r(a.grid);
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

VecField operator-(const VecField& a, const VecField& b) {
  if (!(a.grid == b.grid)) throw ValidationError("field: grid mismatch");
  VecField r(a.grid);
  for (int i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

VecField operator*(double a, const VecField& f) {
  VecField r(f.grid);
  for (int i = 0; i < f.size(); ++i) r[i] = a * f[i];
  return r;
}

UnitVecField UnitVecField::validated(VecField f, double unit_tol) {
  for (const auto& v : f.data) {
    if (!finite(v)) throw ValidationError("unit field: non-finite entry");
    if (std::abs(norm(v) - 1.0) > unit_tol)
      throw ValidationError("unit field: node norm deviates from 1 beyond tolerance");
  }
  return UnitVecField(std::move(f));
}

UnitVecField UnitVecField::projected(VecField f) {
  for (auto& v : f.data) {
    if (!finite(v)) throw ValidationError("unit field: non-finite entry");
    const double n = norm(v);
    if (n == 0.0) throw ValidationError("unit field: zero vector cannot be projected");
    v = (1.0 / n) * v;
  }
  return UnitVecField(std::move(f));
}

double UnitVecField::unit_defect() const {
  double d = 0.0;
  for (const auto& v : field.data) d = std::max(d, std::abs(norm(v) - 1.0));
  return d;
}

// Fornberg (1988) recursion for finite-difference weights of the k-th
// derivative at z=0 on the given integer offsets.
std::vector<double> fd_weights(const std::vector<int>& offsets, int k) {
  const int n = static_cast<int>(offsets.size()) - 1;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(k + 1, 0.0));
  double c1 = 1.0;
  double c4 = offsets[0];
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, k);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[i];
    for (int j = 0; j <= i - 1; ++j) {
      const double c3 = offsets[i] - offsets[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m)
          c[i][m] = c1 * (m * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int m = mn; m >= 1; --m) c[j][m] = (c4 * c[j][m] - m * c[j][m - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][k];
  return w;
}

namespace {

struct StencilSet {
  int halfwidth;                          // centered window is [-r, r]
  std::vector<double> centered;           // 2r+1 weights
  std::vector<std::vector<double>> left;  // row j: weights on nodes 0..k+2 for node j
  // right side uses the left table mirrored with sign (-1)^k
};

const StencilSet& stencils(int k) {
  static std::map<int, StencilSet> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;

  StencilSet s;
  s.halfwidth = (k + 1) / 2;
  {
    std::vector<int> off;
    for (int o = -s.halfwidth; o <= s.halfwidth; ++o) off.push_back(o);
    s.centered = fd_weights(off, k);
  }
  // Offset stencils on the boundary-anchored window 0..k+2, one row per node
  // 0..halfwidth-1 (relative offsets from that node).
  for (int j = 0; j < s.halfwidth; ++j) {
    std::vector<int> off;
    for (int o = 0; o <= k + 2; ++o) off.push_back(o - j);
    s.left.push_back(fd_weights(off, k));
  }
  return cache.emplace(k, std::move(s)).first->second;
}

}  // namespace

Vec3 derivative_at(const VecField& f, int k, int node) {
  if (k < 1 || k > 4) throw ValidationError("derivative: order must be in 1..4");
  const int n = f.grid.n_cells;
  if (n < k + 4)
    throw NumericalError("insufficient resolution for stencil");
  const StencilSet& st = stencils(k);
  const double hk = std::pow(f.grid.h, k);
  const int r = st.halfwidth;
  Vec3 acc{};
  if (node >= r && node <= n - r) {
    for (int o = -r; o <= r; ++o) acc += st.centered[o + r] * f[node + o];
  } else if (node < r) {
    const auto& w = st.left[node];
    for (int o = 0; o <= k + 2; ++o) acc += w[o] * f[o];
  } else {
    // Mirror of the left table: node n - j uses nodes n-k-2..n with weights
    // reversed and multiplied by (-1)^k.
    const int j = n - node;
    const auto& w = st.left[j];
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    for (int o = 0; o <= k + 2; ++o) acc += sgn * w[o] * f[n - o];
  }
  return (1.0 / hk) * acc;
}

VecField derivative(const VecField& f, int k) {
  if (k < 1 || k > 4) throw ValidationError("derivative: order must be in 1..4");
  const int n = f.grid.n_cells;
  if (n < k + 4)
    throw NumericalError("insufficient resolution for stencil");
  const StencilSet& st = stencils(k);
  const double inv_hk = 1.0 / std::pow(f.grid.h, k);
  const int r = st.halfwidth;
  VecField out(f.grid);
  for (int j = 0; j < r; ++j) {
    out[j] = inv_hk * [&] {
      Vec3 acc{};
      for (int o = 0; o <= k + 2; ++o) acc += st.left[j][o] * f[o];
      return acc;
    }();
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    Vec3 acc{};
    for (int o = 0; o <= k + 2; ++o) acc += sgn * st.left[j][o] * f[n - o];
    out[n - j] = inv_hk * acc;
  }
  for (int i = r; i <= n - r; ++i) {
    Vec3 acc{};
    for (int o = -r; o <= r; ++o) acc += st.centered[o + r] * f[i + o];
    out[i] = inv_hk * acc;
  }
  return out;
}

namespace {

double quad_weight(const GridSpec& g, int i, Quadrature q) {
  const int n = g.n_cells;
  if (q == Quadrature::kTrapezoid) {
    return (i == 0 || i == n) ? 0.5 * g.h : g.h;
  }
  // Simpson
  if (i == 0 || i == n) return g.h / 3.0;
  return (i % 2 == 1) ? 4.0 * g.h / 3.0 : 2.0 * g.h / 3.0;
}

}  // namespace

double l2_inner(const VecField& f, const VecField& g, Quadrature q) {
  if (!(f.grid == g.grid)) throw ValidationError("l2_inner: grid mismatch");
  if (q == Quadrature::kSimpson && f.grid.n_cells % 2 != 0)
    throw ValidationError("l2_inner: Simpson quadrature needs an even cell count");
  double acc = 0.0;
  for (int i = 0; i < f.size(); ++i)
    acc += quad_weight(f.grid, i, q) * dot(f[i], g[i]);
  return acc;
}

double sobolev_norm(const VecField& f, int m, Quadrature q) {
  if (m < 0 || m > 4) throw ValidationError("sobolev_norm: m must be in 0..4");
  double acc = l2_inner(f, f, q);
  for (int j = 1; j <= m; ++j) {
    const VecField dj = derivative(f, j);
    acc += l2_inner(dj, dj, q);
  }
  return std::sqrt(acc);
}

double sup_norm(const VecField& f) {
  double m = 0.0;
  for (const auto& v : f.data) m = std::max(m, norm(v));
  return m;
}

}  // namespace filament
