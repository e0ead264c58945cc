#pragma once

#include <cstddef>
#include <vector>

#include "filament/errors.hpp"
#include "filament/vec3.hpp"

namespace filament {

// Uniform mesh of [0,1] with n_cells intervals, nodes s_i = i*h, i = 0..n_cells.
struct GridSpec {
  int n_cells = 0;
  double h = 0.0;

  explicit GridSpec(int n) : n_cells(n), h(1.0 / n) {
    if (n < 8) throw ValidationError("grid: n_cells must be >= 8");
  }

  int n_nodes() const { return n_cells + 1; }
  double node(int i) const { return i * h; }
  bool operator==(const GridSpec& o) const { return n_cells == o.n_cells; }
};

// A 3-component field sampled at the grid nodes.
struct VecField {
  GridSpec grid;
  std::vector<Vec3> data;

  explicit VecField(const GridSpec& g) : grid(g), data(g.n_nodes()) {}
  VecField(const GridSpec& g, std::vector<Vec3> d) : grid(g), data(std::move(d)) {
    if (static_cast<int>(data.size()) != g.n_nodes())
      throw ValidationError("field: sample count must equal n_cells+1");
  }

  int size() const { return static_cast<int>(data.size()); }
  Vec3& operator[](int i) { return data[i]; }
  const Vec3& operator[](int i) const { return data[i]; }

  bool all_finite() const {
    for (const auto& v : data)
      if (!finite(v)) return false;
    return true;
  }
};

VecField operator+(const VecField& a, const VecField& b);
VecField operator-(const VecField& a, const VecField& b);
VecField operator*(double a, const VecField& f);

// Unit-norm refinement of VecField. `validated` checks the node norms,
// `projected` normalizes node-wise first.
struct UnitVecField {
  VecField field;

  static constexpr double kDefaultUnitTol = 1e-10;

  static UnitVecField validated(VecField f, double unit_tol = kDefaultUnitTol);
  static UnitVecField projected(VecField f);

  const GridSpec& grid() const { return field.grid; }
  int size() const { return field.size(); }
  const Vec3& operator[](int i) const { return field[i]; }

  // max_i | |v_i| - 1 |
  double unit_defect() const;

 private:
  explicit UnitVecField(VecField f) : field(std::move(f)) {}
};

enum class Quadrature { kTrapezoid, kSimpson };

// k-th spatial derivative, k in 1..4. Interior nodes use centered stencils of
// formal order 2; nodes within the half-window of a boundary use offset
// stencils on a (k+3)-point window anchored at that boundary.
VecField derivative(const VecField& f, int k);

// Derivative of a single node, same stencils as derivative(). Used where only
// boundary values are needed.
Vec3 derivative_at(const VecField& f, int k, int node);

double l2_inner(const VecField& f, const VecField& g,
                Quadrature q = Quadrature::kTrapezoid);

inline double l2_norm(const VecField& f, Quadrature q = Quadrature::kTrapezoid) {
  return std::sqrt(l2_inner(f, f, q));
}

// sqrt( sum_{j=0..m} ||d^j f||^2 ), discrete L2 norms.
double sobolev_norm(const VecField& f, int m,
                    Quadrature q = Quadrature::kTrapezoid);

double sup_norm(const VecField& f);

// Finite-difference weights for the k-th derivative on integer offsets
// `offsets` relative to the evaluation node, for unit spacing (divide the
// weighted sum by h^k). Exposed for tests.
std::vector<double> fd_weights(const std::vector<int>& offsets, int k);

}  // namespace filament
