#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "filament/grid.hpp"
#include "filament/jets.hpp"

namespace filament {

// Highest compatibility order the corrector and tests support.
inline constexpr int kMaxCompatOrder = 3;

inline double default_compat_tol(const GridSpec& g) {
  const double t = 10.0 * g.h * g.h;
  return t > 1e-8 ? t : 1e-8;
}

struct CompatReport {
  int order = 0;
  Vec3 residual_left{};
  Vec3 residual_right{};
  double norm_left = 0.0;
  double norm_right = 0.0;
  bool passed = false;
};

struct BoundaryJet {
  enum class Side { kLeft, kRight };
  Side side = Side::kLeft;
  // Entry j is the j-th s-derivative of h at the boundary; entry 0 and all
  // odd entries are zero by construction.
  std::vector<Vec3> coefficients;
};

namespace detail {

// Towers of time-derivative expressions, shared between the sampled-field and
// jet evaluations. For eps = 0 this is the cross-product-only recursion; for
// eps > 0 the diffusion term and the scalar product sum are added, both with
// an eps factor (differentiating the equation in time puts eps on every term
// the regularization generates).
template <class Ops, class Field = typename Ops::Field>
std::vector<Field> time_derivative_tower(const Field& v, double eps, int m) {
  std::vector<Field> q;
  q.reserve(m + 1);
  q.push_back(v);
  for (int order = 1; order <= m; ++order) {
    Field acc = Ops::cross(q[0], Ops::d2(q[order - 1]));
    for (int j = 1; j <= order - 1; ++j)
      acc = acc + binom(order - 1, j) * Ops::cross(q[j], Ops::d2(q[order - 1 - j]));
    if (eps != 0.0) {
      acc = acc + eps * Ops::d2(q[order - 1]);
      for (int j = 0; j <= order - 1; ++j)
        for (int k = 0; k <= order - 1 - j; ++k) {
          const double c = eps * binom(order - 1, j) * binom(order - 1 - j, k);
          acc = acc + c * Ops::mul(Ops::dot(Ops::d1(q[j]), Ops::d1(q[k])),
                                   q[order - 1 - j - k]);
        }
    }
    q.push_back(std::move(acc));
  }
  return q;
}

struct GridFieldOps {
  using Field = VecField;
  using Scalar = std::vector<double>;
  static Field d1(const Field& f) { return derivative(f, 1); }
  static Field d2(const Field& f) { return derivative(f, 2); }
  static Field cross(const Field& a, const Field& b);
  static Scalar dot(const Field& a, const Field& b);
  static Field mul(const Scalar& a, const Field& b);
};

struct JetFieldOps {
  using Field = JetVec3;
  using Scalar = JetScalar;
  static Field d1(const Field& f) { return deriv(f, 1); }
  static Field d2(const Field& f) { return deriv(f, 2); }
  static Field cross(const Field& a, const Field& b) { return filament::cross(a, b); }
  static Scalar dot(const Field& a, const Field& b) { return filament::dot(a, b); }
  static Field mul(const Scalar& a, const Field& b) { return filament::mul(a, b); }
};

}  // namespace detail

// P_m(v): the m-th time derivative of the unregularized flow, written with
// s-derivatives only. P_0 = v, P_1 = v x v_ss, then the binomial recursion.
VecField eval_P(const UnitVecField& v, int m);

// Q_m(v): same for the eps-regularized flow.
VecField eval_Q(const UnitVecField& v, double eps, int m);

// Jet-level evaluations at a boundary point. The input jet must carry at
// least 2m+1 orders; the result jet's value entry is the quantity of
// interest.
JetVec3 eval_P_jet(const JetVec3& v, int m);
JetVec3 eval_Q_jet(const JetVec3& v, double eps, int m);

// A_m(v) w = v x (A_{m-1}(v) w), A_0 = identity (leading-order operator of
// the P_m expansion).
Vec3 apply_A(const Vec3& v, int m, const Vec3& w);

// Compatibility check on the sampled field; eps = 0 checks the unregularized
// conditions. Order 0 compares boundary values with a and e3.
std::vector<CompatReport> check_compat(const UnitVecField& v0, const Vec3& a,
                                       double eps, int up_to, double tol);

// Jet-based compatibility residuals, used where the datum (or the corrected
// datum) is known in closed form. left/right carry at least 2*up_to+1 orders.
std::vector<CompatReport> check_compat_jets(const JetVec3& left, const JetVec3& right,
                                            const Vec3& a, double eps, int up_to,
                                            double tol);

// Smooth cut-off pair: psi0 = 1 on [0,1/3] and 0 on [2/3,1]; psi1 mirrored.
double cutoff_psi0(double s);
double cutoff_psi1(double s);

struct CorrectorOptions {
  int target_order = 1;
  double eps_star = 0.2;
  double newton_tol = 1e-12;
  int newton_max_iters = 50;
  double tol_in = 0.0;   // 0: default_compat_tol of the grid
  double tol_out = 0.0;  // 0: default_compat_tol of the grid
  // Closed-form boundary jets of the datum (left, right), each with at least
  // 2*target_order+1 orders. When absent, jets come from one-sided stencils.
  std::optional<std::pair<JetVec3, JetVec3>> datum_jets;
};

struct CorrectorResult {
  UnitVecField corrected;
  BoundaryJet left;
  BoundaryJet right;
  // Jet-level residuals of the corrected datum, orders 0..target.
  std::vector<CompatReport> reports;
  double max_jet_coefficient = 0.0;  // max |d^{2j} h| over sides and orders
  int newton_iterations = 0;         // total across sides and orders
};

// Corrected initial datum v0^eps = (v0 + h) / |v0 + h| with h built from
// boundary jets solved order-by-order so the regularized compatibility
// conditions hold, blended into the interval by the cut-off pair.
CorrectorResult correct_datum(const UnitVecField& v0, const Vec3& a, double eps,
                              const CorrectorOptions& opt = {});

}  // namespace filament
