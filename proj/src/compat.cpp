#include "filament/compat.hpp"

#include <algorithm>
#include <cmath>

namespace filament {

namespace detail {

VecField GridFieldOps::cross(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw ValidationError("compat: grid mismatch");
  Field r(a.grid);
  for (int i = 0; i < a.size(); ++i) r[i] = filament::cross(a[i], b[i]);
  return r;
}

GridFieldOps::Scalar GridFieldOps::dot(const Field& a, const Field& b) {
  Scalar r(a.size());
  for (int i = 0; i < a.size(); ++i) r[i] = filament::dot(a[i], b[i]);
  return r;
}

VecField GridFieldOps::mul(const Scalar& a, const Field& b) {
  Field r(b.grid);
  for (int i = 0; i < b.size(); ++i) r[i] = a[i] * b[i];
  return r;
}

}  // namespace detail

namespace {

void require_order(int m) {
  if (m < 0 || m > kMaxCompatOrder)
    throw ValidationError("compat: order beyond supported maximum");
}

}  // namespace

VecField eval_P(const UnitVecField& v, int m) {
  require_order(m);
  auto tower = detail::time_derivative_tower<detail::GridFieldOps>(v.field, 0.0, m);
  return std::move(tower[m]);
}

VecField eval_Q(const UnitVecField& v, double eps, int m) {
  require_order(m);
  auto tower = detail::time_derivative_tower<detail::GridFieldOps>(v.field, eps, m);
  return std::move(tower[m]);
}

JetVec3 eval_P_jet(const JetVec3& v, int m) {
  require_order(m);
  auto tower = detail::time_derivative_tower<detail::JetFieldOps>(v, 0.0, m);
  return std::move(tower[m]);
}

JetVec3 eval_Q_jet(const JetVec3& v, double eps, int m) {
  require_order(m);
  auto tower = detail::time_derivative_tower<detail::JetFieldOps>(v, eps, m);
  return std::move(tower[m]);
}

Vec3 apply_A(const Vec3& v, int m, const Vec3& w) {
  Vec3 r = w;
  for (int i = 0; i < m; ++i) r = cross(v, r);
  return r;
}

namespace {

void check_unit_a(const Vec3& a) {
  if (std::abs(norm(a) - 1.0) > 1e-12)
    throw ValidationError("compat: boundary vector a must be unit");
}

CompatReport make_report(int order, const Vec3& left, const Vec3& right, double tol) {
  CompatReport r;
  r.order = order;
  r.residual_left = left;
  r.residual_right = right;
  r.norm_left = norm(left);
  r.norm_right = norm(right);
  r.passed = std::max(r.norm_left, r.norm_right) <= tol;
  return r;
}

}  // namespace

std::vector<CompatReport> check_compat(const UnitVecField& v0, const Vec3& a,
                                       double eps, int up_to, double tol) {
  check_unit_a(a);
  require_order(up_to);
  std::vector<CompatReport> out;
  out.push_back(make_report(0, v0[0] - a, v0[v0.size() - 1] - kE3, tol));
  if (up_to >= 1) {
    auto tower = detail::time_derivative_tower<detail::GridFieldOps>(v0.field, eps, up_to);
    for (int k = 1; k <= up_to; ++k)
      out.push_back(make_report(k, tower[k][0], tower[k][v0.size() - 1], tol));
  }
  return out;
}

std::vector<CompatReport> check_compat_jets(const JetVec3& left, const JetVec3& right,
                                            const Vec3& a, double eps, int up_to,
                                            double tol) {
  check_unit_a(a);
  require_order(up_to);
  if (left.len() < 2 * up_to + 1 || right.len() < 2 * up_to + 1)
    throw ValidationError("compat: jets carry too few orders for the requested check");
  std::vector<CompatReport> out;
  out.push_back(make_report(0, left.d[0] - a, right.d[0] - kE3, tol));
  if (up_to >= 1) {
    auto tl = detail::time_derivative_tower<detail::JetFieldOps>(left, eps, up_to);
    auto tr = detail::time_derivative_tower<detail::JetFieldOps>(right, eps, up_to);
    for (int k = 1; k <= up_to; ++k)
      out.push_back(make_report(k, tl[k].d[0], tr[k].d[0], tol));
  }
  return out;
}

namespace {

double bump_sigma(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

double smoothstep01(double x) {
  // 0 at x<=0, 1 at x>=1, C-infinity in between.
  const double a = bump_sigma(x);
  const double b = bump_sigma(1.0 - x);
  return a / (a + b);
}

}  // namespace

double cutoff_psi0(double s) {
  if (s <= 1.0 / 3.0) return 1.0;
  if (s >= 2.0 / 3.0) return 0.0;
  return smoothstep01(2.0 - 3.0 * s);
}

double cutoff_psi1(double s) { return cutoff_psi0(1.0 - s); }

namespace {

// Orthonormal pair spanning the plane perpendicular to unit v.
std::pair<Vec3, Vec3> perp_basis(const Vec3& v) {
  Vec3 axis = std::abs(v.x) <= std::abs(v.y)
                  ? (std::abs(v.x) <= std::abs(v.z) ? Vec3{1, 0, 0} : Vec3{0, 0, 1})
                  : (std::abs(v.y) <= std::abs(v.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  Vec3 e1 = normalized(axis - dot(axis, v) * v);
  Vec3 e2 = cross(v, e1);
  return {e1, e2};
}

JetVec3 jet_from_stencils(const VecField& f, int node, int len) {
  JetVec3 j(len);
  j.d[0] = f[node];
  for (int k = 1; k < len; ++k) {
    if (k > 4)
      throw ValidationError(
          "corrector: stencil-derived jets support target orders <= 2; "
          "supply closed-form datum jets for higher orders");
    j.d[k] = derivative_at(f, k, node);
  }
  return j;
}

struct SideSolve {
  std::vector<Vec3> coeffs;  // h-jet, derivative values, orders 0..2*target
  int iterations = 0;
};

// Solve the boundary jet of h at one side, order by order. At order m the
// unknown is the 2m-th derivative of h; the residual is the value of
// Q_m((v0 + h)/|v0 + h|) at the boundary, which lives in the plane
// perpendicular to v0 there, so the solve runs on that plane.
SideSolve solve_side(const JetVec3& v0jet, double eps, int target,
                     double newton_tol, int max_iters) {
  const int len = 2 * target + 1;
  SideSolve out;
  out.coeffs.assign(len, Vec3{});
  const Vec3 vb = normalized(v0jet.d[0]);
  const auto [e1, e2] = perp_basis(vb);

  for (int m = 1; m <= target; ++m) {
    auto residual = [&](double y1, double y2) {
      JetVec3 h(len);
      for (int j = 0; j < len; ++j) h.d[j] = out.coeffs[j];
      h.d[2 * m] = y1 * e1 + y2 * e2;
      const JetVec3 u = normalize(v0jet + h);
      return eval_Q_jet(u, eps, m).d[0];
    };

    double y1 = 0.0, y2 = 0.0;
    bool converged = false;
    double rnorm = 0.0;
    for (int it = 0; it < max_iters; ++it) {
      const Vec3 r = residual(y1, y2);
      const double r1 = dot(r, e1), r2 = dot(r, e2);
      rnorm = std::hypot(r1, r2);
      ++out.iterations;
      if (rnorm <= newton_tol) {
        converged = true;
        break;
      }
      const double scale = std::max({1.0, std::abs(y1), std::abs(y2)});
      const double delta = 1e-7 * scale;
      const Vec3 ra = residual(y1 + delta, y2);
      const Vec3 rb = residual(y1, y2 + delta);
      const double j11 = (dot(ra, e1) - r1) / delta, j12 = (dot(rb, e1) - r1) / delta;
      const double j21 = (dot(ra, e2) - r2) / delta, j22 = (dot(rb, e2) - r2) / delta;
      const double det = j11 * j22 - j12 * j21;
      if (det == 0.0 || !std::isfinite(det))
        throw NumericalError("corrector: singular Newton system", rnorm);
      const double dy1 = -(j22 * r1 - j12 * r2) / det;
      const double dy2 = -(-j21 * r1 + j11 * r2) / det;
      double lambda = 1.0;
      bool stepped = false;
      while (lambda >= 1.0 / 64.0) {
        const Vec3 rt = residual(y1 + lambda * dy1, y2 + lambda * dy2);
        const double tn = std::hypot(dot(rt, e1), dot(rt, e2));
        if (tn <= newton_tol || tn < (1.0 - 0.25 * lambda) * rnorm) {
          y1 += lambda * dy1;
          y2 += lambda * dy2;
          stepped = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!stepped)
        throw NumericalError("corrector: damped Newton stalled", rnorm);
    }
    if (!converged)
      throw NumericalError("corrector: jet solve did not converge", rnorm);
    out.coeffs[2 * m] = y1 * e1 + y2 * e2;
  }
  return out;
}

}  // namespace

CorrectorResult correct_datum(const UnitVecField& v0, const Vec3& a, double eps,
                              const CorrectorOptions& opt) {
  check_unit_a(a);
  if (opt.target_order < 1 || opt.target_order > kMaxCompatOrder)
    throw ValidationError("corrector: target order must be in 1..3");
  if (!(eps > 0.0))
    throw ValidationError("corrector: eps must be positive");
  if (eps > opt.eps_star)
    throw ValidationError("corrector: eps exceeds eps_star, no invertibility guarantee");

  const GridSpec& g = v0.grid();
  const double tol_in = opt.tol_in > 0 ? opt.tol_in : default_compat_tol(g);
  const double tol_out = opt.tol_out > 0 ? opt.tol_out : default_compat_tol(g);

  const int len = 2 * opt.target_order + 1;
  JetVec3 jet_left, jet_right;
  if (opt.datum_jets) {
    if (opt.datum_jets->first.len() < len || opt.datum_jets->second.len() < len)
      throw ValidationError("corrector: supplied datum jets carry too few orders");
    jet_left = opt.datum_jets->first;
    jet_right = opt.datum_jets->second;
    jet_left.d.resize(len);
    jet_right.d.resize(len);
  } else {
    jet_left = jet_from_stencils(v0.field, 0, len);
    jet_right = jet_from_stencils(v0.field, g.n_cells, len);
  }

  // The datum must already satisfy the unregularized conditions; the jet
  // route avoids charging stencil truncation against the datum.
  const auto pre = opt.datum_jets
                       ? check_compat_jets(jet_left, jet_right, a, 0.0,
                                           opt.target_order, tol_in)
                       : check_compat(v0, a, 0.0, opt.target_order, tol_in);
  for (const auto& rep : pre)
    if (!rep.passed)
      throw ValidationError("corrector: datum fails the unregularized compatibility "
                            "conditions at order " + std::to_string(rep.order));

  SideSolve left = solve_side(jet_left, eps, opt.target_order, opt.newton_tol,
                              opt.newton_max_iters);
  SideSolve right = solve_side(jet_right, eps, opt.target_order, opt.newton_tol,
                               opt.newton_max_iters);

  // Blend the two one-sided Taylor polynomials with the cut-off pair and
  // correct the sampled field.
  VecField corrected_raw(g);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double s = g.node(i);
    Vec3 h{};
    double fact = 1.0;  // (2j)!
    double pl = 1.0, pr = 1.0;  // s^{2j}, (s-1)^{2j}
    for (int j = 0; 2 * j < len; ++j) {
      if (j > 0) {
        fact *= (2.0 * j - 1.0) * (2.0 * j);
        pl *= s * s;
        pr *= (s - 1.0) * (s - 1.0);
      }
      h += (cutoff_psi0(s) * pl / fact) * left.coeffs[2 * j] +
           (cutoff_psi1(s) * pr / fact) * right.coeffs[2 * j];
    }
    corrected_raw[i] = v0[i] + h;
  }
  UnitVecField corrected = UnitVecField::projected(std::move(corrected_raw));
  corrected.field[0] = a;
  corrected.field[g.n_cells] = kE3;

  CorrectorResult res{std::move(corrected), {}, {}, {}, 0.0, 0};
  res.left.side = BoundaryJet::Side::kLeft;
  res.left.coefficients = left.coeffs;
  res.right.side = BoundaryJet::Side::kRight;
  res.right.coefficients = right.coeffs;
  res.newton_iterations = left.iterations + right.iterations;
  for (const auto& c : left.coeffs) res.max_jet_coefficient = std::max(res.max_jet_coefficient, norm(c));
  for (const auto& c : right.coeffs) res.max_jet_coefficient = std::max(res.max_jet_coefficient, norm(c));

  JetVec3 hl(len), hr(len);
  for (int j = 0; j < len; ++j) {
    hl.d[j] = left.coeffs[j];
    hr.d[j] = right.coeffs[j];
  }
  res.reports = check_compat_jets(normalize(jet_left + hl), normalize(jet_right + hr),
                                  a, eps, opt.target_order, tol_out);
  return res;
}

}  // namespace filament
