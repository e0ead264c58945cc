#include "filament/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace filament {

void SolverConfig::validate() const {
  if (std::abs(norm(a) - 1.0) > 1e-12)
    throw ValidationError("solver: boundary vector a must be unit");
  if (!std::isfinite(eps) || eps < 0.0)
    throw ValidationError("solver: eps must be finite and non-negative");
  if (!std::isfinite(dt) || dt < 0.0)
    throw ValidationError("solver: dt must be finite and non-negative");
  if (picard_iters < 1) throw ValidationError("solver: picard_iters must be >= 1");
}

double SolverConfig::effective_dt(const GridSpec& g) const {
  const double stability = 0.25 * g.h * g.h / std::max(eps, g.h);
  if (dt > 0.0) return std::min(dt, stability);
  return stability;
}

BlockTridiag::BlockTridiag(int n_blocks)
    : n_(n_blocks), lower_(n_blocks - 1), diag_(n_blocks), upper_(n_blocks - 1) {}

void BlockTridiag::solve(std::vector<Vec3>& rhs) {
  if (static_cast<int>(rhs.size()) != n_)
    throw ValidationError("banded solve: rhs size mismatch");
  // Forward elimination: diag_[i] <- diag_[i] - L_i inv(diag_[i-1]) U_{i-1}.
  Mat3 inv;
  for (int i = 1; i < n_; ++i) {
    if (invert(diag_[i - 1], inv) == 0.0)
      throw NumericalError("banded solve: singular pivot block");
    const Mat3 f = lower_[i - 1] * inv;
    diag_[i] -= f * upper_[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  if (invert(diag_[n_ - 1], inv) == 0.0)
    throw NumericalError("banded solve: singular pivot block");
  rhs[n_ - 1] = inv * rhs[n_ - 1];
  for (int i = n_ - 2; i >= 0; --i) {
    if (invert(diag_[i], inv) == 0.0)
      throw NumericalError("banded solve: singular pivot block");
    rhs[i] = inv * (rhs[i] - upper_[i] * rhs[i + 1]);
  }
}

VecField rhs_lie(const UnitVecField& v) {
  const VecField vss = derivative(v.field, 2);
  VecField r(v.grid());
  for (int i = 0; i < v.size(); ++i) r[i] = cross(v[i], vss[i]);
  return r;
}

VecField rhs_regularized(const UnitVecField& v, double eps) {
  const VecField vss = derivative(v.field, 2);
  const VecField vs = derivative(v.field, 1);
  VecField r(v.grid());
  for (int i = 0; i < v.size(); ++i)
    r[i] = cross(v[i], vss[i]) + eps * vss[i] + (eps * dot(vs[i], vs[i])) * v[i];
  return r;
}

namespace {

// Assembles and solves (I - dt (eps I + skew(b)) D2) u = rhs with Dirichlet
// rows at both ends.
std::vector<Vec3> implicit_cross_solve(const GridSpec& g, const std::vector<Vec3>& b,
                                       double eps, double dt, const Vec3& left_bc,
                                       const Vec3& right_bc, std::vector<Vec3> rhs) {
  const int n = g.n_cells;
  const double gamma = dt / (g.h * g.h);
  BlockTridiag A(n + 1);
  A.diag(0) = Mat3::identity();
  A.upper(0) = Mat3{};
  rhs[0] = left_bc;
  A.diag(n) = Mat3::identity();
  A.lower(n) = Mat3{};
  rhs[n] = right_bc;
  for (int i = 1; i < n; ++i) {
    Mat3 M = Mat3::skew(b[i]);
    M.m[0][0] += eps;
    M.m[1][1] += eps;
    M.m[2][2] += eps;
    A.lower(i) = -gamma * M;
    A.upper(i) = -gamma * M;
    A.diag(i) = Mat3::identity() + 2.0 * gamma * M;
  }
  A.solve(rhs);
  return rhs;
}

void pin_boundaries(VecField& f, const Vec3& a) {
  f[0] = a;
  f[f.size() - 1] = kE3;
}

double max_node_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, norm(a[i] - b[i]));
  return m;
}

}  // namespace

FilamentState step_semi_implicit(const FilamentState& state, const SolverConfig& cfg) {
  cfg.validate();
  if (!(cfg.eps > 0.0))
    throw ValidationError("semi-implicit scheme requires eps > 0");
  const GridSpec& g = state.v.grid();
  const double dt = cfg.effective_dt(g);

  std::vector<Vec3> u_prev = state.v.field.data;
  std::vector<std::string> warnings = state.warnings;
  double prev_update = -1.0;
  std::vector<Vec3> u;
  for (int pass = 0; pass < cfg.picard_iters; ++pass) {
    // Explicit part: v_old + dt eps |u_prev_s|^2 u_prev.
    VecField prev_field(g, u_prev);
    const VecField ps = derivative(prev_field, 1);
    std::vector<Vec3> rhs(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i)
      rhs[i] = state.v[i] + (dt * cfg.eps * dot(ps[i], ps[i])) * u_prev[i];
    u = implicit_cross_solve(g, u_prev, cfg.eps, dt, cfg.a, kE3, std::move(rhs));
    const double update = max_node_distance(u, u_prev);
    if (prev_update >= 0.0 && update > prev_update)
      warnings.push_back("picard residual not decreasing at t=" + std::to_string(state.t));
    prev_update = update;
    u_prev = u;
  }

  VecField out(g, std::move(u));
  pin_boundaries(out, cfg.a);
  UnitVecField v_new = cfg.project() ? UnitVecField::projected(std::move(out))
                                     : UnitVecField::validated(std::move(out), 1.0);
  if (cfg.project()) pin_boundaries(v_new.field, cfg.a);

  FilamentState next{state.t + dt, std::move(v_new), state.x, state.step_count + 1,
                     std::move(warnings)};
  return next;
}

FilamentState step_midpoint_sphere(const FilamentState& state, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.eps != 0.0)
    throw ValidationError("midpoint scheme is the eps = 0 integrator");
  const GridSpec& g = state.v.grid();
  const double dt = cfg.effective_dt(g);

  const std::vector<Vec3>& v_old = state.v.field.data;
  std::vector<Vec3> u = v_old;
  bool converged = false;
  double update = 0.0;
  for (int it = 0; it < cfg.midpoint_max_iters; ++it) {
    // Coefficient frozen at the current midpoint iterate.
    std::vector<Vec3> c(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i) c[i] = 0.5 * (v_old[i] + u[i]);
    // rhs = (I + (dt/2) skew(c) D2) v_old.
    VecField vf(g, v_old);
    const VecField d2v = derivative(vf, 2);
    std::vector<Vec3> rhs(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i)
      rhs[i] = v_old[i] + 0.5 * dt * cross(c[i], d2v[i]);
    std::vector<Vec3> u_next =
        implicit_cross_solve(g, c, 0.0, 0.5 * dt, cfg.a, kE3, std::move(rhs));
    update = max_node_distance(u_next, u);
    u = std::move(u_next);
    if (update <= cfg.newton_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericalError("midpoint fixed point did not converge", update);

  VecField out(g, std::move(u));
  pin_boundaries(out, cfg.a);
  // The converged update is a rotation node-wise, so the sphere holds to
  // solver tolerance; hold the step to the configured unit tolerance.
  UnitVecField v_new = cfg.project() ? UnitVecField::projected(std::move(out))
                                     : UnitVecField::validated(std::move(out), cfg.unit_tol);
  if (cfg.project()) pin_boundaries(v_new.field, cfg.a);

  FilamentState next{state.t + dt, std::move(v_new), state.x, state.step_count + 1,
                     state.warnings};
  return next;
}

FilamentState step(const FilamentState& state, const SolverConfig& cfg) {
  return cfg.scheme == Scheme::kSemiImplicitLinearized ? step_semi_implicit(state, cfg)
                                                       : step_midpoint_sphere(state, cfg);
}

namespace {

// x_t written in the tangent field: x_s x x_ss = v x v_s. (Differentiating
// once more in s gives the tangent equation's right-hand side v x v_ss;
// integrating this one keeps x_s equal to v.)
VecField position_velocity(const UnitVecField& v) {
  const VecField vs = derivative(v.field, 1);
  VecField r(v.grid());
  for (int i = 0; i < v.size(); ++i) r[i] = cross(v[i], vs[i]);
  return r;
}

}  // namespace

std::vector<VecField> reconstruct_position(const std::vector<FilamentState>& history,
                                           const VecField& x0) {
  if (history.size() < 2)
    throw ValidationError("reconstruct: need at least two states");
  const double dt = history[1].t - history[0].t;
  for (std::size_t k = 1; k < history.size(); ++k)
    if (std::abs(history[k].t - history[k - 1].t - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw ValidationError("reconstruct: states must be uniformly spaced in t");

  std::vector<VecField> xs;
  xs.reserve(history.size());
  xs.push_back(x0);
  VecField acc = x0;
  VecField rhs_prev = position_velocity(history[0].v);
  for (std::size_t k = 1; k < history.size(); ++k) {
    const VecField rhs_k = position_velocity(history[k].v);
    acc = acc + 0.5 * dt * (rhs_prev + rhs_k);
    xs.push_back(acc);
    rhs_prev = rhs_k;
  }
  return xs;
}

double fitted_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("slope fit: need at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw NumericalError("slope fit: non-positive sample");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepReport epsilon_sweep(const UnitVecField& v0, const Vec3& a,
                          const std::vector<double>& eps_list, double T,
                          const SolverConfig& cfg, const SweepOptions& opt) {
  if (eps_list.empty()) throw ValidationError("sweep: empty eps list");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw ValidationError("sweep: eps list must be strictly descending");
  CorrectorOptions copt = opt.corrector;
  copt.target_order = opt.corrector_target_order;
  for (double e : eps_list)
    if (!(e > 0.0) || e > copt.eps_star)
      throw ValidationError("sweep: eps values must lie in (0, eps_star]");

  // A single dt across the sweep so the time-discretization error is shared.
  const GridSpec& g = v0.grid();
  double dt = cfg.dt;
  for (double e : eps_list) {
    SolverConfig c = cfg;
    c.eps = e;
    dt = dt > 0.0 ? std::min(dt, c.effective_dt(g)) : c.effective_dt(g);
  }
  const long steps = std::max<long>(1, std::lround(T / dt));
  dt = T / static_cast<double>(steps);

  auto run_one = [&](double eps) {
    CorrectorResult corr = correct_datum(v0, a, eps, copt);
    SolverConfig c = cfg;
    c.eps = eps;
    c.dt = dt;
    c.scheme = Scheme::kSemiImplicitLinearized;
    FilamentState st{0.0, std::move(corr.corrected), std::nullopt, 0, {}};
    for (long k = 0; k < steps; ++k) st = step_semi_implicit(st, c);
    return SweepEntry{eps, corr.max_jet_coefficient, std::move(st.v)};
  };

  const int cap = std::max(1, opt.parallelism);
  std::vector<SweepEntry> entries;
  entries.reserve(eps_list.size());
  for (std::size_t base = 0; base < eps_list.size(); base += cap) {
    std::vector<std::future<SweepEntry>> batch;
    const std::size_t end = std::min(eps_list.size(), base + cap);
    for (std::size_t i = base; i < end; ++i)
      batch.push_back(std::async(std::launch::async, run_one, eps_list[i]));
    for (auto& f : batch) entries.push_back(f.get());
  }

  SweepReport rep{std::move(entries), {}, {}, 0.0, dt, UnitVecField::projected(v0.field)};
  for (std::size_t i = 0; i + 1 < rep.entries.size(); ++i) {
    const VecField diff = rep.entries[i].v_final.field - rep.entries[i + 1].v_final.field;
    rep.pairwise_h1.push_back(sobolev_norm(diff, 1));
    rep.pairwise_h2.push_back(sobolev_norm(diff, 2));
  }
  bool fit_ok = rep.pairwise_h1.size() >= 2;
  for (double d : rep.pairwise_h1) fit_ok = fit_ok && d > 1e-14;
  if (fit_ok) {
    std::vector<double> xs(eps_list.begin(), eps_list.begin() + rep.pairwise_h1.size());
    rep.fitted_slope_h1 = fitted_loglog_slope(xs, rep.pairwise_h1);
  }

  // Richardson candidate from the two smallest eps, using the fitted rate.
  if (rep.entries.size() >= 2 && rep.fitted_slope_h1 > 0.0) {
    const auto& coarse = rep.entries[rep.entries.size() - 2].v_final.field;
    const auto& fine = rep.entries.back().v_final.field;
    const double ratio = rep.entries[rep.entries.size() - 2].eps / rep.entries.back().eps;
    const double w = std::pow(ratio, rep.fitted_slope_h1);
    VecField extrap(g);
    for (int i = 0; i < g.n_nodes(); ++i)
      extrap[i] = (1.0 / (w - 1.0)) * (w * fine[i] - coarse[i]);
    rep.extrapolated = UnitVecField::projected(std::move(extrap));
  } else {
    rep.extrapolated = rep.entries.back().v_final;
  }
  return rep;
}

}  // namespace filament
