#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filament/compat.hpp"
#include "filament/grid.hpp"

namespace filament {

// Time-stamped tangent field. The optional position field is carried when
// reconstruction is switched on.
struct FilamentState {
  double t = 0.0;
  UnitVecField v;
  std::optional<VecField> x;
  long step_count = 0;
  std::vector<std::string> warnings;
};

enum class Scheme { kSemiImplicitLinearized, kImplicitMidpointSphere };
enum class Renormalize { kOff, kProjectEachStep };

struct SolverConfig {
  double eps = 0.0;
  double dt = 0.0;  // 0: use the stability default for the grid
  Scheme scheme = Scheme::kSemiImplicitLinearized;
  Vec3 a{0.0, 0.0, 1.0};
  // Default: projection on for the linearized scheme, off for the midpoint
  // scheme (which preserves the sphere by itself).
  std::optional<Renormalize> renormalize;
  int picard_iters = 2;
  int midpoint_max_iters = 50;
  double newton_tol = 1e-12;
  double unit_tol = 1e-10;

  void validate() const;
  bool project() const {
    if (renormalize) return *renormalize == Renormalize::kProjectEachStep;
    return scheme == Scheme::kSemiImplicitLinearized;
  }
  // min(0.25 h^2 / max(eps, h), dt) -- resolves the dispersive scale.
  double effective_dt(const GridSpec& g) const;
};

// Block-tridiagonal matrix with 3x3 blocks; storage is exactly the three
// block diagonals and the solver works in place, so fill outside the band is
// impossible by construction.
class BlockTridiag {
 public:
  explicit BlockTridiag(int n_blocks);

  int n_blocks() const { return n_; }
  static constexpr int bandwidth_blocks() { return 3; }
  std::size_t stored_blocks() const { return lower_.size() + diag_.size() + upper_.size(); }

  Mat3& lower(int i) { return lower_[i - 1]; }  // block (i, i-1), i >= 1
  Mat3& diag(int i) { return diag_[i]; }
  Mat3& upper(int i) { return upper_[i]; }      // block (i, i+1), i <= n-2

  // Solves A u = rhs by block LU (Thomas); destroys the factors.
  void solve(std::vector<Vec3>& rhs);

 private:
  int n_;
  std::vector<Mat3> lower_, diag_, upper_;
};

// v x v_ss, the unregularized right-hand side.
VecField rhs_lie(const UnitVecField& v);

// v x v_ss + eps v_ss + eps |v_s|^2 v; eps = 0 reduces to rhs_lie.
VecField rhs_regularized(const UnitVecField& v, double eps);

// One implicit-Euler step of the frozen-coefficient linear problem, iterated
// picard_iters times with the cross-product coefficient taken from the
// previous pass. Requires eps > 0.
FilamentState step_semi_implicit(const FilamentState& state, const SolverConfig& cfg);

// Implicit midpoint for the eps = 0 flow; the converged update is a rotation
// node-wise, so the sphere is preserved to solver tolerance.
FilamentState step_midpoint_sphere(const FilamentState& state, const SolverConfig& cfg);

FilamentState step(const FilamentState& state, const SolverConfig& cfg);

// Trapezoid-in-time accumulation of the position velocity x_t = v x v_s
// over a uniformly spaced history; the s-derivative of the result tracks v.
std::vector<VecField> reconstruct_position(const std::vector<FilamentState>& history,
                                           const VecField& x0);

struct SweepEntry {
  double eps = 0.0;
  double corrector_max_coeff = 0.0;
  UnitVecField v_final;
};

struct SweepReport {
  std::vector<SweepEntry> entries;       // in the order of eps_list
  std::vector<double> pairwise_h1;       // ||v^{e_i} - v^{e_{i+1}}||_{H^1}
  std::vector<double> pairwise_h2;       // recorded, no rate asserted
  double fitted_slope_h1 = 0.0;          // log-diff vs log-eps
  double dt_used = 0.0;
  UnitVecField extrapolated;             // Richardson candidate for eps -> 0
};

struct SweepOptions {
  int corrector_target_order = 1;
  CorrectorOptions corrector;     // target_order overridden by the above
  int parallelism = 4;
};

// Runs the regularized flow for each eps (strictly descending list), after
// correcting the datum per eps, and reports the pairwise H^1 differences at
// time T together with the fitted decay slope.
SweepReport epsilon_sweep(const UnitVecField& v0, const Vec3& a,
                          const std::vector<double>& eps_list, double T,
                          const SolverConfig& cfg, const SweepOptions& opt = {});

// Least-squares slope of log(y) against log(x); helper for rate fits.
double fitted_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace filament
