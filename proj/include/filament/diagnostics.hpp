#pragma once

#include <complex>
#include <vector>

#include "filament/dynamics.hpp"
#include "filament/grid.hpp"

namespace filament {

struct InvariantSample {
  double t = 0.0;
  double I1 = 0.0;  // ||v_s||^2
  double I2 = 0.0;  // ||v_ss||^2 - (5/4) || |v_s|^2 ||^2
  double I3 = 0.0;  // ||v_sss||^2 - (7/2) || |v_s||v_ss| ||^2 - 14 ||v_s.v_ss||^2 + (21/8) || |v_s|^3 ||^2
  double unit_drift = 0.0;
  double bres_left = 0.0;   // |v x v_ss| at s = 0
  double bres_right = 0.0;  // |v x v_ss| at s = 1
};

struct InvariantSeries {
  std::vector<InvariantSample> rows;
  void append(const InvariantSample& s) { rows.push_back(s); }
};

InvariantSample invariants(const FilamentState& state);

struct BoundaryIdentityReport {
  // |lhs - rhs| of v_ss = -eps v x v_ss - |v_s|^2 v at the two ends.
  double vss_relation_left = 0.0;
  double vss_relation_right = 0.0;
  // max over probe nodes of the unit-norm differentiation identities
  // v.v_ss + |v_s|^2 = 0 and v.v_sss + 3 v_s.v_ss = 0.
  double unit_identity_2 = 0.0;
  double unit_identity_3 = 0.0;
};

BoundaryIdentityReport boundary_identity_check(const FilamentState& state, double eps);

struct HasimotoProfile {
  std::vector<double> s;
  std::vector<double> kappa;
  std::vector<double> tau;       // 0 where kappa < kappa_floor
  std::vector<std::complex<double>> psi;
};

inline constexpr double kKappaFloor = 1e-6;

// kappa = |v_s|, tau = ((v_s x v) . v_ss) / |v_s|^2 (the B' = +tau N frame
// convention), psi = kappa e^{i int tau}. Throws when kappa < floor
// everywhere (transform undefined).
HasimotoProfile hasimoto_profile(const UnitVecField& v, double kappa_floor = kKappaFloor);

struct NlsResidualReport {
  // max over probed nodes and times of |i psi_t - psi_ss - (1/2)|psi|^2 psi|
  // after removing the best time-dependent global phase.
  double residual = 0.0;
  // Same with the opposite sign convention, reported so a convention error
  // in the transform is visible rather than absorbed.
  double residual_opposite_sign = 0.0;
  int probe_nodes = 0;
  int probe_times = 0;
};

// Needs at least 3 consecutive uniformly spaced states.
NlsResidualReport nls_residual(const std::vector<FilamentState>& states,
                               double kappa_floor = kKappaFloor);

}  // namespace filament
