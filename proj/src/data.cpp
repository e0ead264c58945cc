#include "filament/data.hpp"

#include <cmath>

namespace filament {

namespace {

constexpr double kPi = 3.14159265358979323846;

JetVec3 jet_from_components(const JetScalar& x, const JetScalar& y, const JetScalar& z) {
  JetVec3 j(std::min({x.len(), y.len(), z.len()}));
  for (int i = 0; i < j.len(); ++i) j.d[i] = Vec3{x.d[i], y.d[i], z.d[i]};
  return j;
}

JetScalar jet_zero(int len) { return JetScalar(len); }

// SplitMix64: platform-independent seeded draws in [-1, 1].
struct SeededDraws {
  std::uint64_t state;
  explicit SeededDraws(std::uint64_t seed) : state(seed) {}
  double next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
  }
};

}  // namespace

Datum make_constant_e3(const GridSpec& g) {
  VecField f(g);
  for (auto& v : f.data) v = kE3;
  JetVec3 jet = JetVec3::constant(kE3, kDatumJetLen);
  return Datum{"constant-e3", UnitVecField::validated(std::move(f)), kE3,
               std::make_pair(jet, jet)};
}

Datum make_quarter_circle(const GridSpec& g) {
  VecField f(g);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double s = g.node(i);
    f[i] = Vec3{std::cos(0.5 * kPi * s), 0.0, std::sin(0.5 * kPi * s)};
  }
  auto jet_at = [&](double s0) {
    return jet_from_components(jet_cos(0.5 * kPi, 0.0, s0, kDatumJetLen),
                               jet_zero(kDatumJetLen),
                               jet_sin(0.5 * kPi, 0.0, s0, kDatumJetLen));
  };
  return Datum{"quarter-circle", UnitVecField::validated(std::move(f)),
               Vec3{1.0, 0.0, 0.0}, std::make_pair(jet_at(0.0), jet_at(1.0))};
}

Datum make_helix_tangent(const GridSpec& g, double alpha, double wavenumber) {
  const double c = std::cos(alpha), sa = std::sin(alpha);
  VecField f(g);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double s = g.node(i);
    f[i] = Vec3{c * std::cos(wavenumber * s), c * std::sin(wavenumber * s), sa};
  }
  auto jet_at = [&](double s0) {
    JetScalar zc(kDatumJetLen);
    zc.d[0] = sa;
    return jet_from_components(c * jet_cos(wavenumber, 0.0, s0, kDatumJetLen),
                               c * jet_sin(wavenumber, 0.0, s0, kDatumJetLen), zc);
  };
  return Datum{"helix-tangent", UnitVecField::validated(std::move(f)),
               Vec3{c, 0.0, sa}, std::make_pair(jet_at(0.0), jet_at(1.0))};
}

Datum make_perturbed_quarter_circle(const GridSpec& g, double delta,
                                    std::uint64_t seed, int modes) {
  if (modes < 1) throw ValidationError("perturbed datum: modes must be >= 1");
  // Bump component c: 64 delta s^3(1-s)^3 sum_m amp[m][c] sin(m pi s)/sqrt(m).
  SeededDraws rng(seed);
  std::vector<std::array<double, 3>> amp(modes);
  for (auto& row : amp)
    for (double& a : row) a = rng.next();

  // s^3 (1-s)^3 = s^3 - 3 s^4 + 3 s^5 - s^6
  const std::vector<double> envelope{0, 0, 0, 1, -3, 3, -1};

  Datum base = make_quarter_circle(g);
  VecField f(g);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double s = g.node(i);
    const double env = 64.0 * delta * s * s * s * (1 - s) * (1 - s) * (1 - s);
    Vec3 bump{};
    for (int m = 0; m < modes; ++m)
      for (int c = 0; c < 3; ++c)
        bump[c] += env * amp[m][c] * std::sin((m + 1) * kPi * s) / std::sqrt(m + 1.0);
    f[i] = base.field[i] + bump;
  }

  auto jet_at = [&](double s0, const JetVec3& qjet) {
    const JetScalar env = (64.0 * delta) * jet_poly(envelope, s0, kDatumJetLen);
    JetVec3 bump(kDatumJetLen);
    for (int c = 0; c < 3; ++c) {
      JetScalar comp(kDatumJetLen);
      for (int m = 0; m < modes; ++m)
        comp = comp + (amp[m][c] / std::sqrt(m + 1.0)) *
                          jet_sin((m + 1) * kPi, 0.0, s0, kDatumJetLen);
      const JetScalar prod = mul(env, comp);
      for (int j = 0; j < kDatumJetLen; ++j) bump.d[j][c] = prod.d[j];
    }
    return normalize(qjet + bump);
  };
  return Datum{"perturbed-quarter-circle", UnitVecField::projected(std::move(f)),
               Vec3{1.0, 0.0, 0.0},
               std::make_pair(jet_at(0.0, base.jets->first), jet_at(1.0, base.jets->second))};
}

Datum make_twisted_quarter_circle(const GridSpec& g, double beta) {
  // Third-derivative deltas beta (v x v_s) at each end; zero through order 2
  // and at order 4, so the unregularized conditions hold exactly to order 2.
  const Vec3 d3{0.0, -0.5 * kPi * beta, 0.0};  // same at both ends

  Datum base = make_quarter_circle(g);
  VecField f(g);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double s = g.node(i);
    const Vec3 t0 = (s * s * s / 6.0) * d3;
    const Vec3 t1 = ((s - 1) * (s - 1) * (s - 1) / 6.0) * d3;
    f[i] = base.field[i] + cutoff_psi0(s) * t0 + cutoff_psi1(s) * t1;
  }

  auto jet_at = [&](const JetVec3& qjet) {
    JetVec3 t(kDatumJetLen);
    t.d[3] = d3;  // cutoffs are identically 1 (resp. 0) near the ends
    return normalize(qjet + t);
  };
  return Datum{"twisted-quarter-circle", UnitVecField::projected(std::move(f)),
               Vec3{1.0, 0.0, 0.0},
               std::make_pair(jet_at(base.jets->first), jet_at(base.jets->second))};
}

Datum make_datum(const std::string& name, const GridSpec& g, double delta,
                 std::uint64_t seed, double alpha, double wavenumber, double beta,
                 int modes) {
  if (name == "constant-e3") return make_constant_e3(g);
  if (name == "quarter-circle") return make_quarter_circle(g);
  if (name == "helix-tangent") return make_helix_tangent(g, alpha, wavenumber);
  if (name == "perturbed-quarter-circle")
    return make_perturbed_quarter_circle(g, delta, seed, modes);
  if (name == "twisted-quarter-circle") return make_twisted_quarter_circle(g, beta);
  throw ValidationError("unknown datum name: " + name);
}

}  // namespace filament
