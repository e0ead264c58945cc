#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "filament/compat.hpp"
#include "filament/grid.hpp"

namespace filament {

// A named initial tangent field: grid samples plus, when the datum is
// analytic, its closed-form boundary jets (orders 0..6), the preferred input
// for the corrector.
struct Datum {
  std::string name;
  UnitVecField field;
  Vec3 a{};  // datum value at s = 0
  std::optional<std::pair<JetVec3, JetVec3>> jets;
};

inline constexpr int kDatumJetLen = 2 * kMaxCompatOrder + 1;

// v = e3 everywhere; the degenerate half-plane configuration.
Datum make_constant_e3(const GridSpec& g);

// v = (cos(pi s/2), 0, sin(pi s/2)); steady state of both flows.
Datum make_quarter_circle(const GridSpec& g);

// v = (cos(alpha) cos(k s), cos(alpha) sin(k s), sin(alpha)).
Datum make_helix_tangent(const GridSpec& g, double alpha = 0.5,
                         double wavenumber = 2.0 * 3.14159265358979323846);

// Quarter circle plus a seeded interior bump with a s^3(1-s)^3 envelope,
// renormalized; exactly first-order compatible, generically incompatible at
// order two. `modes` low sine modes enter with 1/sqrt(m) amplitudes.
Datum make_perturbed_quarter_circle(const GridSpec& g, double delta = 0.1,
                                    std::uint64_t seed = 1, int modes = 2);

// Quarter circle with a third-derivative twist at both ends, blended by the
// corrector's cut-off pair; exactly second-order compatible while the
// regularized conditions at order two fail, so the corrector has real work.
Datum make_twisted_quarter_circle(const GridSpec& g, double beta = 0.5);

// Dispatch by name; parameters are read from the arguments that apply.
Datum make_datum(const std::string& name, const GridSpec& g, double delta,
                 std::uint64_t seed, double alpha, double wavenumber, double beta,
                 int modes = 2);

}  // namespace filament
