#include "filament/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace filament {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_snapshot_csv(const std::filesystem::path& path, const FilamentState& state) {
  auto out = open_out(path);
  const bool with_x = state.x.has_value();
  out << (with_x ? "s,v1,v2,v3,x1,x2,x3\n" : "s,v1,v2,v3\n");
  const GridSpec& g = state.v.grid();
  for (int i = 0; i < g.n_nodes(); ++i) {
    out << format_double(g.node(i));
    for (int c = 0; c < 3; ++c) out << ',' << format_double(state.v[i][c]);
    if (with_x)
      for (int c = 0; c < 3; ++c) out << ',' << format_double((*state.x)[i][c]);
    out << '\n';
  }
}

VecField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open datum CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("s,v1,v2,v3", 0) != 0)
    throw ValidationError("malformed datum CSV: bad header in " + path.string());
  std::vector<Vec3> rows;
  std::vector<double> svals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ValidationError("malformed datum CSV: non-numeric entry in " + path.string());
      }
    }
    if (vals.size() < 4)
      throw ValidationError("malformed datum CSV: too few columns in " + path.string());
    svals.push_back(vals[0]);
    rows.push_back(Vec3{vals[1], vals[2], vals[3]});
  }
  if (rows.size() < 9)
    throw ValidationError("malformed datum CSV: needs at least 9 rows");
  const GridSpec g(static_cast<int>(rows.size()) - 1);
  for (int i = 0; i < g.n_nodes(); ++i)
    if (std::abs(svals[i] - g.node(i)) > 1e-9)
      throw ValidationError("incompatible grid: s column is not the uniform mesh");
  return VecField(g, std::move(rows));
}

void write_invariants_csv(const std::filesystem::path& path, const InvariantSeries& series) {
  auto out = open_out(path);
  out << "t,I1,I2,I3,unit_drift,bres_left,bres_right\n";
  for (const auto& r : series.rows) {
    out << format_double(r.t) << ',' << format_double(r.I1) << ',' << format_double(r.I2)
        << ',' << format_double(r.I3) << ',' << format_double(r.unit_drift) << ','
        << format_double(r.bres_left) << ',' << format_double(r.bres_right) << '\n';
  }
}

void write_hasimoto_csv(const std::filesystem::path& path, const HasimotoProfile& profile) {
  auto out = open_out(path);
  out << "s,kappa,tau,psi_re,psi_im\n";
  for (std::size_t i = 0; i < profile.s.size(); ++i) {
    out << format_double(profile.s[i]) << ',' << format_double(profile.kappa[i]) << ','
        << format_double(profile.tau[i]) << ',' << format_double(profile.psi[i].real())
        << ',' << format_double(profile.psi[i].imag()) << '\n';
  }
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

}  // namespace

nlohmann::json to_json(const CompatReport& r) {
  return nlohmann::json{{"order", r.order},
                        {"residual_left", vec_json(r.residual_left)},
                        {"residual_right", vec_json(r.residual_right)},
                        {"norm_left", r.norm_left},
                        {"norm_right", r.norm_right},
                        {"passed", r.passed}};
}

nlohmann::json to_json(const std::vector<CompatReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

nlohmann::json to_json(const BoundaryJet& jet) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : jet.coefficients) coeffs.push_back(vec_json(c));
  return nlohmann::json{{"side", jet.side == BoundaryJet::Side::kLeft ? "left" : "right"},
                        {"coefficients", coeffs}};
}

nlohmann::json to_json(const SweepReport& rep) {
  nlohmann::json eps = nlohmann::json::array();
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& e : rep.entries) {
    eps.push_back(e.eps);
    coeffs.push_back(e.corrector_max_coeff);
  }
  return nlohmann::json{{"eps", eps},
                        {"corrector_max_coeff", coeffs},
                        {"pairwise_h1", rep.pairwise_h1},
                        {"pairwise_h2", rep.pairwise_h2},
                        {"fitted_slope_h1", rep.fitted_slope_h1},
                        {"dt", rep.dt_used}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace filament
