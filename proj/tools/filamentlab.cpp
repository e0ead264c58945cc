// filamentlab: batch driver for the vortex-filament laboratory.
//
//   filamentlab <mode> --config <path> [--set key=value ...]
//
// Modes: simulate, sweep-eps, check-compat, correct-datum, diagnose.
// Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "filament/data.hpp"
#include "filament/diagnostics.hpp"
#include "filament/dynamics.hpp"
#include "filament/io.hpp"

namespace fs = std::filesystem;
using namespace filament;

namespace {

class Config {
 public:
  static Config load(const std::string& path, const std::vector<std::string>& overrides) {
    Config c;
    if (!path.empty()) {
      std::ifstream in(path);
      if (!in) throw ValidationError("cannot open config file: " + path);
      std::string line;
      int lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
          throw ValidationError("config line " + std::to_string(lineno) +
                                ": expected key = value");
        c.kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
      }
    }
    for (const auto& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos)
        throw ValidationError("--set needs key=value, got: " + ov);
      c.kv_[trim(ov.substr(0, eq))] = trim(ov.substr(eq + 1));
    }
    return c;
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  double number(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ValidationError("config key " + key + ": not a number: " + it->second);
    }
  }

  long integer(const std::string& key, long dflt) const {
    const double v = number(key, static_cast<double>(dflt));
    const long r = std::lround(v);
    if (std::abs(v - r) > 1e-12)
      throw ValidationError("config key " + key + ": expected an integer");
    return r;
  }

  bool flag(const std::string& key, bool dflt) const {
    const std::string v = str(key, dflt ? "on" : "off");
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ValidationError("config key " + key + ": expected on/off");
  }

  std::vector<double> number_list(const std::string& key, const std::string& dflt) const {
    std::stringstream ss(str(key, dflt));
    std::vector<double> out;
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ValidationError("config key " + key + ": not a number list");
      }
    }
    if (out.empty()) throw ValidationError("config key " + key + ": empty list");
    return out;
  }

  nlohmann::json echo() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : kv_) j[k] = v;
    return j;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  std::map<std::string, std::string> kv_;
};

fs::path output_dir(const Config& cfg) {
  std::string dir = cfg.str("output.dir", "out");
  if (const char* env = std::getenv("FILAMENTLAB_OUT")) dir = env;
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

Datum load_datum(const Config& cfg, const GridSpec& g) {
  const std::string name = cfg.str("datum.name", "quarter-circle");
  if (name == "csv") {
    if (!cfg.has("datum.csv")) throw ValidationError("datum.csv path required");
    VecField f = read_field_csv(cfg.str("datum.csv", ""));
    if (f.grid.n_cells != g.n_cells)
      throw ValidationError("incompatible grid: CSV has " +
                            std::to_string(f.grid.n_cells) + " cells, config asks for " +
                            std::to_string(g.n_cells));
    Datum d{"csv", UnitVecField::projected(std::move(f)), Vec3{}, std::nullopt};
    d.a = d.field[0];
    return d;
  }
  return make_datum(name, g, cfg.number("datum.delta", 0.1),
                    static_cast<std::uint64_t>(cfg.integer("datum.seed", 1)),
                    cfg.number("datum.alpha", 0.5),
                    cfg.number("datum.wavenumber", 2.0 * M_PI),
                    cfg.number("datum.beta", 0.5),
                    static_cast<int>(cfg.integer("datum.modes", 2)));
}

Vec3 boundary_vector(const Config& cfg, const Datum& datum) {
  if (!cfg.has("a")) return datum.a;
  const auto v = cfg.number_list("a", "");
  if (v.size() != 3) throw ValidationError("a: expected three components");
  Vec3 a{v[0], v[1], v[2]};
  const double n = norm(a);
  if (std::abs(n - 1.0) > 1e-6)
    throw ValidationError("a: must be a unit vector (|a| off by more than 1e-6)");
  if (std::abs(n - 1.0) > 1e-12) {
    std::cerr << "warning: normalizing a (|a| - 1 = " << (n - 1.0) << ")\n";
    a = (1.0 / n) * a;
  }
  return a;
}

SolverConfig solver_config(const Config& cfg, const Vec3& a) {
  SolverConfig sc;
  sc.eps = cfg.number("solver.eps", 0.0);
  sc.dt = cfg.number("solver.dt", 0.0);
  const std::string scheme = cfg.str("solver.scheme", sc.eps > 0.0 ? "semi-implicit" : "midpoint");
  if (scheme == "semi-implicit")
    sc.scheme = Scheme::kSemiImplicitLinearized;
  else if (scheme == "midpoint")
    sc.scheme = Scheme::kImplicitMidpointSphere;
  else
    throw ValidationError("solver.scheme: expected semi-implicit or midpoint");
  sc.a = a;
  if (cfg.has("solver.renormalize"))
    sc.renormalize = cfg.flag("solver.renormalize", true) ? Renormalize::kProjectEachStep
                                                          : Renormalize::kOff;
  sc.picard_iters = static_cast<int>(cfg.integer("solver.picard_iters", 2));
  sc.midpoint_max_iters = static_cast<int>(cfg.integer("solver.midpoint_max_iters", 50));
  sc.newton_tol = cfg.number("solver.newton_tol", 1e-12);
  sc.unit_tol = cfg.number("solver.unit_tol", 1e-10);
  sc.validate();
  return sc;
}

std::string snap_name(long k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06ld.csv", k);
  return buf;
}

VecField integrate_position(const UnitVecField& v) {
  // x0 with x0_s = v0, anchored at the origin.
  VecField x(v.grid());
  Vec3 acc{};
  x[0] = acc;
  for (int i = 1; i < v.size(); ++i) {
    acc += 0.5 * v.grid().h * (v[i - 1] + v[i]);
    x[i] = acc;
  }
  return x;
}

int mode_simulate(const Config& cfg) {
  const GridSpec g(static_cast<int>(cfg.integer("grid.n_cells", 128)));
  Datum datum = load_datum(cfg, g);
  const Vec3 a = boundary_vector(cfg, datum);
  SolverConfig sc = solver_config(cfg, a);
  const double T = cfg.number("solver.T", 0.01);
  const long stride = cfg.integer("output.stride", 10);
  const bool with_position = cfg.flag("output.position", false);

  if (stride < 1) throw ValidationError("output.stride must be >= 1");
  const double dt = sc.effective_dt(g);
  // Steps land on a stride multiple so the stored snapshots are uniformly
  // spaced in t (position reconstruction depends on that).
  long steps = std::max<long>(1, std::lround(T / dt));
  steps = ((steps + stride - 1) / stride) * stride;
  sc.dt = T / static_cast<double>(steps);

  const fs::path dir = output_dir(cfg);
  FilamentState st{0.0, datum.field, std::nullopt, 0, {}};
  const UnitVecField initial = st.v;

  std::vector<FilamentState> snaps{st};
  InvariantSeries inv;
  inv.append(invariants(st));
  for (long k = 1; k <= steps; ++k) {
    st = step(st, sc);
    if (k % stride == 0) {
      snaps.push_back(st);
      inv.append(invariants(st));
    }
  }

  std::vector<VecField> xs;
  if (with_position) xs = reconstruct_position(snaps, integrate_position(initial));

  nlohmann::json times = nlohmann::json::array(), files = nlohmann::json::array();
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    if (with_position) snaps[k].x = xs[k];
    const std::string name = snap_name(static_cast<long>(k));
    write_snapshot_csv(dir / name, snaps[k]);
    times.push_back(snaps[k].t);
    files.push_back(name);
  }
  write_invariants_csv(dir / "invariants.csv", inv);

  double max_disp = 0.0;
  for (int i = 0; i < g.n_nodes(); ++i)
    max_disp = std::max(max_disp, norm(st.v[i] - initial[i]));

  nlohmann::json inv_json = nlohmann::json::object();
  {
    std::vector<double> t, i1, i2, i3, drift, bl, br;
    for (const auto& r : inv.rows) {
      t.push_back(r.t); i1.push_back(r.I1); i2.push_back(r.I2); i3.push_back(r.I3);
      drift.push_back(r.unit_drift); bl.push_back(r.bres_left); br.push_back(r.bres_right);
    }
    inv_json = {{"t", t}, {"I1", i1}, {"I2", i2}, {"I3", i3},
                {"unit_drift", drift}, {"bres_left", bl}, {"bres_right", br}};
  }
  write_json(dir / "index.json",
             nlohmann::json{{"mode", "simulate"},
                            {"config", cfg.echo()},
                            {"dt", sc.dt},
                            {"steps", steps},
                            {"times", times},
                            {"files", files},
                            {"max_displacement", max_disp},
                            {"warnings", st.warnings},
                            {"invariants", inv_json}});
  std::cout << "simulate: " << steps << " steps, max displacement " << max_disp << "\n";
  return 0;
}

int mode_check_compat(const Config& cfg) {
  const GridSpec g(static_cast<int>(cfg.integer("grid.n_cells", 128)));
  Datum datum = load_datum(cfg, g);
  const Vec3 a = boundary_vector(cfg, datum);
  const int up_to = static_cast<int>(cfg.integer("compat.up_to", 1));
  const double eps = cfg.number("compat.eps", 0.0);
  const double tol = cfg.number("compat.tol", default_compat_tol(g));

  const auto reports = check_compat(datum.field, a, eps, up_to, tol);
  bool all = true;
  for (const auto& r : reports) all = all && r.passed;

  nlohmann::json j{{"mode", "check-compat"}, {"config", cfg.echo()},
                   {"eps", eps},            {"tol", tol},
                   {"all_passed", all},     {"reports", to_json(reports)}};
  // Closed-form jets, when the datum has them, give residuals free of the
  // one-sided stencil truncation that the grid route charges against tol.
  if (datum.jets && 2 * up_to + 1 <= datum.jets->first.len()) {
    const auto jr = check_compat_jets(datum.jets->first, datum.jets->second, a, eps,
                                      up_to, tol);
    bool all_jets = true;
    for (const auto& r : jr) all_jets = all_jets && r.passed;
    j["reports_jets"] = to_json(jr);
    j["all_passed_jets"] = all_jets;
  }
  const fs::path dir = output_dir(cfg);
  write_json(dir / "compat.json", j);
  std::cout << "check-compat: " << (all ? "all passed" : "failed") << "\n";
  return 0;
}

int mode_correct_datum(const Config& cfg) {
  const GridSpec g(static_cast<int>(cfg.integer("grid.n_cells", 128)));
  Datum datum = load_datum(cfg, g);
  const Vec3 a = boundary_vector(cfg, datum);
  const double eps = cfg.number("corrector.eps", 0.05);
  CorrectorOptions opt;
  opt.target_order = static_cast<int>(cfg.integer("corrector.target_order", 1));
  opt.eps_star = cfg.number("corrector.eps_star", 0.2);
  if (cfg.has("corrector.tol_in")) opt.tol_in = cfg.number("corrector.tol_in", 0.0);
  opt.datum_jets = datum.jets;

  const CorrectorResult res = correct_datum(datum.field, a, eps, opt);

  const fs::path dir = output_dir(cfg);
  FilamentState st{0.0, res.corrected, std::nullopt, 0, {}};
  write_snapshot_csv(dir / "corrected.csv", st);
  write_json(dir / "jets.json",
             nlohmann::json{{"mode", "correct-datum"},
                            {"config", cfg.echo()},
                            {"eps", eps},
                            {"target_order", opt.target_order},
                            {"left", to_json(res.left)},
                            {"right", to_json(res.right)},
                            {"max_jet_coefficient", res.max_jet_coefficient},
                            {"jet_over_eps", res.max_jet_coefficient / eps},
                            {"newton_iterations", res.newton_iterations},
                            {"reports", to_json(res.reports)}});
  std::cout << "correct-datum: max jet coefficient " << res.max_jet_coefficient << "\n";
  return 0;
}

int mode_sweep(const Config& cfg) {
  const GridSpec g(static_cast<int>(cfg.integer("grid.n_cells", 128)));
  Datum datum = load_datum(cfg, g);
  const Vec3 a = boundary_vector(cfg, datum);
  SolverConfig sc = solver_config(cfg, a);
  sc.scheme = Scheme::kSemiImplicitLinearized;
  SweepOptions opt;
  opt.corrector_target_order = static_cast<int>(cfg.integer("sweep.target_order", 1));
  opt.parallelism = static_cast<int>(cfg.integer("sweep.parallelism", 4));
  opt.corrector.datum_jets = datum.jets;
  const auto eps_list = cfg.number_list("sweep.eps_list", "0.1,0.05,0.025,0.0125");
  const double T = cfg.number("sweep.T", 0.02);

  const SweepReport rep = epsilon_sweep(datum.field, a, eps_list, T, sc, opt);

  const fs::path dir = output_dir(cfg);
  for (const auto& e : rep.entries) {
    FilamentState st{T, e.v_final, std::nullopt, 0, {}};
    write_snapshot_csv(dir / ("final_eps_" + format_double(e.eps) + ".csv"), st);
  }
  FilamentState extrap{T, rep.extrapolated, std::nullopt, 0, {}};
  write_snapshot_csv(dir / "extrapolated.csv", extrap);
  nlohmann::json j = to_json(rep);
  j["mode"] = "sweep-eps";
  j["config"] = cfg.echo();
  j["T"] = T;
  write_json(dir / "sweep.json", j);
  std::cout << "sweep-eps: fitted H1 slope " << rep.fitted_slope_h1 << "\n";
  return 0;
}

int mode_diagnose(const Config& cfg) {
  const fs::path input = cfg.str("diagnose.input", cfg.str("output.dir", "out"));
  std::ifstream in(input / "index.json");
  if (!in) throw ValidationError("diagnose: cannot open " + (input / "index.json").string());
  nlohmann::json idx;
  try {
    in >> idx;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("diagnose: malformed index.json: ") + e.what());
  }
  if (!idx.contains("times") || !idx.contains("files"))
    throw ValidationError("diagnose: index.json lacks times/files");

  std::vector<FilamentState> states;
  const auto& times = idx["times"];
  const auto& files = idx["files"];
  for (std::size_t k = 0; k < files.size(); ++k) {
    VecField f = read_field_csv(input / files[k].get<std::string>());
    states.push_back(FilamentState{times[k].get<double>(),
                                   UnitVecField::projected(std::move(f)),
                                   std::nullopt, 0, {}});
  }
  if (states.empty()) throw ValidationError("diagnose: no snapshots listed");

  const double kappa_floor = cfg.number("diagnose.kappa_floor", kKappaFloor);
  const double eps = cfg.number("solver.eps", 0.0);
  const fs::path dir = output_dir(cfg);

  InvariantSeries inv;
  for (const auto& st : states) inv.append(invariants(st));
  write_invariants_csv(dir / "invariants.csv", inv);

  for (std::size_t k = 0; k < states.size(); ++k) {
    const HasimotoProfile p = hasimoto_profile(states[k].v, kappa_floor);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "hasimoto_%06zu.csv", k);
    write_hasimoto_csv(dir / buf, p);
  }

  nlohmann::json j{{"mode", "diagnose"}, {"config", cfg.echo()}};
  if (states.size() >= 3) {
    const NlsResidualReport nls = nls_residual(states, kappa_floor);
    j["nls_residual"] = nls.residual;
    j["nls_residual_opposite_sign"] = nls.residual_opposite_sign;
    j["nls_probe_nodes"] = nls.probe_nodes;
    j["nls_probe_times"] = nls.probe_times;
  }
  const BoundaryIdentityReport b = boundary_identity_check(states.back(), eps);
  j["vss_relation_left"] = b.vss_relation_left;
  j["vss_relation_right"] = b.vss_relation_right;
  j["unit_identity_2"] = b.unit_identity_2;
  j["unit_identity_3"] = b.unit_identity_3;
  write_json(dir / "diagnose.json", j);
  std::cout << "diagnose: wrote invariants and Hasimoto profiles\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"filamentlab: vortex filament on a slanted plane, batch interface"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  for (const char* name :
       {"simulate", "sweep-eps", "check-compat", "correct-datum", "diagnose"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (key = value lines)");
    sub->add_option("--set", overrides, "override config entries (key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: validation: " << e.what() << "\n";
    return 2;
  }

  try {
    const Config cfg = Config::load(config_path, overrides);
    if (app.got_subcommand("simulate")) return mode_simulate(cfg);
    if (app.got_subcommand("sweep-eps")) return mode_sweep(cfg);
    if (app.got_subcommand("check-compat")) return mode_check_compat(cfg);
    if (app.got_subcommand("correct-datum")) return mode_correct_datum(cfg);
    if (app.got_subcommand("diagnose")) return mode_diagnose(cfg);
    std::cerr << "error: validation: unknown mode\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << " (residual " << e.residual()
              << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
