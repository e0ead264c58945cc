#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "filament/data.hpp"
#include "filament/io.hpp"

using namespace filament;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "filamentlab_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -0.0, 2.5, 0.30000000000000004, 1e17}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-0.25) == "-0.25");
}

TEST_CASE("snapshot write/read round trip is bit exact") {
  GridSpec g(32);
  const Datum d = make_perturbed_quarter_circle(g, 0.17, 9);
  const FilamentState st{0.125, d.field, std::nullopt, 5, {}};
  const fs::path p = tmp_file("snap.csv");
  write_snapshot_csv(p, st);
  const VecField back = read_field_csv(p);
  REQUIRE(back.grid.n_cells == g.n_cells);
  for (int i = 0; i < g.n_nodes(); ++i) {
    CHECK(back[i].x == d.field[i].x);
    CHECK(back[i].y == d.field[i].y);
    CHECK(back[i].z == d.field[i].z);
  }
}

TEST_CASE("snapshot with position columns") {
  GridSpec g(16);
  const Datum d = make_constant_e3(g);
  VecField x(g);
  for (int i = 0; i < g.n_nodes(); ++i) x[i] = Vec3{0, 0, g.node(i)};
  FilamentState st{0.0, d.field, x, 0, {}};
  const fs::path p = tmp_file("snap_x.csv");
  write_snapshot_csv(p, st);
  std::ifstream in(p);
  std::string header;
  std::getline(in, header);
  CHECK(header == "s,v1,v2,v3,x1,x2,x3");
  const VecField back = read_field_csv(p);  // position columns ignored
  CHECK(back.grid.n_cells == 16);
}

TEST_CASE("malformed CSVs are rejected") {
  {
    const fs::path p = tmp_file("bad_header.csv");
    std::ofstream(p) << "a,b,c\n0,0,0,1\n";
    CHECK_THROWS_AS(read_field_csv(p), ValidationError);
  }
  {
    const fs::path p = tmp_file("bad_number.csv");
    std::ofstream out(p);
    out << "s,v1,v2,v3\n";
    for (int i = 0; i <= 16; ++i)
      out << (i / 16.0) << ",0,0," << (i == 7 ? "oops" : "1") << "\n";
    out.close();
    CHECK_THROWS_AS(read_field_csv(p), ValidationError);
  }
  {
    const fs::path p = tmp_file("bad_grid.csv");
    std::ofstream out(p);
    out << "s,v1,v2,v3\n";
    for (int i = 0; i <= 16; ++i) out << (i * i / 256.0) << ",0,0,1\n";  // non-uniform s
    out.close();
    CHECK_THROWS_AS(read_field_csv(p), ValidationError);
  }
  {
    const fs::path p = tmp_file("too_short.csv");
    std::ofstream(p) << "s,v1,v2,v3\n0,0,0,1\n";
    CHECK_THROWS_AS(read_field_csv(p), ValidationError);
  }
  CHECK_THROWS_AS(read_field_csv(tmp_file("does_not_exist.csv")), ValidationError);
}

TEST_CASE("invariants and hasimoto CSV shapes") {
  GridSpec g(32);
  InvariantSeries series;
  series.append(InvariantSample{0.0, 1.0, 2.0, 3.0, 0.0, 0.1, 0.2});
  const fs::path p = tmp_file("inv.csv");
  write_invariants_csv(p, series);
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,I1,I2,I3,unit_drift,bres_left,bres_right");
  std::getline(in, line);
  CHECK(line == "0,1,2,3,0,0.1,0.2");
}

TEST_CASE("compat reports serialize to JSON") {
  CompatReport r;
  r.order = 1;
  r.residual_left = Vec3{1e-9, 0, 0};
  r.norm_left = 1e-9;
  r.passed = true;
  const nlohmann::json j = to_json(std::vector<CompatReport>{r});
  CHECK(j.is_array());
  CHECK(j[0]["order"] == 1);
  CHECK(j[0]["passed"] == true);
  CHECK(j[0]["residual_left"][0] == 1e-9);
}
