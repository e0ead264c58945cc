#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "filament/compat.hpp"
#include "filament/diagnostics.hpp"
#include "filament/dynamics.hpp"

#include "json.hpp"

namespace filament {

// Shortest decimal representation that round-trips; the determinism contract
// for every CSV we write.
std::string format_double(double x);

// Snapshot CSV: header s,v1,v2,v3[,x1,x2,x3], one row per node.
void write_snapshot_csv(const std::filesystem::path& path, const FilamentState& state);

// Reads a tangent-field CSV (with or without position columns); the grid is
// inferred from the row count and the s column is checked against it.
VecField read_field_csv(const std::filesystem::path& path);

// Invariant series CSV: t,I1,I2,I3,unit_drift,bres_left,bres_right.
void write_invariants_csv(const std::filesystem::path& path, const InvariantSeries& series);

// Hasimoto profile CSV: s,kappa,tau,psi_re,psi_im.
void write_hasimoto_csv(const std::filesystem::path& path, const HasimotoProfile& profile);

nlohmann::json to_json(const CompatReport& report);
nlohmann::json to_json(const std::vector<CompatReport>& reports);
nlohmann::json to_json(const BoundaryJet& jet);
nlohmann::json to_json(const SweepReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace filament
