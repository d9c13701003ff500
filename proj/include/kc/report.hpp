#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "kc/identities.hpp"

namespace kc {

inline constexpr const char *kReportSchema = "kc-report/1";

struct RunConfig {
  SystemParams params;
  int points = 100;
  std::uint64_t seed = 7;
  Tolerances tol;

  // orbit
  double T = 10.0;
  double orbit_tol = 1e-10;
  int orbits = 10;
  double drift_bound = 1e-6;
  std::string csv;  // trajectory export path for the first orbit, empty for none

  // stackel: oscillator strengths and indices j1, j2 live in osc
  SystemParams osc{System::OSC, 4.0, 0.0, 0.0, 0.0, {2, 1}, {2, 1}};
  double Eprime = 8.0;
};

nlohmann::json config_json(const RunConfig &cfg, const std::string &command);

nlohmann::json verify_report(const RunConfig &cfg);
nlohmann::json orbit_report(const RunConfig &cfg);
nlohmann::json degree_report(const RunConfig &cfg);
nlohmann::json stackel_report(const RunConfig &cfg);
nlohmann::json relation_report(const RunConfig &cfg);

// id, citation, group, tier, applicability of every record for p
nlohmann::json identity_catalog(const SystemParams &p);

// the report's main table flattened to CSV
std::string report_csv(const nlohmann::json &report);

} // namespace kc
