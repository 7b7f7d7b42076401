#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtcv/config.hpp"
#include "dtcv/contracts.hpp"
#include "dtcv/trace.hpp"

namespace dtcv {

inline constexpr const char* kToolVersion = "0.3.0";

struct ContractReport {
  ContractVerdict verdict;
  double wall_ms = 0.0;
};

struct Report {
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> scenario_seed;
  std::optional<PlantParams> plant;
  ContractParams params;
  std::int64_t horizon = 0;
  std::string twin;
  std::string trace_source;
  std::vector<FaultSpec> faults;
  std::vector<ContractReport> contracts;  // sorted by contract id
  double total_ms = 0.0;
  Trace trace;

  bool any_violation() const;
  bool any_inconclusive() const;
};

/// 0 all satisfied, 1 violations, 2 inconclusive (and no violation).
int exit_code(const Report& r);

/// Wall times live under "timing" only, so dropping that key leaves a deterministic record.
nlohmann::json report_to_json(const Report& r);

/// Files written: report.json, violations.csv, plotdata/<signal>.csv and trace.csv.
std::vector<std::filesystem::path> emit_report(const Report& r, const std::filesystem::path& dir,
                                               const std::vector<std::string>& formats);

std::string violations_csv(const Report& r);

/// One line per contract.
std::string summary_text(const Report& r);

}  // namespace dtcv
