#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtcv/contracts.hpp"
#include "dtcv/plant.hpp"
#include "dtcv/twin.hpp"

namespace dtcv {

enum class TwinSource { Identity, Fit, Weights, ExternalCsv };

std::string_view twin_source_name(TwinSource s);
TwinSource twin_source_from_name(std::string_view name);

struct ContractOverrides {
  std::optional<int> m;
  std::optional<std::int64_t> epsilon, lag, T_Boil, Wo_min, W_min, ideal_lo, ideal_hi, wood_wait,
      alarm_hold;

  ContractParams apply(ContractParams base) const;
};

struct RunConfig {
  std::uint64_t seed = 1;
  /// Scenario seed; derived from `seed` when absent. Ignored when `params` is set.
  std::optional<std::uint64_t> scenario_seed;
  std::optional<PlantParams> params;
  std::int64_t horizon = 900;

  TwinSource twin = TwinSource::Identity;
  std::filesystem::path twin_path;  // weights file or external CSV
  int training_scenarios = 4;
  std::int64_t training_horizon = 900;

  std::vector<FaultSpec> faults;
  bool alarm_feedback = false;

  std::vector<ContractId> contracts;  // empty means all
  ContractOverrides overrides;
  bool duals = true;
  std::size_t max_states = 5'000'000;

  std::filesystem::path output_dir;  // DTCV_OUTPUT_DIR or "dtcv-out" when empty
  std::vector<std::string> formats{"json"};

  std::vector<ContractId> selected() const;
  std::uint64_t effective_scenario_seed() const;
};

/// Throws Error on unknown keys or ill-typed values.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json plant_params_to_json(const PlantParams& p);
PlantParams plant_params_from_json(const nlohmann::json& j, PlantParams base = {});
nlohmann::json contract_params_to_json(const ContractParams& p);
nlohmann::json fault_to_json(const FaultSpec& f);
FaultSpec fault_from_json(const nlohmann::json& j);

/// `kind:signal:from:to[:value]`, value being amplitude, offset or steps.
FaultSpec parse_fault(std::string_view text);

/// DTCV_OUTPUT_DIR, else "dtcv-out".
std::filesystem::path default_output_dir();

}  // namespace dtcv
