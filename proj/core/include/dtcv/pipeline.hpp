#pragma once

#include <string>

#include "dtcv/config.hpp"
#include "dtcv/error.hpp"
#include "dtcv/report.hpp"

namespace dtcv {

/// Failure in one pipeline stage; what() starts with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Twin described by the config (faults applied). Not used for ExternalCsv.
SurrogatePtr make_twin(const RunConfig& cfg);

/// Plant parameters described by the config.
PlantParams scenario_params(const RunConfig& cfg);

/// simulate (or ingest) -> twin rollout -> build + verify each contract -> report.
Report run_pipeline(const RunConfig& cfg);

/// Verifies contracts on an already assembled trace.
Report verify_trace(const Trace& trace, const std::vector<ContractId>& ids,
                    const ContractParams& params, const CheckLimits& limits, bool duals);

}  // namespace dtcv
