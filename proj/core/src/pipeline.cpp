#include "dtcv/pipeline.hpp"

#include <algorithm>
#include <chrono>

namespace dtcv {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

PlantParams scenario_params(const RunConfig& cfg) {
  if (cfg.params) return *cfg.params;
  return random_scenario(cfg.effective_scenario_seed());
}

SurrogatePtr make_twin(const RunConfig& cfg) {
  SurrogatePtr twin;
  switch (cfg.twin) {
    case TwinSource::Identity:
      twin = perfect_twin();
      break;
    case TwinSource::Weights:
      twin = load_surrogate(cfg.twin_path);
      break;
    case TwinSource::Fit: {
      std::vector<Trace> traces;
      std::vector<PlantParams> params;
      for (int k = 0; k < cfg.training_scenarios; ++k) {
        const PlantParams p = random_scenario(mix(cfg.seed, 1000 + static_cast<std::uint64_t>(k)));
        traces.push_back(run(p, cfg.training_horizon));
        params.push_back(p);
      }
      twin = fit(traces, params, cfg.seed);
      break;
    }
    case TwinSource::ExternalCsv:
      throw Error("an external trace has no twin to build");
  }
  for (std::size_t k = 0; k < cfg.faults.size(); ++k) {
    FaultSpec f = cfg.faults[k];
    if (f.kind == FaultKind::AdditiveNoise && f.seed == 0) f.seed = mix(cfg.seed, 2000 + k);
    twin = inject_fault(twin, f);
  }
  return twin;
}

Report verify_trace(const Trace& trace, const std::vector<ContractId>& ids,
                    const ContractParams& params, const CheckLimits& limits, bool duals) {
  Report r;
  r.params = params;
  r.trace = trace;
  std::vector<ContractId> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const ContractId id : sorted) {
    const auto start = Clock::now();
    const Contract c = stage("build", [&] { return build_contract(id, trace, params); });
    ContractReport cr;
    cr.verdict = stage("verify", [&] { return verify_contract(c, trace, limits, duals); });
    cr.wall_ms = ms_since(start);
    r.contracts.push_back(std::move(cr));
  }
  return r;
}

Report run_pipeline(const RunConfig& cfg) {
  const auto start = Clock::now();
  Trace trace;
  std::optional<PlantParams> plant;
  std::string twin_name;
  std::string source;

  if (cfg.twin == TwinSource::ExternalCsv) {
    trace = stage("ingest", [&] { return ingest_trace(cfg.twin_path); });
    if (cfg.params) plant = cfg.params;
    twin_name = "external";
    source = cfg.twin_path.string();
  } else {
    plant = stage("simulate", [&] {
      PlantParams p = scenario_params(cfg);
      validate(p);
      return p;
    });
    const SurrogatePtr twin = stage("twin", [&] { return make_twin(cfg); });
    twin_name = twin->kind();
    RolloutOptions opts;
    opts.alarm_feedback = cfg.alarm_feedback;
    trace = stage("rollout", [&] { return rollout(*twin, *plant, cfg.horizon, cfg.seed, opts); });
    source = "rollout";
  }

  ContractParams base;
  if (plant) base = params_for(*plant);
  base.period = trace.period;
  const ContractParams params = cfg.overrides.apply(base);
  stage("contracts", [&] {
    validate(params);
    return 0;
  });

  CheckLimits limits;
  limits.max_states = cfg.max_states;
  Report r = verify_trace(trace, cfg.selected(), params, limits, cfg.duals);
  r.seed = cfg.seed;
  if (!cfg.params && cfg.twin != TwinSource::ExternalCsv) r.scenario_seed = cfg.effective_scenario_seed();
  r.plant = plant;
  r.horizon = static_cast<std::int64_t>(trace.size());
  r.twin = twin_name;
  r.trace_source = source;
  r.faults = cfg.faults;
  r.total_ms = ms_since(start);
  return r;
}

}  // namespace dtcv
