#include "dtcv/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

using json = nlohmann::json;

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw Error("unknown key '" + k + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error("bad value for '" + std::string(key) + "' in " + where);
  }
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out, const std::string& where) {
  if (!j.contains(key)) return;
  T v{};
  read(j, key, v, where);
  out = v;
}

Signal parse_signal(const std::string& name) {
  const auto s = signal_from_name(name);
  if (!s) throw Error("unknown signal '" + name + "'");
  return *s;
}

}  // namespace

std::string_view twin_source_name(TwinSource s) {
  switch (s) {
    case TwinSource::Identity: return "identity";
    case TwinSource::Fit: return "fit";
    case TwinSource::Weights: return "weights";
    case TwinSource::ExternalCsv: return "csv";
  }
  return "";
}

TwinSource twin_source_from_name(std::string_view name) {
  for (const TwinSource s : {TwinSource::Identity, TwinSource::Fit, TwinSource::Weights, TwinSource::ExternalCsv})
    if (twin_source_name(s) == name) return s;
  throw Error("unknown twin source '" + std::string(name) + "' (identity, fit, weights, csv)");
}

ContractParams ContractOverrides::apply(ContractParams p) const {
  if (m) p.m = *m;
  if (epsilon) p.epsilon = *epsilon;
  if (lag) p.lag = *lag;
  if (T_Boil) p.T_Boil = *T_Boil;
  if (Wo_min) p.Wo_min = *Wo_min;
  if (W_min) p.W_min = *W_min;
  if (ideal_lo) p.ideal_lo = *ideal_lo;
  if (ideal_hi) p.ideal_hi = *ideal_hi;
  if (wood_wait) p.wood_wait = *wood_wait;
  if (alarm_hold) p.alarm_hold = *alarm_hold;
  return p;
}

std::vector<ContractId> RunConfig::selected() const {
  return contracts.empty() ? all_contracts() : contracts;
}

std::uint64_t RunConfig::effective_scenario_seed() const { return scenario_seed.value_or(seed); }

json plant_params_to_json(const PlantParams& p) {
  return json{{"burn_rate", p.burn_rate},
              {"alpha", p.alpha},
              {"beta", p.beta},
              {"delta", p.delta},
              {"liquid_heat_rate", p.liquid_heat_rate},
              {"T_Boil", p.T_Boil},
              {"T_env", p.T_env},
              {"initial_wood", p.initial_wood},
              {"initial_water", p.initial_water},
              {"delivery_size", p.delivery_size},
              {"Wo_min", p.Wo_min},
              {"W_min", p.W_min},
              {"cooling_rate", p.cooling_rate},
              {"burner_cooling", p.burner_cooling},
              {"delivery_latency", p.delivery_latency},
              {"deliveries_enabled", p.deliveries_enabled},
              {"period", p.period},
              {"window", p.window},
              {"wood_wait", p.wood_wait},
              {"alarm_hold", p.alarm_hold},
              {"ideal_lo", p.ideal_lo},
              {"ideal_hi", p.ideal_hi}};
}

PlantParams plant_params_from_json(const json& j, PlantParams p) {
  const std::string where = "plant parameters";
  only_keys(j, {"burn_rate", "alpha", "beta", "delta", "liquid_heat_rate", "T_Boil", "T_env",
                "initial_wood", "initial_water", "delivery_size", "Wo_min", "W_min", "cooling_rate", "burner_cooling",
                "delivery_latency", "deliveries_enabled", "period", "window", "wood_wait",
                "alarm_hold", "ideal_lo", "ideal_hi"},
            where);
  read(j, "burn_rate", p.burn_rate, where);
  read(j, "alpha", p.alpha, where);
  read(j, "beta", p.beta, where);
  read(j, "delta", p.delta, where);
  read(j, "liquid_heat_rate", p.liquid_heat_rate, where);
  read(j, "T_Boil", p.T_Boil, where);
  read(j, "T_env", p.T_env, where);
  read(j, "initial_wood", p.initial_wood, where);
  read(j, "initial_water", p.initial_water, where);
  read(j, "delivery_size", p.delivery_size, where);
  read(j, "Wo_min", p.Wo_min, where);
  read(j, "W_min", p.W_min, where);
  read(j, "cooling_rate", p.cooling_rate, where);
  read(j, "burner_cooling", p.burner_cooling, where);
  read(j, "delivery_latency", p.delivery_latency, where);
  read(j, "deliveries_enabled", p.deliveries_enabled, where);
  read(j, "period", p.period, where);
  read(j, "window", p.window, where);
  read(j, "wood_wait", p.wood_wait, where);
  read(j, "alarm_hold", p.alarm_hold, where);
  read(j, "ideal_lo", p.ideal_lo, where);
  read(j, "ideal_hi", p.ideal_hi, where);
  return p;
}

json contract_params_to_json(const ContractParams& p) {
  return json{{"m", p.m},           {"epsilon", p.epsilon}, {"lag", p.lag},
              {"period", p.period}, {"T_Boil", p.T_Boil},   {"Wo_min", p.Wo_min},
              {"W_min", p.W_min},   {"ideal_lo", p.ideal_lo}, {"ideal_hi", p.ideal_hi},
              {"wood_wait", p.wood_wait}, {"alarm_hold", p.alarm_hold}};
}

json fault_to_json(const FaultSpec& f) {
  json j{{"kind", fault_kind_name(f.kind)},
         {"signal", signal_name(f.signal)},
         {"t_from", f.t_from},
         {"t_to", f.t_to}};
  switch (f.kind) {
    case FaultKind::AdditiveNoise:
      j["amplitude"] = f.amplitude;
      j["seed"] = f.seed;
      break;
    case FaultKind::Bias: j["offset"] = f.offset; break;
    case FaultKind::Lag: j["steps"] = f.steps; break;
    case FaultKind::StuckOutput: break;
  }
  return j;
}

FaultSpec fault_from_json(const json& j) {
  const std::string where = "fault";
  only_keys(j, {"kind", "signal", "t_from", "t_to", "amplitude", "seed", "offset", "steps"}, where);
  FaultSpec f;
  std::string kind, signal;
  read(j, "kind", kind, where);
  read(j, "signal", signal, where);
  f.kind = fault_kind_from_name(kind);
  f.signal = parse_signal(signal);
  read(j, "t_from", f.t_from, where);
  read(j, "t_to", f.t_to, where);
  read(j, "amplitude", f.amplitude, where);
  read(j, "seed", f.seed, where);
  read(j, "offset", f.offset, where);
  read(j, "steps", f.steps, where);
  return f;
}

FaultSpec parse_fault(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t s = 0;
  for (;;) {
    const std::size_t c = text.find(':', s);
    parts.emplace_back(text.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
    if (c == std::string_view::npos) break;
    s = c + 1;
  }
  if (parts.size() < 4 || parts.size() > 5)
    throw Error("fault '" + std::string(text) + "' is not kind:signal:from:to[:value]");
  FaultSpec f;
  try {
    f.kind = fault_kind_from_name(parts[0]);
    f.signal = parse_signal(parts[1]);
    f.t_from = std::stoll(parts[2]);
    f.t_to = std::stoll(parts[3]);
    if (parts.size() == 5) {
      const double v = std::stod(parts[4]);
      switch (f.kind) {
        case FaultKind::AdditiveNoise: f.amplitude = v; break;
        case FaultKind::Bias: f.offset = v; break;
        case FaultKind::Lag: f.steps = static_cast<std::int64_t>(v); break;
        case FaultKind::StuckOutput: break;
      }
    }
  } catch (const std::logic_error&) {
    throw Error("fault '" + std::string(text) + "' has a malformed number");
  }
  return f;
}

RunConfig config_from_json(const json& j) {
  const std::string where = "run configuration";
  only_keys(j, {"seed", "scenario_seed", "params", "horizon", "twin", "faults", "alarm_feedback",
                "contracts", "contract_params", "duals", "max_states", "output_dir", "formats"},
            where);
  RunConfig c;
  read(j, "seed", c.seed, where);
  read_opt(j, "scenario_seed", c.scenario_seed, where);
  if (j.contains("params")) c.params = plant_params_from_json(j.at("params"));
  read(j, "horizon", c.horizon, where);
  if (j.contains("twin")) {
    const json& t = j.at("twin");
    only_keys(t, {"source", "path", "training_scenarios", "training_horizon"}, "twin");
    std::string source = "identity";
    read(t, "source", source, "twin");
    c.twin = twin_source_from_name(source);
    std::string path;
    read(t, "path", path, "twin");
    c.twin_path = path;
    read(t, "training_scenarios", c.training_scenarios, "twin");
    read(t, "training_horizon", c.training_horizon, "twin");
  }
  if (j.contains("faults")) {
    if (!j.at("faults").is_array()) throw Error("'faults' must be a list");
    for (const auto& f : j.at("faults")) c.faults.push_back(fault_from_json(f));
  }
  read(j, "alarm_feedback", c.alarm_feedback, where);
  if (j.contains("contracts")) {
    const json& ids = j.at("contracts");
    if (ids.is_string() && ids.get<std::string>() == "all") {
      c.contracts.clear();
    } else if (ids.is_array()) {
      for (const auto& id : ids) {
        const auto name = id.get<std::string>();
        const auto cid = contract_from_name(name);
        if (!cid) throw Error("unknown contract '" + name + "'");
        c.contracts.push_back(*cid);
      }
      if (c.contracts.empty()) throw Error("at least one contract must be selected");
    } else {
      throw Error("'contracts' must be a list of ids or \"all\"");
    }
  }
  if (j.contains("contract_params")) {
    const json& p = j.at("contract_params");
    const std::string w = "contract_params";
    only_keys(p, {"m", "epsilon", "lag", "T_Boil", "Wo_min", "W_min", "ideal_lo", "ideal_hi",
                  "wood_wait", "alarm_hold"},
              w);
    auto& o = c.overrides;
    read_opt(p, "m", o.m, w);
    read_opt(p, "epsilon", o.epsilon, w);
    read_opt(p, "lag", o.lag, w);
    read_opt(p, "T_Boil", o.T_Boil, w);
    read_opt(p, "Wo_min", o.Wo_min, w);
    read_opt(p, "W_min", o.W_min, w);
    read_opt(p, "ideal_lo", o.ideal_lo, w);
    read_opt(p, "ideal_hi", o.ideal_hi, w);
    read_opt(p, "wood_wait", o.wood_wait, w);
    read_opt(p, "alarm_hold", o.alarm_hold, w);
  }
  read(j, "duals", c.duals, where);
  read(j, "max_states", c.max_states, where);
  std::string out;
  read(j, "output_dir", out, where);
  c.output_dir = out;
  read(j, "formats", c.formats, where);
  for (const auto& f : c.formats)
    if (f != "json" && f != "csv" && f != "plotdata") throw Error("unknown report format '" + f + "'");
  if (c.horizon < 1) throw Error("horizon must be at least 1");
  if ((c.twin == TwinSource::Weights || c.twin == TwinSource::ExternalCsv) && c.twin_path.empty())
    throw Error("twin source '" + std::string(twin_source_name(c.twin)) + "' needs a path");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  if (c.scenario_seed) j["scenario_seed"] = *c.scenario_seed;
  if (c.params) j["params"] = plant_params_to_json(*c.params);
  j["horizon"] = c.horizon;
  json t{{"source", twin_source_name(c.twin)},
         {"training_scenarios", c.training_scenarios},
         {"training_horizon", c.training_horizon}};
  if (!c.twin_path.empty()) t["path"] = c.twin_path.string();
  j["twin"] = t;
  j["faults"] = json::array();
  for (const auto& f : c.faults) j["faults"].push_back(fault_to_json(f));
  j["alarm_feedback"] = c.alarm_feedback;
  j["contracts"] = json::array();
  for (const auto id : c.selected()) j["contracts"].push_back(contract_name(id));
  json p = json::object();
  const auto& o = c.overrides;
  if (o.m) p["m"] = *o.m;
  if (o.epsilon) p["epsilon"] = *o.epsilon;
  if (o.lag) p["lag"] = *o.lag;
  if (o.T_Boil) p["T_Boil"] = *o.T_Boil;
  if (o.Wo_min) p["Wo_min"] = *o.Wo_min;
  if (o.W_min) p["W_min"] = *o.W_min;
  if (o.ideal_lo) p["ideal_lo"] = *o.ideal_lo;
  if (o.ideal_hi) p["ideal_hi"] = *o.ideal_hi;
  if (o.wood_wait) p["wood_wait"] = *o.wood_wait;
  if (o.alarm_hold) p["alarm_hold"] = *o.alarm_hold;
  j["contract_params"] = p;
  j["duals"] = c.duals;
  j["max_states"] = c.max_states;
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir.string();
  j["formats"] = c.formats;
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config file " + path.string() + ": " + e.what());
  }
  RunConfig c = config_from_json(j);
  // Relative paths in a config file are relative to the file.
  if (!c.twin_path.empty() && c.twin_path.is_relative())
    c.twin_path = path.parent_path() / c.twin_path;
  return c;
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("DTCV_OUTPUT_DIR"); env && *env) return env;
  return "dtcv-out";
}

}  // namespace dtcv
