// dtcv: simulate the boiler plant, roll out twins, and verify contracts on traces.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dtcv/config.hpp"
#include "dtcv/network_text.hpp"
#include "dtcv/pipeline.hpp"
#include "dtcv/verifier.hpp"

namespace {

using json = nlohmann::json;
using namespace dtcv;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<ContractId> parse_contracts(const std::string& list) {
  if (list.empty() || list == "all") return {};
  std::vector<ContractId> out;
  for (const auto& name : split_list(list)) {
    const auto id = contract_from_name(name);
    if (!id) throw Error("unknown contract '" + name + "'");
    out.push_back(*id);
  }
  return out;
}

PlantParams read_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open parameter file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("parameter file " + path + ": " + e.what());
  }
  return plant_params_from_json(j);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

struct Common {
  std::uint64_t seed = 1;
  std::string params_file;
  std::int64_t horizon = 900;
  bool no_deliveries = false;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Root seed (also picks the random scenario)");
    app->add_option("--params", params_file, "Plant parameters as JSON instead of a random scenario");
    app->add_option("--horizon", horizon, "Number of trace rows")->check(CLI::PositiveNumber);
    app->add_flag("--no-deliveries", no_deliveries, "Suppress wood deliveries");
  }

  PlantParams plant() const {
    PlantParams p = params_file.empty() ? random_scenario(seed) : read_params(params_file);
    if (no_deliveries) p.deliveries_enabled = false;
    return p;
  }
};

struct ContractFlags {
  std::string contracts = "all";
  std::optional<int> m;
  std::optional<std::int64_t> epsilon, lag, T_Boil, Wo_min, W_min;
  bool no_duals = false;
  std::size_t max_states = 5'000'000;

  void attach(CLI::App* app) {
    app->add_option("--contracts", contracts, "Comma-separated ids (MC1..MC3, FC1..FC10, IC1) or 'all'");
    app->add_option("--m", m, "Stabilization window");
    app->add_option("--epsilon", epsilon, "Tolerance for approximate equality (scaled)");
    app->add_option("--lag", lag, "Steps a guarantee may lag its assumption");
    app->add_option("--T-Boil", T_Boil, "Boiling threshold (scaled)");
    app->add_option("--Wo-min", Wo_min, "Minimum wood level (scaled)");
    app->add_option("--W-min", W_min, "Minimum water level (scaled)");
    app->add_flag("--no-duals", no_duals, "Skip the reachability duals");
    app->add_option("--max-states", max_states, "State limit per query");
  }

  void apply(ContractOverrides& o) const {
    if (m) o.m = *m;
    if (epsilon) o.epsilon = *epsilon;
    if (lag) o.lag = *lag;
    if (T_Boil) o.T_Boil = *T_Boil;
    if (Wo_min) o.Wo_min = *Wo_min;
    if (W_min) o.W_min = *W_min;
  }
};

int finish_report(const Report& r, const std::string& out_dir, const std::string& formats) {
  const std::filesystem::path dir = out_dir.empty() ? default_output_dir() : std::filesystem::path(out_dir);
  const auto files = emit_report(r, dir, split_list(formats));
  std::cout << summary_text(r);
  for (const auto& f : files)
    if (f.filename() == "report.json" || f.filename() == "violations.csv")
      std::cout << "wrote " << f.string() << "\n";
  return exit_code(r);
}

int cmd_check(const std::string& model, const std::string& query, std::optional<std::int64_t> horizon,
              bool oracle, bool no_subsumption, std::size_t max_states) {
  const Network net = build_network(load_network_file(model));
  const Query q = parse_query(query, net);
  Verdict v;
  if (oracle) {
    v = explicit_oracle(net, q, horizon.value_or(20), max_states);
  } else {
    CheckLimits limits;
    limits.horizon = horizon;
    limits.subsumption = !no_subsumption;
    limits.max_states = max_states;
    v = check(net, q, limits);
  }
  std::cout << query << ": " << (v.satisfied ? "satisfied" : "not satisfied") << " ("
            << v.states_explored << " states)\n";
  if (v.evidence) std::cout << v.evidence->render(net);
  return v.satisfied ? 0 : 1;
}

int cmd_report(const std::string& input, const std::string& format) {
  std::ifstream in(input);
  if (!in) throw Error("cannot open report " + input);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("report " + input + ": " + e.what());
  }
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
  } else if (format == "text") {
    for (const auto& c : j.at("contracts")) {
      std::cout << c.at("id").get<std::string>() << ": ";
      if (c.at("inconclusive").get<bool>())
        std::cout << "INCONCLUSIVE";
      else if (c.at("satisfied").get<bool>())
        std::cout << "satisfied";
      else
        std::cout << "VIOLATED at row " << c.at("first_violation_row").dump();
      std::cout << "\n";
    }
  } else if (format == "csv") {
    std::cout << "contract,query,row\n";
    for (const auto& v : j.at("violations"))
      std::cout << v.at("contract").get<std::string>() << ",\"" << v.at("query").get<std::string>()
                << "\"," << v.at("row").dump() << "\n";
  } else {
    throw Error("unknown format '" + format + "' (text, json, csv)");
  }
  return j.at("summary").at("exit_code").get<int>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital-twin contract verification"};
  app.require_subcommand(1);

  // simulate
  Common sim;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run the reference plant and write a truth trace");
  sim.attach(simulate);
  simulate->add_option("-o,--output", sim_out, "Trace CSV (stdout when omitted)");

  // rollout
  Common ro;
  std::string ro_out, ro_twin = "identity", ro_weights;
  std::vector<std::string> ro_faults;
  bool ro_feedback = false;
  auto* rollout_cmd = app.add_subcommand("rollout", "Run plant and twin side by side");
  ro.attach(rollout_cmd);
  rollout_cmd->add_option("--twin", ro_twin, "identity, fit or weights");
  rollout_cmd->add_option("--weights", ro_weights, "Surrogate JSON for --twin weights");
  rollout_cmd->add_option("--fault", ro_faults, "kind:signal:from:to[:value], repeatable");
  rollout_cmd->add_flag("--alarm-feedback", ro_feedback, "Let pred_W_A turn the burner off");
  rollout_cmd->add_option("-o,--output", ro_out, "Trace CSV (stdout when omitted)");

  // fit
  std::uint64_t fit_seed = 1;
  int fit_scenarios = 4;
  std::int64_t fit_horizon = 900;
  std::string fit_out;
  auto* fit_cmd = app.add_subcommand("fit", "Train the linear surrogate on plant traces");
  fit_cmd->add_option("--seed", fit_seed, "Root seed");
  fit_cmd->add_option("--scenarios", fit_scenarios, "Training scenarios")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--horizon", fit_horizon, "Rows per training trace")->check(CLI::PositiveNumber);
  fit_cmd->add_option("-o,--output", fit_out, "Surrogate JSON")->required();

  // verify
  std::string vf_trace, vf_dir, vf_formats = "json,csv", vf_params;
  std::optional<std::uint64_t> vf_seed;
  ContractFlags vf_flags;
  auto* verify = app.add_subcommand("verify", "Verify contracts on an existing trace CSV");
  verify->add_option("--trace", vf_trace, "Trace CSV with pred_* columns")->required();
  verify->add_option("--seed", vf_seed, "Take thresholds from this random scenario");
  verify->add_option("--params", vf_params, "Take thresholds from these plant parameters");
  vf_flags.attach(verify);
  verify->add_option("--output-dir", vf_dir, "Output directory (default: $DTCV_OUTPUT_DIR or dtcv-out)");
  verify->add_option("--format", vf_formats, "Comma-separated: json, csv, plotdata");

  // pipeline
  std::string pl_config, pl_dir, pl_formats, pl_twin, pl_path;
  std::optional<std::uint64_t> pl_seed;
  std::optional<std::int64_t> pl_horizon;
  std::vector<std::string> pl_faults;
  ContractFlags pl_flags;
  auto* pipeline = app.add_subcommand("pipeline", "Simulate, roll out, verify and report");
  pipeline->add_option("--config", pl_config, "Run configuration (JSON)");
  pipeline->add_option("--seed", pl_seed, "Root seed");
  pipeline->add_option("--horizon", pl_horizon, "Number of trace rows");
  pipeline->add_option("--twin", pl_twin, "identity, fit, weights or csv");
  pipeline->add_option("--twin-path", pl_path, "Weights file or external trace");
  pipeline->add_option("--fault", pl_faults, "kind:signal:from:to[:value], repeatable");
  pl_flags.attach(pipeline);
  pipeline->add_option("--output-dir", pl_dir, "Output directory (default: $DTCV_OUTPUT_DIR or dtcv-out)");
  pipeline->add_option("--format", pl_formats, "Comma-separated: json, csv, plotdata");

  // report
  std::string rp_input, rp_format = "text";
  auto* report = app.add_subcommand("report", "Print a stored report");
  report->add_option("--input", rp_input, "report.json")->required();
  report->add_option("--format", rp_format, "text, json or csv");

  // check
  std::string ck_model, ck_query;
  std::optional<std::int64_t> ck_horizon;
  bool ck_oracle = false, ck_nosub = false;
  std::size_t ck_max = 5'000'000;
  auto* check_cmd = app.add_subcommand("check", "Model-check a query on a network file");
  check_cmd->add_option("--model", ck_model, "Network text file")->required();
  check_cmd->add_option("--query", ck_query, "'A[] p' or 'E<> p'")->required();
  check_cmd->add_option("--horizon", ck_horizon, "Bound on elapsed time");
  check_cmd->add_flag("--oracle", ck_oracle, "Use the integer-clock enumerator");
  check_cmd->add_flag("--no-subsumption", ck_nosub, "Only discard exactly repeated zones");
  check_cmd->add_option("--max-states", ck_max, "State limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*simulate) {
      write_text(sim_out, write_trace_csv(run(sim.plant(), sim.horizon, sim.seed)));
      return 0;
    }
    if (*rollout_cmd) {
      RunConfig cfg;
      cfg.seed = ro.seed;
      cfg.params = ro.plant();
      cfg.twin = twin_source_from_name(ro_twin);
      cfg.twin_path = ro_weights;
      for (const auto& f : ro_faults) cfg.faults.push_back(parse_fault(f));
      const SurrogatePtr twin = make_twin(cfg);
      RolloutOptions opts;
      opts.alarm_feedback = ro_feedback;
      write_text(ro_out, write_trace_csv(rollout(*twin, *cfg.params, ro.horizon, ro.seed, opts)));
      return 0;
    }
    if (*fit_cmd) {
      RunConfig cfg;
      cfg.seed = fit_seed;
      cfg.twin = TwinSource::Fit;
      cfg.training_scenarios = fit_scenarios;
      cfg.training_horizon = fit_horizon;
      save_surrogate(*make_twin(cfg), fit_out);
      std::cout << "wrote " << fit_out << "\n";
      return 0;
    }
    if (*verify) {
      const Trace trace = ingest_trace(vf_trace);
      ContractParams base;
      if (!vf_params.empty())
        base = params_for(read_params(vf_params));
      else if (vf_seed)
        base = params_for(random_scenario(*vf_seed));
      base.period = trace.period;
      ContractOverrides o;
      vf_flags.apply(o);
      const ContractParams params = o.apply(base);
      validate(params);
      CheckLimits limits;
      limits.max_states = vf_flags.max_states;
      auto ids = parse_contracts(vf_flags.contracts);
      if (ids.empty()) ids = all_contracts();
      Report r = verify_trace(trace, ids, params, limits, !vf_flags.no_duals);
      r.trace_source = vf_trace;
      r.twin = "external";
      r.horizon = static_cast<std::int64_t>(trace.size());
      return finish_report(r, vf_dir, vf_formats);
    }
    if (*pipeline) {
      RunConfig cfg = pl_config.empty() ? RunConfig{} : load_config(pl_config);
      if (pl_seed) cfg.seed = *pl_seed;
      if (pl_horizon) cfg.horizon = *pl_horizon;
      if (!pl_twin.empty()) cfg.twin = twin_source_from_name(pl_twin);
      if (!pl_path.empty()) cfg.twin_path = pl_path;
      for (const auto& f : pl_faults) cfg.faults.push_back(parse_fault(f));
      if (pipeline->count("--contracts")) cfg.contracts = parse_contracts(pl_flags.contracts);
      pl_flags.apply(cfg.overrides);
      if (pipeline->count("--no-duals")) cfg.duals = false;
      if (pipeline->count("--max-states")) cfg.max_states = pl_flags.max_states;
      if (!pl_dir.empty()) cfg.output_dir = pl_dir;
      if (!pl_formats.empty()) cfg.formats = split_list(pl_formats);
      const Report r = run_pipeline(cfg);
      return finish_report(r, cfg.output_dir.string(), [&] {
        std::string s;
        for (const auto& f : cfg.formats) s += (s.empty() ? "" : ",") + f;
        return s;
      }());
    }
    if (*report) return cmd_report(rp_input, rp_format);
    if (*check_cmd) return cmd_check(ck_model, ck_query, ck_horizon, ck_oracle, ck_nosub, ck_max);
  } catch (const InconclusiveError& e) {
    std::cerr << "dtcv: inconclusive: " << e.what() << " (explored " << e.states_explored()
              << ", frontier " << e.frontier_size() << ", depth " << e.depth() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dtcv: error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
