#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dtcv/config.hpp"
#include "dtcv/error.hpp"
#include "dtcv/network_text.hpp"
#include "dtcv/pipeline.hpp"
#include "dtcv/report.hpp"
#include "networks.hpp"

namespace dtcv {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dtcv_pipeline_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json without_timing(json j) {
  j.erase("timing");
  return j;
}

RunConfig stuck_config() {
  RunConfig c;
  c.seed = 1;
  c.params = random_scenario(1);
  c.horizon = 500;
  c.faults.push_back(parse_fault("stuck_output:pred_Bo_T:430:470"));
  c.duals = false;
  return c;
}

TEST(Pipeline, ReportIsDeterministicApartFromTiming) {
  RunConfig c;
  c.seed = 17;
  c.horizon = 400;
  c.faults.push_back(parse_fault("additive_noise:pred_Wo_R:100:140:0.9"));
  const json a = report_to_json(run_pipeline(c));
  const json b = report_to_json(run_pipeline(c));
  EXPECT_EQ(without_timing(a), without_timing(b));
  EXPECT_TRUE(a.contains("timing"));
  EXPECT_EQ(a["scenario_seed"], c.effective_scenario_seed());
}

TEST(Pipeline, StuckBoilerFaultViolatesOnlyMC1) {
  const Report r = run_pipeline(stuck_config());
  ASSERT_EQ(r.contracts.size(), all_contracts().size());
  for (const auto& cr : r.contracts) {
    if (cr.verdict.id == ContractId::MC1) {
      EXPECT_FALSE(cr.verdict.satisfied);
      const auto row = cr.verdict.first_violation_row();
      ASSERT_TRUE(row);
      EXPECT_GE(*row, 430);
      EXPECT_LE(*row, 470);
    } else {
      EXPECT_TRUE(cr.verdict.satisfied) << contract_name(cr.verdict.id);
    }
  }
  EXPECT_EQ(exit_code(r), 1);
}

TEST(Pipeline, ExternalCsvGivesSameVerdicts) {
  const RunConfig c = stuck_config();
  const Report in_process = run_pipeline(c);
  const fs::path dir = scratch("external");
  std::ofstream(dir / "trace.csv") << write_trace_csv(in_process.trace);

  RunConfig ext = c;
  ext.twin = TwinSource::ExternalCsv;
  ext.twin_path = dir / "trace.csv";
  ext.faults.clear();
  const Report out = run_pipeline(ext);
  ASSERT_EQ(out.contracts.size(), in_process.contracts.size());
  for (std::size_t k = 0; k < out.contracts.size(); ++k) {
    EXPECT_EQ(out.contracts[k].verdict.satisfied, in_process.contracts[k].verdict.satisfied);
    EXPECT_EQ(out.contracts[k].verdict.first_violation_row(), in_process.contracts[k].verdict.first_violation_row());
  }
  EXPECT_EQ(out.trace_source, (dir / "trace.csv").string());
  fs::remove_all(dir);
}

TEST(Pipeline, CleanRunSatisfiesEverything) {
  RunConfig c;
  c.seed = 3;
  c.horizon = 300;
  const Report r = run_pipeline(c);
  EXPECT_EQ(exit_code(r), 0);
  const json j = report_to_json(r);
  EXPECT_TRUE(j["violations"].is_array());
  EXPECT_TRUE(j["violations"].empty());
  EXPECT_EQ(j["summary"]["violated"], 0);
  EXPECT_EQ(json::parse(j.dump()), j);
  EXPECT_EQ(violations_csv(r), "contract,query,row,time,signals\n");
}

TEST(Pipeline, EmittedFiles) {
  const Report r = run_pipeline(stuck_config());
  const fs::path dir = scratch("emit");
  emit_report(r, dir, {"json", "csv", "plotdata"});
  const json j = json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(j["summary"]["exit_code"], 1);
  ASSERT_FALSE(j["violations"].empty());
  EXPECT_EQ(j["violations"][0]["contract"], "MC1");

  std::istringstream csv(slurp(dir / "violations.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "contract,query,row,time,signals");
  std::size_t lines = 0;
  while (std::getline(csv, line)) {
    ++lines;
    std::size_t fields = 1;
    bool quoted = false;
    for (const char ch : line) {
      if (ch == '"') quoted = !quoted;
      if (ch == ',' && !quoted) ++fields;
    }
    EXPECT_EQ(fields, 5u) << line;
  }
  EXPECT_EQ(lines, j["violations"].size());

  for (const char* f : {"B_T.csv", "Bo_T.csv", "T_Boil.csv", "violations.csv"})
    EXPECT_TRUE(fs::exists(dir / "plotdata" / f)) << f;
  EXPECT_EQ(ingest_trace(dir / "trace.csv"), r.trace);
  fs::remove_all(dir);
}

TEST(Pipeline, StageErrorsNameTheStage) {
  RunConfig c;
  c.twin = TwinSource::ExternalCsv;
  c.twin_path = "/nonexistent/trace.csv";
  try {
    run_pipeline(c);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
  }
  RunConfig w;
  w.twin = TwinSource::Weights;
  w.twin_path = "/nonexistent/weights.json";
  try {
    run_pipeline(w);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "twin");
  }
  RunConfig m;
  m.horizon = 50;
  m.overrides.m = 0;
  try {
    run_pipeline(m);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "contracts");
  }
}

TEST(Config, JsonRoundTrip) {
  RunConfig c = stuck_config();
  c.contracts = {ContractId::MC1, ContractId::FC9};
  c.overrides.lag = 2;
  c.formats = {"json", "csv"};
  const RunConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_THROW(config_from_json(json{{"sede", 1}}), Error);
  EXPECT_THROW(config_from_json(json{{"horizon", "long"}}), Error);
}

#ifdef DTCV_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(DTCV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  const std::string out = " --output-dir " + (dir / "out").string();
  EXPECT_EQ(run_cli("pipeline --seed 3 --horizon 300 --no-duals" + out), 0);
  EXPECT_EQ(run_cli("pipeline --seed 17 --horizon 400 --contracts FC3 --fault additive_noise:pred_Wo_R:100:140:0.9" + out), 1);
  EXPECT_EQ(run_cli("report --input " + (dir / "out" / "report.json").string()), 1);
  EXPECT_EQ(run_cli("pipeline --seed 3 --horizon 300 --max-states 5" + out), 2);
  EXPECT_EQ(run_cli("pipeline --twin csv --twin-path /nonexistent.csv" + out), 3);
  EXPECT_EQ(run_cli("pipeline --contracts XYZ" + out), 3);
  EXPECT_EQ(run_cli("frobnicate"), 3);
  EXPECT_EQ(run_cli("--help"), 0);

  save_network_file(testing::lamp_spec(false), dir / "fast.net");
  save_network_file(testing::lamp_spec(true), dir / "slow.net");
  EXPECT_EQ(run_cli("check --model " + (dir / "fast.net").string() + " --query 'E<> Lamp.bright'"), 0);
  EXPECT_EQ(run_cli("check --model " + (dir / "slow.net").string() + " --query 'E<> Lamp.bright'"), 1);
  EXPECT_EQ(run_cli("check --model " + (dir / "slow.net").string() + " --query 'A[] !Lamp.bright'"), 0);
  EXPECT_EQ(run_cli("check --model " + (dir / "fast.net").string() + " --query 'A[] !Lamp.bright' --oracle --horizon 20"), 1);
  EXPECT_EQ(run_cli("check --model " + (dir / "fast.net").string() + " --query 'E<> Nope.x'"), 3);
  fs::remove_all(dir);
}

TEST(Cli, SimulateThenVerify) {
  const fs::path dir = scratch("cli_verify");
  ASSERT_EQ(run_cli("rollout --seed 5 --horizon 300 -o " + (dir / "t.csv").string()), 0);
  EXPECT_EQ(run_cli("verify --trace " + (dir / "t.csv").string() + " --seed 5 --output-dir " + (dir / "o").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "report.json"));
  ASSERT_EQ(run_cli("simulate --seed 5 --horizon 300 -o " + (dir / "s.csv").string()), 0);
  EXPECT_EQ(run_cli("verify --trace " + (dir / "s.csv").string() + " --output-dir " + (dir / "o").string()), 3);
  fs::remove_all(dir);
}

#endif

}  // namespace
}  // namespace dtcv
