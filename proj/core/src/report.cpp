#include "dtcv/report.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

using json = nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json violation_json(const ViolationRecord& v, const Trace& trace) {
  json sig = json::object();
  for (const auto& [name, value] : v.signals) sig[name] = value;
  json j{{"contract", contract_name(v.contract)}, {"query", v.query}, {"row", v.row}, {"signals", sig}};
  if (v.row >= 0 && v.row < static_cast<std::int64_t>(trace.size()))
    j["time"] = trace.rows[static_cast<std::size_t>(v.row)][Signal::t];
  if (v.trace) j["diagnostic_steps"] = v.trace->steps.size();
  if (!v.diagnostic.empty()) j["diagnostic"] = v.diagnostic;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

bool Report::any_violation() const {
  for (const auto& c : contracts)
    if (!c.verdict.satisfied) return true;
  return false;
}

bool Report::any_inconclusive() const {
  for (const auto& c : contracts)
    if (c.verdict.inconclusive) return true;
  return false;
}

int exit_code(const Report& r) {
  if (r.any_violation()) return 1;
  if (r.any_inconclusive()) return 2;
  return 0;
}

json report_to_json(const Report& r) {
  json j;
  j["tool_version"] = r.tool_version;
  j["seed"] = r.seed;
  j["scenario_seed"] = r.scenario_seed ? json(*r.scenario_seed) : json(nullptr);
  j["plant"] = r.plant ? plant_params_to_json(*r.plant) : json(nullptr);
  j["contract_params"] = contract_params_to_json(r.params);
  j["horizon"] = r.horizon;
  j["twin"] = r.twin;
  j["trace_source"] = r.trace_source;
  j["trace_rows"] = r.trace.size();
  j["faults"] = json::array();
  for (const auto& f : r.faults) j["faults"].push_back(fault_to_json(f));

  json contracts = json::array();
  json all_violations = json::array();
  json timing_contracts = json::object();
  std::size_t satisfied = 0, violated = 0, inconclusive = 0;
  for (const auto& cr : r.contracts) {
    const ContractVerdict& v = cr.verdict;
    json c;
    c["id"] = contract_name(v.id);
    c["satisfied"] = v.satisfied;
    c["inconclusive"] = v.inconclusive;
    if (v.inconclusive) c["inconclusive_reason"] = v.inconclusive_reason;
    c["states_explored"] = v.states_explored;
    const auto first = v.first_violation_row();
    c["first_violation_row"] = first ? json(*first) : json(nullptr);
    json queries = json::array();
    for (const auto& q : v.outcomes) {
      json qj{{"query", q.text},
              {"kind", q.kind == QueryKind::Invariance ? "invariance" : "reachability"},
              {"satisfied", q.satisfied},
              {"states_explored", q.states_explored}};
      qj["evidence_row"] = q.row ? json(*q.row) : json(nullptr);
      if (q.kind == QueryKind::Reachability && q.satisfied && !q.rendered.empty())
        qj["witness"] = q.rendered;
      queries.push_back(std::move(qj));
    }
    c["queries"] = std::move(queries);
    json vs = json::array();
    for (const auto& rec : v.violations) {
      vs.push_back(violation_json(rec, r.trace));
      all_violations.push_back(violation_json(rec, r.trace));
    }
    c["violations"] = std::move(vs);
    contracts.push_back(std::move(c));
    timing_contracts[std::string(contract_name(v.id))] = cr.wall_ms;
    if (v.inconclusive) ++inconclusive;
    if (!v.satisfied) ++violated;
    else if (!v.inconclusive) ++satisfied;
  }
  j["contracts"] = std::move(contracts);
  j["violations"] = std::move(all_violations);
  j["summary"] = json{{"satisfied", satisfied},
                      {"violated", violated},
                      {"inconclusive", inconclusive},
                      {"exit_code", exit_code(r)}};
  j["timing"] = json{{"total_ms", r.total_ms}, {"contracts_ms", timing_contracts}};
  return j;
}

std::string violations_csv(const Report& r) {
  std::string out = "contract,query,row,time,signals\n";
  for (const auto& cr : r.contracts) {
    for (const auto& v : cr.verdict.violations) {
      std::string sig;
      for (const auto& [name, value] : v.signals) {
        if (!sig.empty()) sig += ';';
        sig += name + "=" + std::to_string(value);
      }
      std::string time;
      if (v.row >= 0 && v.row < static_cast<std::int64_t>(r.trace.size()))
        time = std::to_string(r.trace.rows[static_cast<std::size_t>(v.row)][Signal::t]);
      out += csv_field(std::string(contract_name(v.contract))) + "," + csv_field(v.query) + "," +
             std::to_string(v.row) + "," + time + "," + csv_field(sig) + "\n";
    }
  }
  return out;
}

std::vector<std::filesystem::path> emit_report(const Report& r, const std::filesystem::path& dir,
                                               const std::vector<std::string>& formats) {
  std::vector<std::filesystem::path> written;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  for (const auto& f : formats) {
    if (f == "json") {
      const auto path = dir / "report.json";
      write_file(path, report_to_json(r).dump(2) + "\n");
      written.push_back(path);
    } else if (f == "csv") {
      const auto path = dir / "violations.csv";
      write_file(path, violations_csv(r));
      written.push_back(path);
    } else if (f == "plotdata") {
      const auto pd = dir / "plotdata";
      std::filesystem::create_directories(pd, ec);
      if (ec) throw Error("cannot create " + pd.string() + ": " + ec.message());
      for (const Signal s : r.trace.columns) {
        if (s == Signal::t) continue;
        std::string text = "t," + std::string(signal_name(s)) + "\n";
        for (const auto& row : r.trace.rows)
          text += std::to_string(row[Signal::t]) + "," + std::to_string(row[s]) + "\n";
        const auto path = pd / (std::string(signal_name(s)) + ".csv");
        write_file(path, text);
        written.push_back(path);
      }
      std::string boil = "t,T_Boil\n";
      for (const auto& row : r.trace.rows)
        boil += std::to_string(row[Signal::t]) + "," + std::to_string(r.params.T_Boil) + "\n";
      write_file(pd / "T_Boil.csv", boil);
      written.push_back(pd / "T_Boil.csv");
      std::string marks = "contract,row,t\n";
      for (const auto& cr : r.contracts)
        for (const auto& v : cr.verdict.violations)
          if (v.row >= 0 && v.row < static_cast<std::int64_t>(r.trace.size()))
            marks += std::string(contract_name(v.contract)) + "," + std::to_string(v.row) + "," +
                     std::to_string(r.trace.rows[static_cast<std::size_t>(v.row)][Signal::t]) + "\n";
      write_file(pd / "violations.csv", marks);
      written.push_back(pd / "violations.csv");
    } else {
      throw Error("unknown report format '" + f + "'");
    }
  }
  if (!r.trace.rows.empty()) {
    const auto path = dir / "trace.csv";
    write_file(path, write_trace_csv(r.trace));
    written.push_back(path);
  }
  return written;
}

std::string summary_text(const Report& r) {
  std::ostringstream out;
  for (const auto& cr : r.contracts) {
    const auto& v = cr.verdict;
    out << contract_name(v.id) << ": ";
    if (v.inconclusive)
      out << "INCONCLUSIVE (" << v.inconclusive_reason << ")";
    else if (v.satisfied)
      out << "satisfied";
    else
      out << "VIOLATED at row " << v.first_violation_row().value_or(-1);
    out << "  [" << v.states_explored << " states]\n";
  }
  return out.str();
}

}  // namespace dtcv
