#include "dtcv/contracts.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

constexpr std::array<std::string_view, 14> kContractNames{
    "MC1", "MC2", "MC3", "FC1", "FC2", "FC3", "FC4", "FC5", "FC6", "FC7", "FC8", "FC9", "FC10", "IC1"};

bool stabilized(Signal s) { return !is_boolean(s) && s != Signal::T_env && s != Signal::t; }

std::string str(std::int64_t v) { return std::to_string(v); }

struct Rule {
  std::string target;
  std::string guard;
  std::string update;
};

using Rules = std::function<std::vector<Rule>(const std::string& source)>;

TemplateSpec monitor(const std::string& name, const std::vector<std::string>& locations,
                     const Rules& rules) {
  TemplateSpec t;
  t.name = name;
  t.location("Init");
  for (const auto& l : locations) t.location(l);
  const std::string sync = "upd_" + name + "?";
  std::vector<std::string> sources{"Init"};
  sources.insert(sources.end(), locations.begin(), locations.end());
  for (const auto& src : sources)
    for (const Rule& r : rules(src)) t.edge(src, r.target, r.guard, sync, r.update);
  return t;
}

/// Two-way classification that ignores the source location.
TemplateSpec binary_monitor(const std::string& name, const std::string& yes, const std::string& no,
                            const std::string& cond) {
  return monitor(name, {yes, no}, [&](const std::string&) {
    return std::vector<Rule>{{yes, cond, ""}, {no, "!(" + cond + ")", ""}};
  });
}

/// Latch location entered once `cond` holds and never left.
TemplateSpec latch_monitor(const std::string& name, const std::string& reached,
                           const std::string& not_reached, const std::string& cond,
                           const std::string& flag) {
  return monitor(name, {not_reached, reached}, [&](const std::string& src) {
    if (src == reached) return std::vector<Rule>{{reached, "", ""}};
    return std::vector<Rule>{{reached, cond, flag + " = 1"}, {not_reached, "!(" + cond + ")", ""}};
  });
}

std::string inc(const std::string& x) { return x + " > " + x + "1 + EPS"; }
std::string dec(const std::string& x) { return x + " < " + x + "1 - EPS"; }
std::string flat(const std::string& x) {
  return x + " >= " + x + "1 - EPS && " + x + " <= " + x + "1 + EPS";
}

/// Assumption side of a monotonicity contract: publishes its class in `trend`.
TemplateSpec trend_assumption(const std::string& name, const std::string& x,
                              const std::string& gate, const std::string& gated_loc) {
  std::vector<std::string> locs{"Increasing", "Decreasing", "Stable"};
  if (!gated_loc.empty()) locs.push_back(gated_loc);
  return monitor(name, locs, [&](const std::string&) {
    std::vector<Rule> r{{"Init", "idx < 2", "trend = 0"}};
    std::string on = "idx >= 2";
    if (!gate.empty()) {
      r.push_back({gated_loc, "idx >= 2 && !(" + gate + ")", "trend = 0"});
      on += " && " + gate;
    }
    r.push_back({"Increasing", on + " && " + inc(x), "trend = 1"});
    r.push_back({"Decreasing", on + " && " + dec(x), "trend = 2"});
    r.push_back({"Stable", on + " && " + flat(x), "trend = 3"});
    return r;
  });
}

/// Guarantee side with a counter of consecutive mismatching steps.
TemplateSpec trend_guarantee(const std::string& name, const std::string& y,
                             const std::string& mismatch_inc, const std::string& mismatch_dec,
                             const std::string& mismatch_flat, std::int64_t lag) {
  auto count = [](const std::string& cond) {
    if (cond.empty()) return std::string("mismatch = 0");
    return "mismatch = (" + cond + ") ? (mismatch < LAG + 1 ? mismatch + 1 : LAG + 1) : 0";
  };
  TemplateSpec t = monitor(name, {"Increasing", "Decreasing", "Stable"}, [&](const std::string&) {
    return std::vector<Rule>{{"Init", "idx < 2", "mismatch = 0"},
                             {"Increasing", "idx >= 2 && " + inc(y), count(mismatch_inc)},
                             {"Decreasing", "idx >= 2 && " + dec(y), count(mismatch_dec)},
                             {"Stable", "idx >= 2 && " + flat(y), count(mismatch_flat)}};
  });
  t.var("mismatch", 0, lag + 1, 0);
  return t;
}

ContractQuery implication(const std::string& premise, const std::string& conclusion) {
  return ContractQuery{"A[] " + premise + " imply " + conclusion,
                       "E<> " + premise + " && !(" + conclusion + ")"};
}

void require(ContractId id, const Trace& trace) {
  for (const Signal s : contract_signals(id))
    if (!trace.has(s))
      throw ContractError(std::string(contract_name(id)) + " needs signal '" +
                          std::string(signal_name(s)) + "', which the trace does not have");
}

Contract skeleton(ContractId id, const Trace& trace, const ContractParams& params,
                  const std::vector<std::string>& monitors) {
  validate(params);
  require(id, trace);
  Contract c;
  c.id = id;
  c.params = params;
  const auto sigs = contract_signals(id);
  c.driver = build_update_driver(trace, sigs, params, monitors);
  c.constants = {{"EPS", params.epsilon},     {"LAG", params.lag},
                 {"TB", params.T_Boil},       {"WOMIN", params.Wo_min},
                 {"WMIN", params.W_min},      {"LO", params.ideal_lo},
                 {"HI", params.ideal_hi},     {"WAIT", params.wood_wait},
                 {"HOLD", params.alarm_hold}};
  return c;
}

std::vector<std::string> names(std::initializer_list<const char*> list) {
  return std::vector<std::string>(list.begin(), list.end());
}

}  // namespace

std::string_view contract_name(ContractId id) { return kContractNames[static_cast<std::size_t>(id)]; }

std::optional<ContractId> contract_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kContractNames.size(); ++k)
    if (kContractNames[k] == name) return static_cast<ContractId>(k);
  return std::nullopt;
}

const std::vector<ContractId>& all_contracts() {
  static const std::vector<ContractId> all = [] {
    std::vector<ContractId> v;
    for (std::size_t k = 0; k < kContractNames.size(); ++k) v.push_back(static_cast<ContractId>(k));
    return v;
  }();
  return all;
}

std::vector<Signal> contract_signals(ContractId id) {
  using S = Signal;
  switch (id) {
    case ContractId::MC1: return {S::B_T, S::pred_Bo_T};
    case ContractId::MC2: return {S::Bo_T, S::pred_W_M};
    case ContractId::MC3: return {S::Wo_M, S::burner_on, S::pred_B_T};
    case ContractId::FC1: return {S::Wo_M, S::pred_Wo_R};
    case ContractId::FC2: return {S::Wo_R, S::Wo_D, S::Wo_M, S::pred_W_A};
    case ContractId::FC3: return {S::Wo_M, S::pred_Wo_R, S::pred_Wo_D};
    case ContractId::FC4: return {S::B_T, S::critical_alarm};
    case ContractId::FC5: return {S::W_A, S::burner_on};
    case ContractId::FC6: return {S::W_M, S::pred_Wo_M};
    case ContractId::FC7: return {S::Bo_T, S::W_M, S::pred_Bo_T};
    case ContractId::FC8: return {S::W_M, S::pred_W_A};
    case ContractId::FC9: return {S::W_M, S::pred_W_A};
    case ContractId::FC10: return {S::burner_on, S::T_env, S::pred_B_T, S::pred_Bo_T};
    case ContractId::IC1: return {S::critical_alarm, S::burner_on};
  }
  return {};
}

void validate(const ContractParams& p) {
  if (p.m < 1) throw ContractError("window m must be at least 1");
  if (p.epsilon < 0) throw ContractError("epsilon must be non-negative");
  if (p.lag < 0) throw ContractError("lag must be non-negative");
  if (p.period < 1) throw ContractError("period must be positive");
  if (p.ideal_lo >= p.ideal_hi) throw ContractError("ideal range is empty");
  if (p.wood_wait < 0 || p.alarm_hold < 0) throw ContractError("timers must be non-negative");
}

ContractParams params_for(const PlantParams& plant) {
  ContractParams p;
  p.m = plant.window;
  p.period = plant.period;
  p.T_Boil = plant.T_Boil;
  p.Wo_min = plant.Wo_min;
  p.W_min = plant.W_min;
  p.ideal_lo = plant.ideal_lo;
  p.ideal_hi = plant.ideal_hi;
  p.wood_wait = plant.wood_wait;
  p.alarm_hold = plant.alarm_hold;
  return p;
}

UpdateDriver build_update_driver(const Trace& trace, std::span<const Signal> signals,
                                 const ContractParams& params,
                                 std::span<const std::string> monitors) {
  validate(params);
  if (trace.rows.empty()) throw ContractError("empty trace");
  if (params.period != trace.period)
    throw ContractError("contract period " + str(params.period) + " differs from trace period " +
                        str(trace.period));
  const auto len = static_cast<std::int64_t>(trace.size());
  if (params.m >= len)
    throw ContractError("window exceeds series: " + str(len) + " rows with m = " + str(params.m));

  UpdateDriver d;
  d.rows = len - params.m;
  d.vars.push_back(VarSpec{"idx", 0, d.rows, 0, false});

  std::string update;
  std::string shadows;
  for (const Signal s : signals) {
    if (!trace.has(s))
      throw ContractError("unknown signal '" + std::string(signal_name(s)) + "' for this trace");
    const std::string name(signal_name(s));
    std::vector<std::int64_t> values;
    values.reserve(static_cast<std::size_t>(d.rows));
    if (stabilized(s)) {
      const auto hat = stabilize(trace.series(s), params.m);
      values = hat.values;
    } else {
      for (std::int64_t r = params.m; r < len; ++r)
        values.push_back(trace.rows[static_cast<std::size_t>(r)][s]);
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const std::int64_t vlo = std::min<std::int64_t>(0, *lo);
    const std::int64_t vhi = std::max<std::int64_t>(0, *hi);
    const bool boolean = is_boolean(s);
    d.vars.push_back(VarSpec{name, boolean ? 0 : vlo, boolean ? 1 : vhi, 0, boolean});
    d.vars.push_back(VarSpec{name + "1", boolean ? 0 : vlo, boolean ? 1 : vhi, 0, boolean});
    d.tables.push_back(TableSpec{"tbl_" + name, std::move(values)});
    shadows += name + "1 = " + name + ", ";
    update += name + " = tbl_" + name + "[idx], ";
  }
  update = shadows + update + "idx = idx + 1, c = 0";

  TemplateSpec& t = d.tmpl;
  t.name = "UpdateV";
  t.location("Run", "c <= " + str(params.period));
  t.location("Done");
  for (std::size_t k = 0; k < monitors.size(); ++k) t.committed("S" + str(static_cast<std::int64_t>(k)));
  const std::string fire = "c == " + str(params.period) + " && idx < " + str(d.rows);
  t.edge("Run", monitors.empty() ? "Run" : "S0", fire, "", update);
  for (std::size_t k = 0; k < monitors.size(); ++k) {
    const std::string next = k + 1 < monitors.size() ? "S" + str(static_cast<std::int64_t>(k + 1)) : "Run";
    t.edge("S" + str(static_cast<std::int64_t>(k)), next, "", "upd_" + monitors[k] + "!", "");
  }
  t.edge("Run", "Done", "idx == " + str(d.rows));
  return d;
}

NetworkSpec Contract::network_spec() const {
  NetworkSpec n;
  n.vars = driver.vars;
  n.vars.insert(n.vars.end(), globals.begin(), globals.end());
  n.clocks.push_back("c");
  n.tables = driver.tables;
  n.constants = constants;
  n.templates.push_back(driver.tmpl);
  for (const auto& t : assumption_templates) {
    n.channels.push_back("upd_" + t.name);
    n.templates.push_back(t);
  }
  for (const auto& t : guarantee_templates) {
    n.channels.push_back("upd_" + t.name);
    n.templates.push_back(t);
  }
  n.trace = TraceBinding{"idx", params.m - 1};
  return n;
}

Network Contract::network() const { return build_network(network_spec()); }

Contract build_monotonicity(ContractId id, const Trace& trace, const ContractParams& params) {
  const std::string n(contract_name(id));
  Contract c = skeleton(id, trace, params, {"A_" + n, "G_" + n});
  c.globals.push_back(VarSpec{"trend", 0, 3, 0, false});
  const std::string a = "A_" + n;
  const std::string g = "G_" + n;
  switch (id) {
    case ContractId::MC1:
      c.assumption_templates.push_back(trend_assumption(a, "B_T", "B_T < TB", "Boiling"));
      c.guarantee_templates.push_back(
          trend_guarantee(g, "pred_Bo_T", "trend == 2", "trend == 1", "trend == 1 || trend == 2", params.lag));
      c.queries.push_back(implication(a + ".Increasing", "(" + g + ".Increasing || " + g + ".mismatch <= LAG)"));
      c.queries.push_back(implication(a + ".Decreasing", "(" + g + ".Decreasing || " + g + ".mismatch <= LAG)"));
      break;
    case ContractId::MC2:
      c.assumption_templates.push_back(monitor(a, {"AboveBoil", "AtOrBelowBoil"}, [](const std::string&) {
        return std::vector<Rule>{{"Init", "idx < 2", "trend = 0"},
                                 {"AboveBoil", "idx >= 2 && Bo_T > TB", "trend = 1"},
                                 {"AtOrBelowBoil", "idx >= 2 && Bo_T <= TB", "trend = 2"}};
      }));
      c.guarantee_templates.push_back(
          trend_guarantee(g, "pred_W_M", "trend == 1 || trend == 2", "trend == 2", "", params.lag));
      c.queries.push_back(implication(a + ".AboveBoil", "(!" + g + ".Increasing || " + g + ".mismatch <= LAG)"));
      c.queries.push_back(implication(a + ".AtOrBelowBoil", "(" + g + ".Stable || " + g + ".mismatch <= LAG)"));
      break;
    case ContractId::MC3:
      c.assumption_templates.push_back(trend_assumption(a, "Wo_M", "burner_on == 1", "BurnerOff"));
      c.guarantee_templates.push_back(trend_guarantee(g, "pred_B_T", "trend == 2", "trend == 1", "", params.lag));
      c.queries.push_back(implication(a + ".Increasing", "(!" + g + ".Decreasing || " + g + ".mismatch <= LAG)"));
      c.queries.push_back(implication(a + ".Decreasing", "(!" + g + ".Increasing || " + g + ".mismatch <= LAG)"));
      break;
    default:
      throw ContractError(n + " is not a monotonicity contract");
  }
  return c;
}

Contract build_functional(ContractId id, const Trace& trace, const ContractParams& params) {
  const std::string n(contract_name(id));
  auto A = [&](const char* prefix) { return std::string(prefix) + "_" + n; };
  Contract c;
  switch (id) {
    case ContractId::FC1:
      c = skeleton(id, trace, params, {A("A"), A("G")});
      c.assumption_templates.push_back(binary_monitor(A("A"), "BelowWo_min", "AtOrAboveWo_min", "Wo_M < WOMIN"));
      c.guarantee_templates.push_back(binary_monitor(A("G"), "Requesting", "NotRequesting", "pred_Wo_R == 1"));
      c.queries.push_back(implication(A("A") + ".BelowWo_min", A("G") + ".Requesting"));
      break;
    case ContractId::FC2: {
      c = skeleton(id, trace, params, {A("A1"), A("A2"), A("G")});
      const std::string waiting = "Wo_R == 1 && Wo_D == 0";
      const std::string idle = "Wo_D == 1 || Wo_R == 0";
      TemplateSpec a1 = monitor(A("A1"), {"Idle", "Waiting", "Starved"}, [&](const std::string& src) {
        if (src == "Waiting")
          return std::vector<Rule>{{"Idle", idle, ""},
                                   {"Waiting", waiting + " && w < WAIT", ""},
                                   {"Starved", waiting + " && w >= WAIT", ""}};
        if (src == "Starved") return std::vector<Rule>{{"Idle", idle, ""}, {"Starved", waiting, ""}};
        return std::vector<Rule>{{"Idle", idle, ""}, {"Waiting", waiting, "w = 0"}};
      });
      a1.clock("w");
      c.assumption_templates.push_back(std::move(a1));
      c.assumption_templates.push_back(binary_monitor(A("A2"), "BelowWo_min", "AtOrAboveWo_min", "Wo_M < WOMIN"));
      c.guarantee_templates.push_back(binary_monitor(A("G"), "Alarm", "NoAlarm", "pred_W_A == 1"));
      c.queries.push_back(implication("(" + A("A1") + ".Starved && " + A("A2") + ".BelowWo_min)", A("G") + ".Alarm"));
      break;
    }
    case ContractId::FC3:
      c = skeleton(id, trace, params, {A("A"), A("G1"), A("G2")});
      c.assumption_templates.push_back(binary_monitor(A("A"), "AboveWo_min", "AtOrBelowWo_min", "Wo_M > WOMIN"));
      c.guarantee_templates.push_back(binary_monitor(A("G1"), "Request", "NoRequest", "pred_Wo_R == 1"));
      c.guarantee_templates.push_back(binary_monitor(A("G2"), "Delivery", "NoDelivery", "pred_Wo_D == 1"));
      c.queries.push_back(implication(A("A") + ".AboveWo_min", "not (" + A("G1") + ".Request || " + A("G2") + ".Delivery)"));
      break;
    case ContractId::FC4:
      c = skeleton(id, trace, params, {A("A1"), A("A2"), A("G")});
      c.globals.push_back(VarSpec{"ideal_reached", 0, 1, 0, true});
      c.assumption_templates.push_back(latch_monitor(A("A1"), "ReachedIdealRange", "NotReached",
                                                     "B_T >= LO && B_T <= HI", "ideal_reached"));
      c.assumption_templates.push_back(binary_monitor(A("A2"), "OutOfRange", "InRange", "B_T < LO || B_T > HI"));
      c.guarantee_templates.push_back(binary_monitor(A("G"), "Alarm", "NoAlarm", "critical_alarm == 1"));
      c.queries.push_back(implication("(" + A("A1") + ".ReachedIdealRange && " + A("A2") + ".OutOfRange)", A("G") + ".Alarm"));
      break;
    case ContractId::FC5:
      c = skeleton(id, trace, params, {A("A"), A("G")});
      c.assumption_templates.push_back(binary_monitor(A("A"), "TurnOff", "NoTurnOff", "W_A == 1"));
      c.guarantee_templates.push_back(binary_monitor(A("G"), "BurnerOff", "BurnerOn", "burner_on == 0"));
      c.queries.push_back(implication(A("A") + ".TurnOff", A("G") + ".BurnerOff"));
      break;
    case ContractId::FC6:
      c = skeleton(id, trace, params, {A("A"), A("G")});
      c.assumption_templates.push_back(binary_monitor(A("A"), "AboveW_min", "AtOrBelowW_min", "W_M > WMIN"));
      c.guarantee_templates.push_back(binary_monitor(A("G"), "WoodPositive", "WoodEmpty", "pred_Wo_M > 0"));
      c.queries.push_back(implication(A("A") + ".AboveW_min", A("G") + ".WoodPositive"));
      break;
    case ContractId::FC7:
      c = skeleton(id, trace, params, {A("A1"), A("A2"), A("G")});
      c.globals.push_back(VarSpec{"boiling_reached", 0, 1, 0, true});
      c.assumption_templates.push_back(latch_monitor(A("A1"), "ReachedBoilingState", "NotReached",
                                                     "Bo_T >= TB", "boiling_reached"));
      c.assumption_templates.push_back(binary_monitor(A("A2"), "AboveW_min", "AtOrBelowW_min", "W_M > WMIN"));
      c.guarantee_templates.push_back(binary_monitor(A("G"), "AroundBoil", "AwayFromBoil",
                                                     "pred_Bo_T >= TB - EPS && pred_Bo_T <= TB + EPS"));
      c.queries.push_back(implication("(" + A("A1") + ".ReachedBoilingState && " + A("A2") + ".AboveW_min)", A("G") + ".AroundBoil"));
      break;
    case ContractId::FC8:
      c = skeleton(id, trace, params, {A("A"), A("G1"), A("G2")});
      c.assumption_templates.push_back(binary_monitor(A("A"), "BelowW_min", "AtOrAboveW_min", "W_M < WMIN"));
      c.guarantee_templates.push_back(binary_monitor(A("G1"), "Alarm", "NotAlarm", "pred_W_A == 1"));
      c.guarantee_templates.push_back(binary_monitor(A("G2"), "B_off_true", "B_off_false", "pred_W_A == 1"));
      c.queries.push_back(implication(A("A") + ".BelowW_min", "(" + A("G1") + ".Alarm && " + A("G2") + ".B_off_true)"));
      break;
    case ContractId::FC9:
      c = skeleton(id, trace, params, {A("A"), A("G1"), A("G2")});
      c.assumption_templates.push_back(binary_monitor(A("A"), "AboveW_min", "BelowW_min", "W_M > WMIN"));
      c.guarantee_templates.push_back(binary_monitor(A("G1"), "Alarm", "NotAlarm", "pred_W_A == 1"));
      c.guarantee_templates.push_back(binary_monitor(A("G2"), "B_off_true", "B_off_false", "pred_W_A == 1"));
      c.queries.push_back(implication(A("A") + ".AboveW_min", "not (" + A("G1") + ".Alarm || " + A("G2") + ".B_off_true)"));
      break;
    case ContractId::FC10:
      c = skeleton(id, trace, params, {A("A"), A("G1"), A("G2")});
      c.assumption_templates.push_back(binary_monitor(A("A"), "BurnerOff", "BurnerOn", "burner_on == 0"));
      c.guarantee_templates.push_back(binary_monitor(A("G1"), "AboveEnv", "BelowEnv", "pred_B_T >= T_env"));
      c.guarantee_templates.push_back(binary_monitor(A("G2"), "AboveEnv", "BelowEnv", "pred_Bo_T >= T_env"));
      c.queries.push_back(implication(A("A") + ".BurnerOff", "(" + A("G1") + ".AboveEnv && " + A("G2") + ".AboveEnv)"));
      break;
    default:
      throw ContractError(n + " is not a functional contract");
  }
  return c;
}

Contract build_infrastructure(const Trace& trace, const ContractParams& params) {
  Contract c = skeleton(ContractId::IC1, trace, params, names({"A_IC1", "G_IC1"}));
  const std::string on = "critical_alarm == 1";
  const std::string off = "critical_alarm == 0";
  TemplateSpec a = monitor("A_IC1", {"NoAlarm", "Alarm", "Critical"}, [&](const std::string& src) {
    if (src == "Alarm")
      return std::vector<Rule>{{"NoAlarm", off, ""},
                               {"Alarm", on + " && h < HOLD", ""},
                               {"Critical", on + " && h >= HOLD", ""}};
    if (src == "Critical") return std::vector<Rule>{{"NoAlarm", off, ""}, {"Critical", on, ""}};
    return std::vector<Rule>{{"NoAlarm", off, ""}, {"Alarm", on, "h = 0"}};
  });
  a.clock("h");
  c.assumption_templates.push_back(std::move(a));
  c.guarantee_templates.push_back(binary_monitor("G_IC1", "BurnerOff", "BurnerOn", "burner_on == 0"));
  c.queries.push_back(implication("A_IC1.Critical", "G_IC1.BurnerOff"));
  return c;
}

Contract build_contract(ContractId id, const Trace& trace, const ContractParams& params) {
  switch (id) {
    case ContractId::MC1:
    case ContractId::MC2:
    case ContractId::MC3:
      return build_monotonicity(id, trace, params);
    case ContractId::IC1:
      return build_infrastructure(trace, params);
    default:
      return build_functional(id, trace, params);
  }
}

std::optional<std::int64_t> ContractVerdict::first_violation_row() const {
  std::optional<std::int64_t> best;
  for (const auto& v : violations)
    if (!best || v.row < *best) best = v.row;
  return best;
}

namespace {

constexpr std::size_t kRenderedSteps = 6;

std::string render_tail(const Network& net, const DiagnosticTrace& t) {
  if (t.steps.size() <= kRenderedSteps) return t.render(net);
  DiagnosticTrace tail;
  tail.steps.assign(t.steps.end() - static_cast<std::ptrdiff_t>(kRenderedSteps), t.steps.end());
  return "(" + std::to_string(t.steps.size() - kRenderedSteps) + " earlier steps omitted)\n" +
         tail.render(net);
}

std::vector<std::pair<std::string, std::int64_t>> signal_values(ContractId id, const Trace& trace,
                                                                const ContractParams& p,
                                                                std::int64_t row) {
  std::vector<std::pair<std::string, std::int64_t>> out;
  if (row < 0 || row >= static_cast<std::int64_t>(trace.size())) return out;
  for (const Signal s : contract_signals(id)) {
    std::int64_t v = trace.rows[static_cast<std::size_t>(row)][s];
    if (stabilized(s) && row >= p.m) {
      std::int64_t sum = 0;
      for (std::int64_t i = 1; i <= p.m; ++i) sum += trace.rows[static_cast<std::size_t>(row - i)][s];
      v = rounded_mean(sum, p.m);
    }
    out.emplace_back(std::string(signal_name(s)), v);
  }
  return out;
}

}  // namespace

ContractVerdict verify_contract(const Contract& c, const Trace& trace, const CheckLimits& limits,
                                bool with_duals) {
  ContractVerdict verdict;
  verdict.id = c.id;
  const Network net = c.network();
  auto run_one = [&](const std::string& text) {
    QueryOutcome o;
    o.text = text;
    const Query q = parse_query(text, net);
    o.kind = q.kind;
    Verdict v = check(net, q, limits);
    o.satisfied = v.satisfied;
    o.states_explored = v.states_explored;
    verdict.states_explored += v.states_explored;
    if (v.evidence && !v.evidence->steps.empty()) {
      o.row = v.evidence->steps.back().trace_row;
      o.rendered = render_tail(net, *v.evidence);
      o.evidence = std::move(v.evidence);
    }
    return o;
  };
  try {
    for (const auto& cq : c.queries) {
      QueryOutcome inv = run_one(cq.invariance);
      if (!inv.satisfied) {
        verdict.satisfied = false;
        ViolationRecord rec;
        rec.contract = c.id;
        rec.query = cq.invariance;
        rec.row = inv.row.value_or(-1);
        rec.signals = signal_values(c.id, trace, c.params, rec.row);
        rec.trace = inv.evidence;
        rec.diagnostic = inv.rendered;
        verdict.violations.push_back(std::move(rec));
      }
      verdict.outcomes.push_back(std::move(inv));
      if (with_duals) verdict.outcomes.push_back(run_one(cq.reachability));
    }
  } catch (const InconclusiveError& e) {
    verdict.inconclusive = true;
    verdict.inconclusive_reason = e.what();
    verdict.states_explored += e.states_explored();
  }
  std::stable_sort(verdict.violations.begin(), verdict.violations.end(),
                   [](const ViolationRecord& a, const ViolationRecord& b) { return a.row < b.row; });
  return verdict;
}

}  // namespace dtcv
