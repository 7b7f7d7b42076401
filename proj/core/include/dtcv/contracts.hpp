#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtcv/network.hpp"
#include "dtcv/plant.hpp"
#include "dtcv/stabilize.hpp"
#include "dtcv/trace.hpp"
#include "dtcv/verifier.hpp"

namespace dtcv {

enum class ContractId { MC1, MC2, MC3, FC1, FC2, FC3, FC4, FC5, FC6, FC7, FC8, FC9, FC10, IC1 };

std::string_view contract_name(ContractId id);
std::optional<ContractId> contract_from_name(std::string_view name);
const std::vector<ContractId>& all_contracts();

/// Trace columns a contract reads. Assumptions use truth columns, guarantees the twin's.
std::vector<Signal> contract_signals(ContractId id);

struct ContractParams {
  int m = 3;
  std::int64_t epsilon = 50;
  std::int64_t lag = 2;
  std::int64_t period = 1;
  std::int64_t T_Boil = 8000;
  std::int64_t Wo_min = 3000;
  std::int64_t W_min = 2000;
  std::int64_t ideal_lo = 13000;
  std::int64_t ideal_hi = 16000;
  std::int64_t wood_wait = 60;
  std::int64_t alarm_hold = 300;

  friend bool operator==(const ContractParams&, const ContractParams&) = default;
};

/// Throws ContractError when an invariant does not hold.
void validate(const ContractParams& p);

/// Thresholds taken from a plant scenario, everything else at its default.
ContractParams params_for(const PlantParams& plant);

/// Globals, tables and the UpdateV template that replays a trace.
struct UpdateDriver {
  TemplateSpec tmpl;
  std::vector<VarSpec> vars;
  std::vector<TableSpec> tables;
  std::int64_t rows = 0;  // number of firings before the terminal location
};

/// `monitors` receive `upd_<name>!` in order after every firing.
UpdateDriver build_update_driver(const Trace& trace, std::span<const Signal> signals,
                                 const ContractParams& params,
                                 std::span<const std::string> monitors = {});

struct ContractQuery {
  std::string invariance;   // A[] ...
  std::string reachability; // E<> ..., witnesses a violation
};

struct Contract {
  ContractId id{};
  UpdateDriver driver;
  std::vector<TemplateSpec> assumption_templates;
  std::vector<TemplateSpec> guarantee_templates;
  std::vector<ContractQuery> queries;
  std::vector<ConstSpec> constants;
  std::vector<VarSpec> globals;
  ContractParams params;

  NetworkSpec network_spec() const;
  Network network() const;
  /// Trace row shown by a state with driver index `idx`.
  std::int64_t row_of(std::int64_t idx) const { return idx + params.m - 1; }
};

/// Dispatches to the family builders below.
Contract build_contract(ContractId id, const Trace& trace, const ContractParams& params);
Contract build_monotonicity(ContractId id, const Trace& trace, const ContractParams& params);
Contract build_functional(ContractId id, const Trace& trace, const ContractParams& params);
Contract build_infrastructure(const Trace& trace, const ContractParams& params);

struct ViolationRecord {
  ContractId contract{};
  std::string query;
  std::int64_t row = 0;
  std::vector<std::pair<std::string, std::int64_t>> signals;
  std::optional<DiagnosticTrace> trace;
  std::string diagnostic;  // rendering of the final steps of `trace`
};

struct QueryOutcome {
  std::string text;
  QueryKind kind = QueryKind::Invariance;
  bool satisfied = false;
  std::size_t states_explored = 0;
  std::optional<std::int64_t> row;  // trace row of the last evidence state
  std::optional<DiagnosticTrace> evidence;
  std::string rendered;  // final steps of the evidence
};

struct ContractVerdict {
  ContractId id{};
  bool satisfied = true;
  bool inconclusive = false;
  std::string inconclusive_reason;
  std::vector<QueryOutcome> outcomes;
  std::vector<ViolationRecord> violations;  // one per failed invariance query, earliest first
  std::size_t states_explored = 0;

  std::optional<std::int64_t> first_violation_row() const;
};

/// Runs every invariance query and its reachability dual.
ContractVerdict verify_contract(const Contract& c, const Trace& trace,
                                const CheckLimits& limits = {}, bool with_duals = true);

/// Row-by-row evaluation on the stabilized series without any automaton.
/// Returns every violating (query, row) pair ordered by row.
std::vector<ViolationRecord> direct_oracle(ContractId id, const Trace& trace,
                                           const ContractParams& params);

}  // namespace dtcv
