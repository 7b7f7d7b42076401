#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dtcv/expr.hpp"
#include "dtcv/zone.hpp"

namespace dtcv {

// ---------------------------------------------------------------------------
// Builder-side description. Everything is kept as text so that a spec can be
// written back out verbatim; build_network() parses, binds and validates it.

struct VarSpec {
  std::string name;
  std::int64_t lo = 0;
  std::int64_t hi = 1;
  std::int64_t init = 0;
  bool boolean = false;
};

struct ConstSpec {
  std::string name;
  std::int64_t value = 0;
};

struct TableSpec {
  std::string name;
  std::vector<std::int64_t> values;
};

struct LocationSpec {
  std::string name;
  std::string invariant;
  bool committed = false;
};

struct EdgeSpec {
  std::string source;
  std::string target;
  std::string guard;
  std::string sync;    // "ch!" / "ch?" or empty
  std::string update;  // "a = 1, x = 0"
};

struct TemplateSpec {
  std::string name;
  std::vector<VarSpec> vars;
  std::vector<std::string> clocks;
  std::vector<LocationSpec> locations;
  std::string initial;  // first location when empty
  std::vector<EdgeSpec> edges;

  TemplateSpec& location(std::string name, std::string invariant = {});
  TemplateSpec& committed(std::string name);
  TemplateSpec& edge(std::string source, std::string target, std::string guard = {},
                     std::string sync = {}, std::string update = {});
  TemplateSpec& var(std::string name, std::int64_t lo, std::int64_t hi, std::int64_t init = 0);
  TemplateSpec& boolean(std::string name, bool init = false);
  TemplateSpec& clock(std::string name);
};

/// Row index variable of a trace-driven network: trace row = value + offset.
struct TraceBinding {
  std::string row_var;
  std::int64_t offset = 0;
};

struct NetworkSpec {
  std::vector<VarSpec> vars;
  std::vector<std::string> clocks;
  std::vector<std::string> channels;
  std::vector<ConstSpec> constants;
  std::vector<TableSpec> tables;
  std::vector<TemplateSpec> templates;
  std::optional<TraceBinding> trace;

  NetworkSpec& var(std::string name, std::int64_t lo, std::int64_t hi, std::int64_t init = 0);
  NetworkSpec& boolean(std::string name, bool init = false);
  NetworkSpec& clock(std::string name);
  NetworkSpec& channel(std::string name);
  NetworkSpec& constant(std::string name, std::int64_t value);
  NetworkSpec& table(std::string name, std::vector<std::int64_t> values);
  TemplateSpec& add_template(std::string name);
  TemplateSpec* find_template(std::string_view name);
};

// ---------------------------------------------------------------------------
// Compiled network

struct VarInfo {
  std::string name;  // template-local variables are named `Tmpl.var`
  std::int64_t lo = 0;
  std::int64_t hi = 1;
  std::int64_t init = 0;
  bool boolean = false;
};

struct Location {
  std::string name;
  Expr invariant;
  std::vector<ClockAtom> invariant_atoms;
  bool committed = false;
};

struct Update {
  bool clock_reset = false;
  std::int32_t target = -1;  // variable index or clock id
  Expr value;
};

struct Edge {
  std::int32_t source = 0;
  std::int32_t target = 0;
  Expr guard;                           // full guard, for concrete evaluation
  Expr data_guard;                      // clock-free conjuncts
  std::vector<ClockAtom> clock_guards;  // clock conjuncts
  std::int32_t channel = -1;
  bool send = false;
  std::vector<Update> updates;
  std::string label;  // `Tmpl.src->dst ch!`
};

struct Template {
  std::string name;
  std::vector<Location> locations;
  std::int32_t initial = 0;
  std::vector<Edge> edges;
};

class Network {
 public:
  const NetworkSpec& spec() const { return spec_; }
  const std::vector<VarInfo>& vars() const { return vars_; }
  const std::vector<std::string>& clock_names() const { return clock_names_; }
  const std::vector<std::string>& channels() const { return channels_; }
  const std::vector<Table>& tables() const { return tables_; }
  const std::vector<Template>& templates() const { return templates_; }

  /// Number of DBM dimensions: clocks plus the reference clock.
  std::size_t dim() const { return clock_names_.size(); }
  /// Per-clock maximal constant for extrapolation (-1: do not abstract that clock).
  const std::vector<std::int64_t>& max_constants() const { return max_constants_; }

  std::optional<std::int32_t> var_index(std::string_view name) const;
  std::optional<std::int32_t> template_index(std::string_view name) const;
  std::optional<std::int32_t> location_index(std::int32_t tmpl, std::string_view name) const;

  /// Resolves a name as seen from inside template `tmpl` (or globally when tmpl < 0).
  std::optional<Symbol> resolve(const std::string& name, std::int32_t tmpl = -1) const;

  /// Trace row of a valuation when the network is trace-driven.
  std::optional<std::int64_t> trace_row(std::span<const std::int64_t> values) const;

  EvalEnv env(std::span<const std::int64_t> values, std::span<const std::int32_t> locations = {},
              std::span<const std::int64_t> clocks = {}) const {
    return EvalEnv{values, locations, tables_, clocks};
  }

  std::string location_name(std::int32_t tmpl, std::int32_t loc) const;

 private:
  friend Network build_network(const NetworkSpec& spec);

  NetworkSpec spec_;
  std::vector<VarInfo> vars_;
  std::vector<std::string> clock_names_;  // [0] is the reference clock
  std::vector<std::string> channels_;
  std::vector<Table> tables_;
  std::vector<std::string> table_names_;
  std::unordered_map<std::string, std::int64_t> constants_;
  std::vector<Template> templates_;
  std::vector<std::int64_t> max_constants_;
  std::int32_t trace_row_var_ = -1;
  std::int64_t trace_row_offset_ = 0;
};

/// Parses, binds and validates a spec. Throws ModelError / ParseError.
Network build_network(const NetworkSpec& spec);

}  // namespace dtcv
