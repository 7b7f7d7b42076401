#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtcv/network.hpp"
#include "dtcv/semantics.hpp"

namespace dtcv {

enum class QueryKind { Invariance, Reachability };

struct Query {
  QueryKind kind = QueryKind::Invariance;
  Expr predicate;
  std::string text;
};

/// Binds a clock-free state predicate against `net`. Errors carry the offset into `text`.
Expr bind_predicate(const Network& net, std::string_view text);

/// `A[] p` or `E<> p`.
Query parse_query(std::string_view text, const Network& net);

Query make_query(QueryKind kind, Expr predicate);

struct TraceStep {
  SymState state;
  std::string action;  // "init" or the fired edge(s)
  std::optional<std::int64_t> trace_row;
};

struct DiagnosticTrace {
  std::vector<TraceStep> steps;

  /// Multi-line, human-readable rendering.
  std::string render(const Network& net) const;
};

struct Verdict {
  bool satisfied = false;
  std::optional<DiagnosticTrace> evidence;
  std::size_t states_explored = 0;
};

struct CheckLimits {
  std::size_t max_states = 5'000'000;
  /// Upper bound on elapsed time, enforced with an extra global clock.
  std::optional<std::int64_t> horizon;
  bool subsumption = true;
};

/// Breadth-first zone-graph exploration. Throws InconclusiveError when max_states is hit.
Verdict check(const Network& net, const Query& q, const CheckLimits& limits = {});

/// check(A[] p).satisfied == !check(E<> !p).satisfied.
bool check_duality(const Network& net, const Expr& p, const CheckLimits& limits = {});

/// Brute-force enumeration with integer clocks and unit delays, elapsed time <= horizon.
/// Only exact for closed (non-strict) clock constraints.
Verdict explicit_oracle(const Network& net, const Query& q, std::int64_t horizon,
                        std::size_t max_states = 2'000'000);

}  // namespace dtcv
