// Integer-time enumeration used to cross-check the zone-based checker. It shares only
// the expression evaluator and the compiled network with the symbolic engine.

#include <deque>
#include <map>

#include "dtcv/error.hpp"
#include "dtcv/verifier.hpp"

namespace dtcv {

namespace {

struct Concrete {
  std::vector<std::int32_t> locs;
  std::vector<std::int64_t> vals;
  std::vector<std::int64_t> clocks;  // [0] is always 0
  std::int64_t elapsed = 0;

  auto tie() const { return std::tie(locs, vals, clocks, elapsed); }
  bool operator<(const Concrete& o) const { return tie() < o.tie(); }
};

struct Entry {
  Concrete state;
  std::size_t parent;
  std::string action;
};

bool invariants_hold(const Network& net, const Concrete& c) {
  const EvalEnv env = net.env(c.vals, {}, c.clocks);
  for (std::size_t t = 0; t < c.locs.size(); ++t) {
    const Location& l = net.templates()[t].locations[static_cast<std::size_t>(c.locs[t])];
    if (!holds(l.invariant, env)) return false;
  }
  return true;
}

bool committed_at(const Network& net, const Concrete& c, std::size_t t) {
  return net.templates()[t].locations[static_cast<std::size_t>(c.locs[t])].committed;
}

bool any_committed(const Network& net, const Concrete& c) {
  for (std::size_t t = 0; t < c.locs.size(); ++t)
    if (committed_at(net, c, t)) return true;
  return false;
}

void apply_edge(const Network& net, const Edge& e, std::size_t t, Concrete& c) {
  for (const Update& u : e.updates) {
    if (u.clock_reset) {
      c.clocks[static_cast<std::size_t>(u.target)] = 0;
      continue;
    }
    const std::int64_t v = eval(u.value, net.env(c.vals, {}, c.clocks));
    const VarInfo& info = net.vars()[static_cast<std::size_t>(u.target)];
    if (v < info.lo || v > info.hi)
      throw ModelError("edge " + e.label + ": value " + std::to_string(v) + " assigned to '" +
                       info.name + "' is out of range");
    c.vals[static_cast<std::size_t>(u.target)] = v;
  }
  c.locs[t] = e.target;
}

std::vector<std::pair<Concrete, std::string>> moves(const Network& net, const Concrete& c,
                                                    std::int64_t horizon) {
  std::vector<std::pair<Concrete, std::string>> out;
  const auto& tmpls = net.templates();
  const bool committed = any_committed(net, c);
  const EvalEnv env = net.env(c.vals, {}, c.clocks);

  for (std::size_t t = 0; t < tmpls.size(); ++t) {
    for (const Edge& e : tmpls[t].edges) {
      if (e.source != c.locs[t] || e.channel >= 0 || !holds(e.guard, env)) continue;
      if (committed && !committed_at(net, c, t)) continue;
      Concrete next = c;
      apply_edge(net, e, t, next);
      if (invariants_hold(net, next)) out.emplace_back(std::move(next), e.label);
    }
  }
  for (std::size_t t = 0; t < tmpls.size(); ++t) {
    for (const Edge& e : tmpls[t].edges) {
      if (e.source != c.locs[t] || e.channel < 0 || !e.send || !holds(e.guard, env)) continue;
      for (std::size_t r = 0; r < tmpls.size(); ++r) {
        if (r == t) continue;
        if (committed && !committed_at(net, c, t) && !committed_at(net, c, r)) continue;
        for (const Edge& f : tmpls[r].edges) {
          if (f.source != c.locs[r] || f.channel != e.channel || f.send || !holds(f.guard, env))
            continue;
          Concrete next = c;
          apply_edge(net, e, t, next);
          apply_edge(net, f, r, next);
          if (invariants_hold(net, next)) out.emplace_back(std::move(next), e.label + " | " + f.label);
        }
      }
    }
  }
  if (!committed && c.elapsed < horizon) {
    Concrete next = c;
    for (std::size_t k = 1; k < next.clocks.size(); ++k) ++next.clocks[k];
    ++next.elapsed;
    if (invariants_hold(net, next)) out.emplace_back(std::move(next), "delay 1");
  }
  return out;
}

SymState as_sym(const Network& net, const Concrete& c) {
  Zone z = Zone::universe(net.dim());
  for (std::size_t k = 1; k < c.clocks.size(); ++k) {
    const auto v = static_cast<std::int32_t>(c.clocks[k]);
    z.constrain(static_cast<ClockId>(k), 0, Bound::le(v));
    z.constrain(0, static_cast<ClockId>(k), Bound::le(-v));
  }
  return SymState{c.locs, c.vals, std::move(z)};
}

}  // namespace

Verdict explicit_oracle(const Network& net, const Query& q, std::int64_t horizon,
                        std::size_t max_states) {
  const bool invariance = q.kind == QueryKind::Invariance;
  Concrete init;
  for (const auto& t : net.templates()) init.locs.push_back(t.initial);
  for (const auto& v : net.vars()) init.vals.push_back(v.init);
  init.clocks.assign(net.dim(), 0);
  if (!invariants_hold(net, init)) throw ModelError("vacuous model");

  std::vector<Entry> entries;
  std::map<Concrete, std::size_t> seen;
  std::deque<std::size_t> frontier;

  auto hit = [&](const Concrete& c) {
    if (any_committed(net, c)) return false;
    const bool p = holds(q.predicate, net.env(c.vals, c.locs));
    return invariance ? !p : p;
  };
  auto finish = [&](std::optional<std::size_t> found) {
    Verdict v;
    v.states_explored = entries.size();
    v.satisfied = invariance ? !found : found.has_value();
    if (found) {
      std::vector<std::size_t> chain;
      for (std::size_t k = *found;; k = entries[k].parent) {
        chain.push_back(k);
        if (k == 0) break;
      }
      DiagnosticTrace trace;
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const Entry& e = entries[*it];
        trace.steps.push_back(
            TraceStep{as_sym(net, e.state), e.action, net.trace_row(e.state.vals)});
      }
      v.evidence = std::move(trace);
    }
    return v;
  };

  entries.push_back(Entry{init, 0, "init"});
  seen.emplace(init, 0);
  if (hit(init)) return finish(0);
  frontier.push_back(0);
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    auto next = moves(net, entries[cur].state, horizon);
    for (auto& [state, action] : next) {
      if (seen.count(state)) continue;
      if (entries.size() >= max_states)
        throw InconclusiveError("explicit oracle state cap reached", entries.size(),
                                frontier.size() + 1, 0);
      const std::size_t id = entries.size();
      seen.emplace(state, id);
      entries.push_back(Entry{std::move(state), cur, std::move(action)});
      if (hit(entries[id].state)) return finish(id);
      frontier.push_back(id);
    }
  }
  return finish(std::nullopt);
}

}  // namespace dtcv
