#include <deque>
#include <unordered_map>

#include "dtcv/error.hpp"
#include "dtcv/verifier.hpp"

namespace dtcv {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
    std::size_t h = k.size();
    for (const auto v : k) h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

std::vector<std::int64_t> discrete_key(const SymState& s) {
  std::vector<std::int64_t> key;
  key.reserve(s.locations.size() + s.values.size());
  key.insert(key.end(), s.locations.begin(), s.locations.end());
  key.insert(key.end(), s.values.begin(), s.values.end());
  return key;
}

struct Node {
  SymState state;
  std::size_t parent;
  Transition via;  // target left empty
  std::size_t depth;
};

Network with_horizon(const Network& net, std::int64_t horizon) {
  NetworkSpec spec = net.spec();
  const std::string clock = "_horizon";
  spec.clocks.push_back(clock);
  const std::string bound = clock + " <= " + std::to_string(horizon);
  for (auto& t : spec.templates)
    for (auto& l : t.locations)
      l.invariant = l.invariant.empty() ? bound : "(" + l.invariant + ") && " + bound;
  return build_network(spec);
}

DiagnosticTrace rebuild(const Network& net, const std::vector<Node>& nodes, std::size_t leaf) {
  std::vector<std::size_t> chain;
  for (std::size_t k = leaf;; k = nodes[k].parent) {
    chain.push_back(k);
    if (k == 0) break;
  }
  DiagnosticTrace trace;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const Node& n = nodes[*it];
    TraceStep step;
    step.state = n.state;
    step.action = *it == 0 ? "init" : transition_label(net, n.via);
    step.trace_row = net.trace_row(n.state.values);
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

Verdict run(const Network& net, const Query& q, const CheckLimits& limits) {
  const bool invariance = q.kind == QueryKind::Invariance;
  // Predicates are only observed outside committed chains, which act as atomic updates.
  auto hit = [&](const SymState& s) {
    if (has_committed(net, s.locations)) return false;
    const bool p = eval_pred(net, s, q.predicate);
    return invariance ? !p : p;
  };

  std::vector<Node> nodes;
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, KeyHash> passed;
  std::deque<std::size_t> waiting;

  auto finish = [&](std::optional<std::size_t> found) {
    Verdict v;
    v.states_explored = nodes.size();
    v.satisfied = invariance ? !found : found.has_value();
    if (found) v.evidence = rebuild(net, nodes, *found);
    return v;
  };

  nodes.push_back(Node{initial_state(net), 0, {}, 0});
  passed[discrete_key(nodes[0].state)].push_back(0);
  if (hit(nodes[0].state)) return finish(0);
  waiting.push_back(0);

  while (!waiting.empty()) {
    const std::size_t cur = waiting.front();
    waiting.pop_front();
    std::vector<Transition> succ = successors(net, nodes[cur].state);
    for (Transition& tr : succ) {
      auto& bucket = passed[discrete_key(tr.target)];
      bool covered = false;
      for (const std::size_t k : bucket) {
        const Zone& seen = nodes[k].state.zone;
        if (limits.subsumption ? tr.target.zone.is_subset_of(seen) : tr.target.zone == seen) {
          covered = true;
          break;
        }
      }
      if (covered) continue;
      if (nodes.size() >= limits.max_states)
        throw InconclusiveError("state limit of " + std::to_string(limits.max_states) +
                                    " reached before exhausting the state space",
                                nodes.size(), waiting.size() + 1, nodes[cur].depth + 1);
      const std::size_t id = nodes.size();
      SymState target = std::move(tr.target);
      tr.target = {};
      nodes.push_back(Node{std::move(target), cur, tr, nodes[cur].depth + 1});
      bucket.push_back(id);
      if (hit(nodes[id].state)) return finish(id);
      waiting.push_back(id);
    }
  }
  return finish(std::nullopt);
}

}  // namespace

Verdict check(const Network& net, const Query& q, const CheckLimits& limits) {
  if (limits.horizon) {
    if (*limits.horizon < 0) throw ModelError("negative horizon");
    return run(with_horizon(net, *limits.horizon), q, limits);
  }
  return run(net, q, limits);
}

bool check_duality(const Network& net, const Expr& p, const CheckLimits& limits) {
  const Verdict always = check(net, make_query(QueryKind::Invariance, p), limits);
  const Verdict reach =
      check(net, make_query(QueryKind::Reachability, Expr::unary(ExprOp::Not, p)), limits);
  return always.satisfied == !reach.satisfied;
}

}  // namespace dtcv
