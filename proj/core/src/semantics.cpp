#include "dtcv/semantics.hpp"

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

// Applies every invariant of the current location vector. Returns false if the zone empties.
bool apply_invariants(const Network& net, const std::vector<std::int32_t>& locs,
                      const std::vector<std::int64_t>& vals, Zone& z) {
  const EvalEnv env = net.env(vals);
  const auto& tmpls = net.templates();
  for (std::size_t t = 0; t < tmpls.size(); ++t) {
    const Location& l = tmpls[t].locations[static_cast<std::size_t>(locs[t])];
    for (const ClockAtom& a : l.invariant_atoms) {
      const std::int64_t k = eval(a.bound, env);
      for (const ClockConstraint& c : to_constraints(a, k)) {
        z.constrain(c);
        if (z.is_empty()) return false;
      }
    }
  }
  return true;
}

bool guard_holds(const Network& net, const Edge& e, const std::vector<std::int64_t>& vals) {
  try {
    return holds(e.data_guard, net.env(vals));
  } catch (const EvalError& err) {
    throw ModelError("edge " + e.label + ": " + err.what());
  }
}

}  // namespace

bool has_committed(const Network& net, std::span<const std::int32_t> locations) {
  const auto& tmpls = net.templates();
  for (std::size_t t = 0; t < tmpls.size(); ++t)
    if (tmpls[t].locations[static_cast<std::size_t>(locations[t])].committed) return true;
  return false;
}

SymState initial_state(const Network& net) {
  SymState s;
  for (const auto& t : net.templates()) s.locations.push_back(t.initial);
  for (const auto& v : net.vars()) s.values.push_back(v.init);
  s.zone = Zone::zero(net.dim());
  if (!apply_invariants(net, s.locations, s.values, s.zone)) throw ModelError("vacuous model");
  if (!has_committed(net, s.locations)) {
    s.zone.delay();
    apply_invariants(net, s.locations, s.values, s.zone);
  }
  s.zone.extrapolate(net.max_constants());
  return s;
}

std::vector<Transition> successors(const Network& net, const SymState& s) {
  std::vector<Transition> out;
  const auto& tmpls = net.templates();
  const bool committed = has_committed(net, s.locations);
  auto is_committed = [&](std::size_t t) {
    return tmpls[t].locations[static_cast<std::size_t>(s.locations[t])].committed;
  };

  auto fire = [&](std::initializer_list<std::pair<std::int32_t, std::int32_t>> parts) {
    Transition tr;
    tr.count = 0;
    Zone z = s.zone;
    const EvalEnv pre = net.env(s.values);
    for (const auto& [t, ei] : parts) {
      const Edge& e = tmpls[static_cast<std::size_t>(t)].edges[static_cast<std::size_t>(ei)];
      tr.parts[static_cast<std::size_t>(tr.count++)] = {t, ei};
      for (const ClockAtom& a : e.clock_guards) {
        std::int64_t k = 0;
        try {
          k = eval(a.bound, pre);
        } catch (const EvalError& err) {
          throw ModelError("edge " + e.label + ": " + err.what());
        }
        for (const ClockConstraint& c : to_constraints(a, k)) z.constrain(c);
      }
      if (z.is_empty()) return;
    }
    std::vector<std::int64_t> vals = s.values;
    std::vector<std::int32_t> locs = s.locations;
    for (const auto& [t, ei] : parts) {
      const Edge& e = tmpls[static_cast<std::size_t>(t)].edges[static_cast<std::size_t>(ei)];
      for (const Update& u : e.updates) {
        if (u.clock_reset) {
          z.reset(static_cast<ClockId>(u.target));
          continue;
        }
        std::int64_t v = 0;
        try {
          v = eval(u.value, net.env(vals));
        } catch (const EvalError& err) {
          throw ModelError("edge " + e.label + ": " + err.what());
        }
        const VarInfo& info = net.vars()[static_cast<std::size_t>(u.target)];
        if (v < info.lo || v > info.hi)
          throw ModelError("edge " + e.label + ": value " + std::to_string(v) + " assigned to '" +
                           info.name + "' is outside [" + std::to_string(info.lo) + "," +
                           std::to_string(info.hi) + "]");
        vals[static_cast<std::size_t>(u.target)] = v;
      }
      locs[static_cast<std::size_t>(t)] = e.target;
    }
    if (!apply_invariants(net, locs, vals, z)) return;
    if (!has_committed(net, locs)) {
      z.delay();
      apply_invariants(net, locs, vals, z);
    }
    z.extrapolate(net.max_constants());
    tr.target = SymState{std::move(locs), std::move(vals), std::move(z)};
    out.push_back(std::move(tr));
  };

  for (std::size_t t = 0; t < tmpls.size(); ++t) {
    const auto& edges = tmpls[t].edges;
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
      const Edge& e = edges[ei];
      if (e.source != s.locations[t] || e.channel >= 0) continue;
      if (committed && !is_committed(t)) continue;
      if (!guard_holds(net, e, s.values)) continue;
      fire({{static_cast<std::int32_t>(t), static_cast<std::int32_t>(ei)}});
    }
  }

  for (std::size_t t = 0; t < tmpls.size(); ++t) {
    const auto& edges = tmpls[t].edges;
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
      const Edge& e = edges[ei];
      if (e.source != s.locations[t] || e.channel < 0 || !e.send) continue;
      if (!guard_holds(net, e, s.values)) continue;
      for (std::size_t r = 0; r < tmpls.size(); ++r) {
        if (r == t) continue;
        if (committed && !is_committed(t) && !is_committed(r)) continue;
        const auto& redges = tmpls[r].edges;
        for (std::size_t fi = 0; fi < redges.size(); ++fi) {
          const Edge& f = redges[fi];
          if (f.source != s.locations[r] || f.channel != e.channel || f.send) continue;
          if (!guard_holds(net, f, s.values)) continue;
          fire({{static_cast<std::int32_t>(t), static_cast<std::int32_t>(ei)},
                {static_cast<std::int32_t>(r), static_cast<std::int32_t>(fi)}});
        }
      }
    }
  }
  return out;
}

bool eval_pred(const Network& net, const SymState& s, const Expr& predicate) {
  return holds(predicate, net.env(s.values, s.locations));
}

std::string transition_label(const Network& net, const Transition& t) {
  std::string out;
  for (std::int32_t k = 0; k < t.count; ++k) {
    const auto [ti, ei] = t.parts[static_cast<std::size_t>(k)];
    if (k) out += " | ";
    out += net.templates()[static_cast<std::size_t>(ti)].edges[static_cast<std::size_t>(ei)].label;
  }
  return out;
}

std::string format_locations(const Network& net, std::span<const std::int32_t> locations) {
  std::string out = "(";
  for (std::size_t t = 0; t < locations.size(); ++t) {
    if (t) out += ", ";
    out += net.location_name(static_cast<std::int32_t>(t), locations[t]);
  }
  return out + ")";
}

std::string format_values(const Network& net, std::span<const std::int64_t> values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ' ';
    out += net.vars()[k].name + "=" + std::to_string(values[k]);
  }
  return out;
}

std::string format_zone(const Network& net, const Zone& z) {
  return z.to_string([&](ClockId id) { return net.clock_names()[id]; });
}

}  // namespace dtcv
