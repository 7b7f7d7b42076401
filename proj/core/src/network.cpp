#include "dtcv/network.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include "dtcv/error.hpp"

namespace dtcv {

// ---------------------------------------------------------------------------
// Builder helpers

TemplateSpec& TemplateSpec::location(std::string n, std::string invariant) {
  locations.push_back({std::move(n), std::move(invariant), false});
  return *this;
}

TemplateSpec& TemplateSpec::committed(std::string n) {
  locations.push_back({std::move(n), {}, true});
  return *this;
}

TemplateSpec& TemplateSpec::edge(std::string source, std::string target, std::string guard,
                                 std::string sync, std::string update) {
  edges.push_back(
      {std::move(source), std::move(target), std::move(guard), std::move(sync), std::move(update)});
  return *this;
}

TemplateSpec& TemplateSpec::var(std::string n, std::int64_t lo, std::int64_t hi,
                                std::int64_t init) {
  vars.push_back({std::move(n), lo, hi, init, false});
  return *this;
}

TemplateSpec& TemplateSpec::boolean(std::string n, bool init) {
  vars.push_back({std::move(n), 0, 1, init ? 1 : 0, true});
  return *this;
}

TemplateSpec& TemplateSpec::clock(std::string n) {
  clocks.push_back(std::move(n));
  return *this;
}

NetworkSpec& NetworkSpec::var(std::string n, std::int64_t lo, std::int64_t hi,
                              std::int64_t init) {
  vars.push_back({std::move(n), lo, hi, init, false});
  return *this;
}

NetworkSpec& NetworkSpec::boolean(std::string n, bool init) {
  vars.push_back({std::move(n), 0, 1, init ? 1 : 0, true});
  return *this;
}

NetworkSpec& NetworkSpec::clock(std::string n) {
  clocks.push_back(std::move(n));
  return *this;
}

NetworkSpec& NetworkSpec::channel(std::string n) {
  channels.push_back(std::move(n));
  return *this;
}

NetworkSpec& NetworkSpec::constant(std::string n, std::int64_t value) {
  constants.push_back({std::move(n), value});
  return *this;
}

NetworkSpec& NetworkSpec::table(std::string n, std::vector<std::int64_t> values) {
  tables.push_back({std::move(n), std::move(values)});
  return *this;
}

TemplateSpec& NetworkSpec::add_template(std::string n) {
  templates.emplace_back();
  templates.back().name = std::move(n);
  return templates.back();
}

TemplateSpec* NetworkSpec::find_template(std::string_view n) {
  for (auto& t : templates)
    if (t.name == n) return &t;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Lookups

std::optional<std::int32_t> Network::var_index(std::string_view name) const {
  for (std::size_t k = 0; k < vars_.size(); ++k)
    if (vars_[k].name == name) return static_cast<std::int32_t>(k);
  return std::nullopt;
}

std::optional<std::int32_t> Network::template_index(std::string_view name) const {
  for (std::size_t k = 0; k < templates_.size(); ++k)
    if (templates_[k].name == name) return static_cast<std::int32_t>(k);
  return std::nullopt;
}

std::optional<std::int32_t> Network::location_index(std::int32_t tmpl,
                                                    std::string_view name) const {
  const auto& locs = templates_[static_cast<std::size_t>(tmpl)].locations;
  for (std::size_t k = 0; k < locs.size(); ++k)
    if (locs[k].name == name) return static_cast<std::int32_t>(k);
  return std::nullopt;
}

std::string Network::location_name(std::int32_t tmpl, std::int32_t loc) const {
  const Template& t = templates_[static_cast<std::size_t>(tmpl)];
  return t.name + "." + t.locations[static_cast<std::size_t>(loc)].name;
}

std::optional<Symbol> Network::resolve(const std::string& name, std::int32_t tmpl) const {
  auto lookup = [&](const std::string& n) -> std::optional<Symbol> {
    if (auto v = var_index(n)) return Symbol{SymbolKind::Variable, *v, -1, 0};
    for (std::size_t k = 1; k < clock_names_.size(); ++k)
      if (clock_names_[k] == n) return Symbol{SymbolKind::Clock, static_cast<std::int32_t>(k), -1, 0};
    return std::nullopt;
  };
  if (tmpl >= 0) {
    if (auto s = lookup(templates_[static_cast<std::size_t>(tmpl)].name + "." + name)) return s;
  }
  if (auto s = lookup(name)) return s;
  if (auto c = constants_.find(name); c != constants_.end())
    return Symbol{SymbolKind::Constant, -1, -1, c->second};
  for (std::size_t k = 0; k < table_names_.size(); ++k)
    if (table_names_[k] == name) return Symbol{SymbolKind::Table, static_cast<std::int32_t>(k), -1, 0};
  if (tmpl < 0) {
    const auto dot = name.find('.');
    if (dot != std::string::npos) {
      if (auto t = template_index(std::string_view(name).substr(0, dot)))
        if (auto l = location_index(*t, std::string_view(name).substr(dot + 1)))
          return Symbol{SymbolKind::Location, *t, *l, 0};
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> Network::trace_row(std::span<const std::int64_t> values) const {
  if (trace_row_var_ < 0) return std::nullopt;
  return values[static_cast<std::size_t>(trace_row_var_)] + trace_row_offset_;
}

// ---------------------------------------------------------------------------
// Build

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

void check_identifier(std::string_view s, const std::string& what) {
  if (!is_identifier(s)) throw ModelError(what + " '" + std::string(s) + "' is not an identifier");
  static const std::set<std::string_view> reserved{"true", "false", "imply", "and", "or", "not"};
  if (reserved.count(s)) throw ModelError(what + " '" + std::string(s) + "' is a reserved word");
}

VarInfo checked_var(const VarSpec& v, const std::string& full_name) {
  if (v.boolean && (v.lo != 0 || v.hi != 1))
    throw ModelError("boolean '" + full_name + "' must have range [0,1]");
  if (v.lo > v.hi) throw ModelError("variable '" + full_name + "' has an empty range");
  if (v.init < v.lo || v.init > v.hi)
    throw ModelError("initial value of '" + full_name + "' is out of range");
  return VarInfo{full_name, v.lo, v.hi, v.init, v.boolean};
}

Expr rebuild_conjunction(const std::vector<Expr>& parts) {
  Expr out;
  for (const auto& p : parts) out = out ? Expr::binary(ExprOp::And, out, p) : p;
  return out;
}

Expr parse_bound(const Network& net, std::int32_t tmpl, const std::string& text,
                 const std::string& where) {
  if (text.empty()) return {};
  try {
    const Expr raw = parse_expr(text);
    return bind_symbols(raw, [&](const std::string& n) { return net.resolve(n, tmpl); });
  } catch (const ParseError& e) {
    throw ModelError(where + ": " + e.what());
  }
}

}  // namespace

Network build_network(const NetworkSpec& spec) {
  Network net;
  net.spec_ = spec;

  std::set<std::string> globals;
  auto claim = [&](const std::string& n, const std::string& what) {
    if (!globals.insert(n).second) throw ModelError("duplicate name '" + n + "' (" + what + ")");
  };

  net.clock_names_.push_back("0");
  for (const auto& v : spec.vars) {
    check_identifier(v.name, "variable");
    claim(v.name, "variable");
    net.vars_.push_back(checked_var(v, v.name));
  }
  for (const auto& c : spec.clocks) {
    check_identifier(c, "clock");
    claim(c, "clock");
    net.clock_names_.push_back(c);
  }
  for (const auto& ch : spec.channels) {
    check_identifier(ch, "channel");
    claim(ch, "channel");
    net.channels_.push_back(ch);
  }
  for (const auto& c : spec.constants) {
    check_identifier(c.name, "constant");
    claim(c.name, "constant");
    net.constants_[c.name] = c.value;
  }
  for (const auto& t : spec.tables) {
    check_identifier(t.name, "table");
    claim(t.name, "table");
    net.table_names_.push_back(t.name);
    net.tables_.push_back(t.values);
  }

  // Template skeletons first, so that expressions may refer to any declaration.
  std::set<std::string> tmpl_names;
  for (const auto& ts : spec.templates) {
    check_identifier(ts.name, "template");
    if (!tmpl_names.insert(ts.name).second)
      throw ModelError("duplicate template '" + ts.name + "'");
    if (globals.count(ts.name)) throw ModelError("template '" + ts.name + "' shadows a declaration");
    std::set<std::string> locals;
    for (const auto& v : ts.vars) {
      check_identifier(v.name, "variable");
      if (!locals.insert(v.name).second)
        throw ModelError("duplicate local '" + v.name + "' in template " + ts.name);
      net.vars_.push_back(checked_var(v, ts.name + "." + v.name));
    }
    for (const auto& c : ts.clocks) {
      check_identifier(c, "clock");
      if (!locals.insert(c).second)
        throw ModelError("duplicate local '" + c + "' in template " + ts.name);
      net.clock_names_.push_back(ts.name + "." + c);
    }
    if (ts.locations.empty()) throw ModelError("template " + ts.name + " has no locations");
    Template t;
    t.name = ts.name;
    std::set<std::string> loc_names;
    for (const auto& ls : ts.locations) {
      check_identifier(ls.name, "location");
      if (!loc_names.insert(ls.name).second)
        throw ModelError("duplicate location '" + ls.name + "' in template " + ts.name);
      Location l;
      l.name = ls.name;
      l.committed = ls.committed;
      t.locations.push_back(std::move(l));
    }
    net.templates_.push_back(std::move(t));
  }

  const std::size_t dim = net.clock_names_.size();
  std::vector<std::int64_t> max_const(dim, 0);
  bool diagonal = false;
  auto note_atom = [&](const ClockAtom& a) {
    if (a.j != 0) diagonal = true;
    const auto k = fold_constant(a.bound, net.tables_);
    for (const ClockId c : {a.i, a.j}) {
      if (c == 0) continue;
      if (!k) {
        max_const[c] = -1;
      } else if (max_const[c] >= 0) {
        max_const[c] = std::max(max_const[c], std::abs(*k));
      }
    }
  };

  for (std::size_t ti = 0; ti < spec.templates.size(); ++ti) {
    const TemplateSpec& ts = spec.templates[ti];
    Template& t = net.templates_[ti];
    const auto tmpl = static_cast<std::int32_t>(ti);

    if (ts.initial.empty()) {
      t.initial = 0;
    } else {
      const auto init = net.location_index(tmpl, ts.initial);
      if (!init) throw ModelError("template " + ts.name + ": initial location '" + ts.initial + "' does not exist");
      t.initial = *init;
    }

    for (std::size_t li = 0; li < ts.locations.size(); ++li) {
      const std::string where = "invariant of " + ts.name + "." + ts.locations[li].name;
      Location& l = t.locations[li];
      l.invariant = parse_bound(net, tmpl, ts.locations[li].invariant, where);
      for (const Expr& part : conjuncts(l.invariant)) {
        if (const auto k = fold_constant(part, net.tables_); k && *k != 0) continue;
        const auto atom = match_clock_atom(part);
        if (!atom) throw ModelError(where + ": '" + to_string(part) + "' is not a clock constraint");
        const bool upper = atom->op == ExprOp::Lt || atom->op == ExprOp::Le;
        if (atom->op == ExprOp::Ne || (atom->j == 0 && !upper))
          throw ModelError(where + ": '" + to_string(part) + "' is not an upper bound");
        if (mentions_location(atom->bound))
          throw ModelError(where + ": location atoms are not allowed");
        l.invariant_atoms.push_back(*atom);
        note_atom(*atom);
      }
    }

    for (std::size_t ei = 0; ei < ts.edges.size(); ++ei) {
      const EdgeSpec& es = ts.edges[ei];
      const std::string where = ts.name + " edge #" + std::to_string(ei) + " (" + es.source +
                                " -> " + es.target + ")";
      Edge e;
      const auto src = net.location_index(tmpl, es.source);
      const auto dst = net.location_index(tmpl, es.target);
      if (!src) throw ModelError(where + ": unknown source location '" + es.source + "'");
      if (!dst) throw ModelError(where + ": unknown target location '" + es.target + "'");
      e.source = *src;
      e.target = *dst;

      e.guard = parse_bound(net, tmpl, es.guard, where + " guard");
      if (mentions_location(e.guard)) throw ModelError(where + ": location atoms in guard");
      std::vector<Expr> data;
      for (const Expr& part : conjuncts(e.guard)) {
        if (!mentions_clock(part)) {
          data.push_back(part);
          continue;
        }
        const auto atom = match_clock_atom(part);
        if (!atom || atom->op == ExprOp::Ne)
          throw ModelError(where + ": unsupported clock constraint '" + to_string(part) + "'");
        e.clock_guards.push_back(*atom);
        note_atom(*atom);
      }
      e.data_guard = rebuild_conjunction(data);

      if (!es.sync.empty()) {
        const char dir = es.sync.back();
        if (dir != '!' && dir != '?')
          throw ModelError(where + ": synchronisation '" + es.sync + "' must end in ! or ?");
        const std::string ch = es.sync.substr(0, es.sync.size() - 1);
        const auto it = std::find(net.channels_.begin(), net.channels_.end(), ch);
        if (it == net.channels_.end()) throw ModelError(where + ": undeclared channel '" + ch + "'");
        e.channel = static_cast<std::int32_t>(it - net.channels_.begin());
        e.send = dir == '!';
      }

      std::vector<Assignment> assigns;
      try {
        assigns = parse_assignments(es.update);
      } catch (const ParseError& err) {
        throw ModelError(where + " update: " + err.what());
      }
      for (const Assignment& a : assigns) {
        const auto sym = net.resolve(a.target, tmpl);
        if (!sym || (sym->kind != SymbolKind::Variable && sym->kind != SymbolKind::Clock))
          throw ModelError(where + ": cannot assign to '" + a.target + "'");
        Update u;
        u.target = sym->a;
        try {
          u.value = bind_symbols(a.value, [&](const std::string& n) { return net.resolve(n, tmpl); });
        } catch (const ParseError& err) {
          throw ModelError(where + " update: " + err.what());
        }
        if (mentions_clock(u.value))
          throw ModelError(where + ": clock value assigned to '" + a.target + "'");
        if (mentions_location(u.value))
          throw ModelError(where + ": location atom assigned to '" + a.target + "'");
        if (sym->kind == SymbolKind::Clock) {
          const auto k = fold_constant(u.value, net.tables_);
          if (!k || *k != 0)
            throw ModelError(where + ": clock '" + a.target + "' can only be reset to 0");
          u.clock_reset = true;
        }
        e.updates.push_back(std::move(u));
      }

      e.label = ts.name + "." + es.source + "->" + es.target;
      if (!es.sync.empty()) e.label += " " + es.sync;
      t.edges.push_back(std::move(e));
    }
  }

  if (diagonal) std::fill(max_const.begin(), max_const.end(), -1);
  max_const[0] = 0;
  net.max_constants_ = std::move(max_const);

  if (spec.trace) {
    const auto v = net.var_index(spec.trace->row_var);
    if (!v) throw ModelError("trace row variable '" + spec.trace->row_var + "' is not declared");
    net.trace_row_var_ = *v;
    net.trace_row_offset_ = spec.trace->offset;
  }
  return net;
}

}  // namespace dtcv
