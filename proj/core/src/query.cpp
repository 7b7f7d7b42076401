#include <sstream>

#include "dtcv/error.hpp"
#include "dtcv/verifier.hpp"

namespace dtcv {

namespace {

const ExprNode* find_clock(const Expr& e) {
  if (!e) return nullptr;
  if (e.op() == ExprOp::Clock) return &e.node();
  for (const auto& a : e.node().args)
    if (const auto* n = find_clock(a)) return n;
  return nullptr;
}

}  // namespace

Expr bind_predicate(const Network& net, std::string_view text) {
  const Expr bound =
      bind_symbols(parse_expr(text), [&](const std::string& n) { return net.resolve(n, -1); });
  if (const auto* c = find_clock(bound))
    throw ParseError("clock predicates unsupported in queries", c->pos);
  return bound;
}

Query parse_query(std::string_view text, const Network& net) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  Query q;
  q.text = std::string(text);
  const std::string_view rest = text.substr(i);
  if (rest.substr(0, 3) == "A[]") {
    q.kind = QueryKind::Invariance;
  } else if (rest.substr(0, 3) == "E<>") {
    q.kind = QueryKind::Reachability;
  } else {
    throw ParseError("query must start with A[] or E<>", i);
  }
  // Blank out the quantifier so that error offsets refer to the original text.
  std::string body(text);
  for (std::size_t k = 0; k < i + 3; ++k) body[k] = ' ';
  q.predicate = bind_predicate(net, body);
  return q;
}

Query make_query(QueryKind kind, Expr predicate) {
  Query q;
  q.kind = kind;
  q.predicate = std::move(predicate);
  q.text = (kind == QueryKind::Invariance ? "A[] " : "E<> ") + to_string(q.predicate);
  return q;
}

std::string DiagnosticTrace::render(const Network& net) const {
  std::ostringstream out;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const TraceStep& s = steps[k];
    out << "#" << k << " " << s.action;
    if (s.trace_row) out << " [row " << *s.trace_row << "]";
    out << "\n  " << format_locations(net, s.state.locations);
    const std::string vals = format_values(net, s.state.values);
    if (!vals.empty()) out << "\n  " << vals;
    out << "\n  " << format_zone(net, s.state.zone) << "\n";
  }
  return out.str();
}

}  // namespace dtcv
