#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtcv/zone.hpp"

namespace dtcv {

enum class ExprOp : std::uint8_t {
  // leaves
  Const,
  Ident,     // unresolved name, possibly dotted (`Lamp.bright`)
  Var,       // data variable, index into the valuation
  Clock,     // clock id (> 0)
  Location,  // template `a` is in location `b`
  // compound
  Index,  // unresolved `name[arg0]`
  Table,  // constant table `a` indexed by arg0
  Not,
  Neg,
  Mul,
  Div,
  Mod,
  Add,
  Sub,
  Lt,
  Le,
  Eq,
  Ne,
  Ge,
  Gt,
  And,
  Or,
  Imply,
  Cond,  // arg0 ? arg1 : arg2
};

class Expr;

struct ExprNode {
  ExprOp op = ExprOp::Const;
  std::int64_t value = 0;
  std::int32_t a = -1;
  std::int32_t b = -1;
  std::string name;
  std::vector<Expr> args;
  std::size_t pos = 0;
};

/// Immutable expression tree with cheap copies. A default-constructed Expr is "absent",
/// which guards and invariants treat as `true`.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  static Expr constant(std::int64_t v);
  static Expr ident(std::string name, std::size_t pos = 0);
  static Expr unary(ExprOp op, Expr operand, std::size_t pos = 0);
  static Expr binary(ExprOp op, Expr lhs, Expr rhs, std::size_t pos = 0);
  static Expr cond(Expr c, Expr then_e, Expr else_e, std::size_t pos = 0);

  explicit operator bool() const { return node_ != nullptr; }
  const ExprNode& node() const { return *node_; }
  ExprOp op() const { return node_->op; }
  const Expr& arg(std::size_t k) const { return node_->args[k]; }
  std::size_t arity() const { return node_->args.size(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

Expr parse_expr(std::string_view text);

struct Assignment {
  std::string target;
  std::size_t pos = 0;
  Expr value;
};

/// Comma-separated `lhs = expr` (or `lhs := expr`) list, as written on edges.
std::vector<Assignment> parse_assignments(std::string_view text);

std::string to_string(const Expr& e);

enum class SymbolKind { Variable, Clock, Location, Constant, Table };

struct Symbol {
  SymbolKind kind = SymbolKind::Variable;
  std::int32_t a = -1;  // variable / clock / table index, or template index
  std::int32_t b = -1;  // location index
  std::int64_t value = 0;
};

using Resolver = std::function<std::optional<Symbol>(const std::string& name)>;

/// Replaces every identifier with its resolved symbol. Throws ParseError on unknown names.
Expr bind_symbols(const Expr& e, const Resolver& resolve);

bool mentions_clock(const Expr& e);
bool mentions_location(const Expr& e);

/// `x_i - x_j op bound` with clock-free `bound`; j == 0 for single-clock atoms.
struct ClockAtom {
  ClockId i = 0;
  ClockId j = 0;
  ExprOp op = ExprOp::Le;
  Expr bound;
};

/// Recognises a comparison between clocks and a clock-free term (either orientation).
std::optional<ClockAtom> match_clock_atom(const Expr& e);

/// Difference constraints for an atom whose bound evaluated to `k`. `!=` is not supported.
std::vector<ClockConstraint> to_constraints(const ClockAtom& atom, std::int64_t k);

/// Flattens top-level conjunctions.
std::vector<Expr> conjuncts(const Expr& e);

using Table = std::vector<std::int64_t>;

struct EvalEnv {
  std::span<const std::int64_t> values;
  std::span<const std::int32_t> locations;
  std::span<const Table> tables;
  /// Concrete clock valuation, indexed by ClockId (entry 0 unused). Empty when clocks
  /// are symbolic, in which case a clock term is an evaluation error.
  std::span<const std::int64_t> clocks;
};

std::int64_t eval(const Expr& e, const EvalEnv& env);
inline bool holds(const Expr& e, const EvalEnv& env) { return !e || eval(e, env) != 0; }

/// Value of an expression with no variable, clock or location leaves.
std::optional<std::int64_t> fold_constant(const Expr& e, std::span<const Table> tables = {});

}  // namespace dtcv
