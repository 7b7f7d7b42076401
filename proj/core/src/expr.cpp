#include "dtcv/expr.hpp"

#include <cctype>

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

std::shared_ptr<ExprNode> make(ExprOp op, std::size_t pos) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->pos = pos;
  return n;
}

}  // namespace

Expr Expr::constant(std::int64_t v) {
  auto n = make(ExprOp::Const, 0);
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::ident(std::string name, std::size_t pos) {
  auto n = make(ExprOp::Ident, pos);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(ExprOp op, Expr operand, std::size_t pos) {
  auto n = make(op, pos);
  n->args.push_back(std::move(operand));
  return Expr(std::move(n));
}

Expr Expr::binary(ExprOp op, Expr lhs, Expr rhs, std::size_t pos) {
  auto n = make(op, pos);
  n->args.push_back(std::move(lhs));
  n->args.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::cond(Expr c, Expr then_e, Expr else_e, std::size_t pos) {
  auto n = make(ExprOp::Cond, pos);
  n->args.push_back(std::move(c));
  n->args.push_back(std::move(then_e));
  n->args.push_back(std::move(else_e));
  return Expr(std::move(n));
}

bool operator==(const Expr& x, const Expr& y) {
  if (!x || !y) return !x && !y;
  if (x.node_ == y.node_) return true;
  const ExprNode& a = x.node();
  const ExprNode& b = y.node();
  if (a.op != b.op || a.value != b.value || a.a != b.a || a.b != b.b || a.name != b.name ||
      a.args.size() != b.args.size())
    return false;
  for (std::size_t k = 0; k < a.args.size(); ++k)
    if (!(a.args[k] == b.args[k])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok {
  End,
  Number,
  Name,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Question,
  Colon,
  Comma,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  Bang,
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,
  Ne,
  AndAnd,
  OrOr,
  Assign,  // `=` or `:=`
};

struct Token {
  Tok kind = Tok::End;
  std::size_t pos = 0;
  std::string text;
  std::int64_t number = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.pos = i_;
      if (i_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::int64_t v = 0;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
          v = v * 10 + (src_[i_] - '0');
          ++i_;
        }
        t.kind = Tok::Number;
        t.number = v;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = i_;
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                                    src_[i_] == '_' || src_[i_] == '.'))
          ++i_;
        t.kind = Tok::Name;
        t.text = std::string(src_.substr(start, i_ - start));
      } else {
        t.kind = punct(c);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  bool next_is(char c) const { return i_ + 1 < src_.size() && src_[i_ + 1] == c; }

  Tok punct(char c) {
    const std::size_t at = i_;
    ++i_;
    switch (c) {
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      case '[': return Tok::LBracket;
      case ']': return Tok::RBracket;
      case '?': return Tok::Question;
      case ',': return Tok::Comma;
      case '+': return Tok::Plus;
      case '-': return Tok::Minus;
      case '*': return Tok::Star;
      case '/': return Tok::Slash;
      case '%': return Tok::Percent;
      case ':':
        if (i_ < src_.size() && src_[i_] == '=') {
          ++i_;
          return Tok::Assign;
        }
        return Tok::Colon;
      case '!':
        if (i_ < src_.size() && src_[i_] == '=') {
          ++i_;
          return Tok::Ne;
        }
        return Tok::Bang;
      case '<':
        if (i_ < src_.size() && src_[i_] == '=') {
          ++i_;
          return Tok::Le;
        }
        return Tok::Lt;
      case '>':
        if (i_ < src_.size() && src_[i_] == '=') {
          ++i_;
          return Tok::Ge;
        }
        return Tok::Gt;
      case '=':
        if (i_ < src_.size() && src_[i_] == '=') {
          ++i_;
          return Tok::EqEq;
        }
        return Tok::Assign;
      case '&':
        if (i_ < src_.size() && src_[i_] == '&') {
          ++i_;
          return Tok::AndAnd;
        }
        break;
      case '|':
        if (i_ < src_.size() && src_[i_] == '|') {
          ++i_;
          return Tok::OrOr;
        }
        break;
      default:
        break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", at);
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Expr parse_full() {
    Expr e = expr();
    expect_end();
    return e;
  }

  std::vector<Assignment> parse_assignments() {
    std::vector<Assignment> out;
    if (peek().kind == Tok::End) return out;
    for (;;) {
      const Token& t = peek();
      if (t.kind != Tok::Name) throw ParseError("expected assignment target", t.pos);
      Assignment a;
      a.target = t.text;
      a.pos = t.pos;
      ++k_;
      if (peek().kind != Tok::Assign) throw ParseError("expected '=' in assignment", peek().pos);
      ++k_;
      a.value = expr();
      out.push_back(std::move(a));
      if (peek().kind == Tok::Comma) {
        ++k_;
        continue;
      }
      expect_end();
      return out;
    }
  }

 private:
  const Token& peek() const { return toks_[k_]; }
  bool is_word(std::string_view w) const {
    return peek().kind == Tok::Name && peek().text == w;
  }
  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) throw ParseError(std::string("expected ") + what, peek().pos);
    ++k_;
  }
  void expect_end() {
    if (peek().kind != Tok::End) throw ParseError("unexpected trailing input", peek().pos);
  }

  Expr expr() { return imply(); }

  Expr imply() {
    Expr lhs = disj();
    if (is_word("imply")) {
      const std::size_t pos = peek().pos;
      ++k_;
      return Expr::binary(ExprOp::Imply, lhs, imply(), pos);
    }
    return lhs;
  }

  Expr disj() {
    Expr lhs = conj();
    while (peek().kind == Tok::OrOr || is_word("or")) {
      const std::size_t pos = peek().pos;
      ++k_;
      lhs = Expr::binary(ExprOp::Or, lhs, conj(), pos);
    }
    return lhs;
  }

  Expr conj() {
    Expr lhs = negation();
    while (peek().kind == Tok::AndAnd || is_word("and")) {
      const std::size_t pos = peek().pos;
      ++k_;
      lhs = Expr::binary(ExprOp::And, lhs, negation(), pos);
    }
    return lhs;
  }

  Expr negation() {
    if (is_word("not")) {
      const std::size_t pos = peek().pos;
      ++k_;
      return Expr::unary(ExprOp::Not, negation(), pos);
    }
    return ternary();
  }

  Expr ternary() {
    Expr c = equality();
    if (peek().kind == Tok::Question) {
      const std::size_t pos = peek().pos;
      ++k_;
      Expr t = expr();
      expect(Tok::Colon, "':'");
      Expr e = ternary();
      return Expr::cond(c, t, e, pos);
    }
    return c;
  }

  Expr equality() {
    Expr lhs = relational();
    for (;;) {
      const Tok k = peek().kind;
      if (k != Tok::EqEq && k != Tok::Ne) return lhs;
      const std::size_t pos = peek().pos;
      ++k_;
      lhs = Expr::binary(k == Tok::EqEq ? ExprOp::Eq : ExprOp::Ne, lhs, relational(), pos);
    }
  }

  Expr relational() {
    Expr lhs = additive();
    for (;;) {
      ExprOp op;
      switch (peek().kind) {
        case Tok::Lt: op = ExprOp::Lt; break;
        case Tok::Le: op = ExprOp::Le; break;
        case Tok::Gt: op = ExprOp::Gt; break;
        case Tok::Ge: op = ExprOp::Ge; break;
        default: return lhs;
      }
      const std::size_t pos = peek().pos;
      ++k_;
      lhs = Expr::binary(op, lhs, additive(), pos);
    }
  }

  Expr additive() {
    Expr lhs = multiplicative();
    for (;;) {
      const Tok k = peek().kind;
      if (k != Tok::Plus && k != Tok::Minus) return lhs;
      const std::size_t pos = peek().pos;
      ++k_;
      lhs = Expr::binary(k == Tok::Plus ? ExprOp::Add : ExprOp::Sub, lhs, multiplicative(), pos);
    }
  }

  Expr multiplicative() {
    Expr lhs = unary();
    for (;;) {
      ExprOp op;
      switch (peek().kind) {
        case Tok::Star: op = ExprOp::Mul; break;
        case Tok::Slash: op = ExprOp::Div; break;
        case Tok::Percent: op = ExprOp::Mod; break;
        default: return lhs;
      }
      const std::size_t pos = peek().pos;
      ++k_;
      lhs = Expr::binary(op, lhs, unary(), pos);
    }
  }

  Expr unary() {
    const std::size_t pos = peek().pos;
    if (peek().kind == Tok::Minus) {
      ++k_;
      Expr operand = unary();
      if (operand.op() == ExprOp::Const) return Expr::constant(-operand.node().value);
      return Expr::unary(ExprOp::Neg, operand, pos);
    }
    if (peek().kind == Tok::Bang) {
      ++k_;
      return Expr::unary(ExprOp::Not, unary(), pos);
    }
    return primary();
  }

  Expr primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Number:
        ++k_;
        return Expr::constant(t.number);
      case Tok::LParen: {
        ++k_;
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Name: {
        ++k_;
        if (t.text == "true") return Expr::constant(1);
        if (t.text == "false") return Expr::constant(0);
        if (t.text == "imply" || t.text == "and" || t.text == "or" || t.text == "not")
          throw ParseError("unexpected keyword '" + t.text + "'", t.pos);
        if (peek().kind == Tok::LBracket) {
          ++k_;
          Expr index = expr();
          expect(Tok::RBracket, "']'");
          auto n = make(ExprOp::Index, t.pos);
          n->name = t.text;
          n->args.push_back(std::move(index));
          return Expr(std::move(n));
        }
        return Expr::ident(t.text, t.pos);
      }
      case Tok::End:
        throw ParseError("unexpected end of expression", t.pos);
      default:
        throw ParseError("unexpected token", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse_full(); }

std::vector<Assignment> parse_assignments(std::string_view text) {
  return Parser(text).parse_assignments();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Imply: return 1;
    case ExprOp::Or: return 2;
    case ExprOp::And: return 3;
    case ExprOp::Cond: return 5;
    case ExprOp::Eq:
    case ExprOp::Ne: return 6;
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge: return 7;
    case ExprOp::Add:
    case ExprOp::Sub: return 8;
    case ExprOp::Mul:
    case ExprOp::Div:
    case ExprOp::Mod: return 9;
    case ExprOp::Not:
    case ExprOp::Neg: return 10;
    default: return 11;
  }
}

const char* symbol(ExprOp op) {
  switch (op) {
    case ExprOp::Imply: return " imply ";
    case ExprOp::Or: return " || ";
    case ExprOp::And: return " && ";
    case ExprOp::Eq: return " == ";
    case ExprOp::Ne: return " != ";
    case ExprOp::Lt: return " < ";
    case ExprOp::Le: return " <= ";
    case ExprOp::Gt: return " > ";
    case ExprOp::Ge: return " >= ";
    case ExprOp::Add: return " + ";
    case ExprOp::Sub: return " - ";
    case ExprOp::Mul: return " * ";
    case ExprOp::Div: return " / ";
    case ExprOp::Mod: return " % ";
    default: return " ? ";
  }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool tight, std::string& out) {
  const int p = precedence(child.op());
  const bool paren = p < parent_prec || (tight && p == parent_prec);
  if (paren) out += '(';
  print(child, out);
  if (paren) out += ')';
}

void print(const Expr& e, std::string& out) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case ExprOp::Const:
      if (!n.name.empty())
        out += n.name;
      else
        out += std::to_string(n.value);
      return;
    case ExprOp::Ident:
    case ExprOp::Var:
    case ExprOp::Clock:
    case ExprOp::Location:
      out += n.name;
      return;
    case ExprOp::Index:
    case ExprOp::Table:
      out += n.name;
      out += '[';
      print(n.args[0], out);
      out += ']';
      return;
    case ExprOp::Not:
      out += '!';
      print_child(n.args[0], precedence(n.op), false, out);
      return;
    case ExprOp::Neg:
      out += '-';
      print_child(n.args[0], precedence(n.op), false, out);
      return;
    case ExprOp::Cond:
      print_child(n.args[0], precedence(n.op), true, out);
      out += " ? ";
      print(n.args[1], out);
      out += " : ";
      print_child(n.args[2], precedence(n.op), false, out);
      return;
    case ExprOp::Imply:
      print_child(n.args[0], precedence(n.op), true, out);
      out += symbol(n.op);
      print_child(n.args[1], precedence(n.op), false, out);
      return;
    default:
      print_child(n.args[0], precedence(n.op), false, out);
      out += symbol(n.op);
      print_child(n.args[1], precedence(n.op), true, out);
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  if (!e) return "true";
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Binding and analysis

Expr bind_symbols(const Expr& e, const Resolver& resolve) {
  const ExprNode& n = e.node();
  if (n.op == ExprOp::Ident || n.op == ExprOp::Index) {
    const auto sym = resolve(n.name);
    if (!sym) throw ParseError("unknown name '" + n.name + "'", n.pos);
    auto out = make(ExprOp::Const, n.pos);
    out->name = n.name;
    if (n.op == ExprOp::Index) {
      if (sym->kind != SymbolKind::Table)
        throw ParseError("'" + n.name + "' is not a table", n.pos);
      out->op = ExprOp::Table;
      out->a = sym->a;
      out->args.push_back(bind_symbols(n.args[0], resolve));
      return Expr(std::move(out));
    }
    switch (sym->kind) {
      case SymbolKind::Variable: out->op = ExprOp::Var; break;
      case SymbolKind::Clock: out->op = ExprOp::Clock; break;
      case SymbolKind::Location: out->op = ExprOp::Location; break;
      case SymbolKind::Constant: out->op = ExprOp::Const; break;
      case SymbolKind::Table:
        throw ParseError("table '" + n.name + "' used without an index", n.pos);
    }
    out->a = sym->a;
    out->b = sym->b;
    out->value = sym->value;
    return Expr(std::move(out));
  }
  if (n.args.empty()) return e;
  auto out = std::make_shared<ExprNode>(n);
  for (auto& arg : out->args) arg = bind_symbols(arg, resolve);
  return Expr(std::move(out));
}

bool mentions_clock(const Expr& e) {
  if (!e) return false;
  if (e.op() == ExprOp::Clock) return true;
  for (const auto& a : e.node().args)
    if (mentions_clock(a)) return true;
  return false;
}

bool mentions_location(const Expr& e) {
  if (!e) return false;
  if (e.op() == ExprOp::Location) return true;
  for (const auto& a : e.node().args)
    if (mentions_location(a)) return true;
  return false;
}

namespace {

// Matches `x` or `x - y` with clocks x, y.
std::optional<std::pair<ClockId, ClockId>> clock_term(const Expr& e) {
  if (e.op() == ExprOp::Clock) return std::make_pair(static_cast<ClockId>(e.node().a), ClockId{0});
  if (e.op() == ExprOp::Sub && e.arg(0).op() == ExprOp::Clock && e.arg(1).op() == ExprOp::Clock)
    return std::make_pair(static_cast<ClockId>(e.arg(0).node().a),
                          static_cast<ClockId>(e.arg(1).node().a));
  return std::nullopt;
}

ExprOp flip(ExprOp op) {
  switch (op) {
    case ExprOp::Lt: return ExprOp::Gt;
    case ExprOp::Le: return ExprOp::Ge;
    case ExprOp::Gt: return ExprOp::Lt;
    case ExprOp::Ge: return ExprOp::Le;
    default: return op;
  }
}

}  // namespace

std::optional<ClockAtom> match_clock_atom(const Expr& e) {
  if (!e) return std::nullopt;
  switch (e.op()) {
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Eq:
    case ExprOp::Ge:
    case ExprOp::Gt:
    case ExprOp::Ne:
      break;
    default:
      return std::nullopt;
  }
  const Expr& lhs = e.arg(0);
  const Expr& rhs = e.arg(1);
  if (auto t = clock_term(lhs); t && !mentions_clock(rhs))
    return ClockAtom{t->first, t->second, e.op(), rhs};
  if (auto t = clock_term(rhs); t && !mentions_clock(lhs))
    return ClockAtom{t->first, t->second, flip(e.op()), lhs};
  return std::nullopt;
}

std::vector<ClockConstraint> to_constraints(const ClockAtom& atom, std::int64_t k64) {
  const auto k = static_cast<std::int32_t>(k64);
  switch (atom.op) {
    case ExprOp::Lt: return {{atom.i, atom.j, Bound::lt(k)}};
    case ExprOp::Le: return {{atom.i, atom.j, Bound::le(k)}};
    case ExprOp::Gt: return {{atom.j, atom.i, Bound::lt(-k)}};
    case ExprOp::Ge: return {{atom.j, atom.i, Bound::le(-k)}};
    case ExprOp::Eq: return {{atom.i, atom.j, Bound::le(k)}, {atom.j, atom.i, Bound::le(-k)}};
    default: throw ModelError("clock disequality is not a convex constraint");
  }
}

std::vector<Expr> conjuncts(const Expr& e) {
  std::vector<Expr> out;
  if (!e) return out;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr top = stack.back();
    stack.pop_back();
    if (top.op() == ExprOp::And) {
      stack.push_back(top.arg(1));
      stack.push_back(top.arg(0));
    } else {
      out.push_back(top);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

std::int64_t eval(const Expr& e, const EvalEnv& env) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case ExprOp::Const:
      return n.value;
    case ExprOp::Var:
      return env.values[static_cast<std::size_t>(n.a)];
    case ExprOp::Clock:
      if (env.clocks.empty()) throw EvalError("clock predicates unsupported in queries");
      return env.clocks[static_cast<std::size_t>(n.a)];
    case ExprOp::Location:
      if (env.locations.empty()) throw EvalError("location '" + n.name + "' used outside a query");
      return env.locations[static_cast<std::size_t>(n.a)] == n.b ? 1 : 0;
    case ExprOp::Table: {
      const Table& t = env.tables[static_cast<std::size_t>(n.a)];
      const std::int64_t k = eval(n.args[0], env);
      if (k < 0 || static_cast<std::size_t>(k) >= t.size())
        throw EvalError("index " + std::to_string(k) + " out of range for table '" + n.name + "'");
      return t[static_cast<std::size_t>(k)];
    }
    case ExprOp::Ident:
    case ExprOp::Index:
      throw EvalError("unbound name '" + n.name + "'");
    case ExprOp::Not:
      return eval(n.args[0], env) == 0 ? 1 : 0;
    case ExprOp::Neg:
      return -eval(n.args[0], env);
    case ExprOp::And:
      return eval(n.args[0], env) != 0 && eval(n.args[1], env) != 0 ? 1 : 0;
    case ExprOp::Or:
      return eval(n.args[0], env) != 0 || eval(n.args[1], env) != 0 ? 1 : 0;
    case ExprOp::Imply:
      return eval(n.args[0], env) == 0 || eval(n.args[1], env) != 0 ? 1 : 0;
    case ExprOp::Cond:
      return eval(n.args[0], env) != 0 ? eval(n.args[1], env) : eval(n.args[2], env);
    default:
      break;
  }
  const std::int64_t l = eval(n.args[0], env);
  const std::int64_t r = eval(n.args[1], env);
  switch (n.op) {
    case ExprOp::Add: return l + r;
    case ExprOp::Sub: return l - r;
    case ExprOp::Mul: return l * r;
    case ExprOp::Div:
      if (r == 0) throw EvalError("division by zero");
      return l / r;
    case ExprOp::Mod:
      if (r == 0) throw EvalError("division by zero");
      return l % r;
    case ExprOp::Lt: return l < r;
    case ExprOp::Le: return l <= r;
    case ExprOp::Eq: return l == r;
    case ExprOp::Ne: return l != r;
    case ExprOp::Ge: return l >= r;
    case ExprOp::Gt: return l > r;
    default: throw EvalError("malformed expression");
  }
}

std::optional<std::int64_t> fold_constant(const Expr& e, std::span<const Table> tables) {
  if (!e) return std::nullopt;
  const ExprNode& n = e.node();
  if (n.op == ExprOp::Var || n.op == ExprOp::Clock || n.op == ExprOp::Location ||
      n.op == ExprOp::Ident || n.op == ExprOp::Index)
    return std::nullopt;
  if (n.op == ExprOp::Table && tables.empty()) return std::nullopt;
  for (const auto& a : n.args)
    if (!fold_constant(a, tables)) return std::nullopt;
  try {
    return eval(e, EvalEnv{{}, {}, tables, {}});
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

}  // namespace dtcv
