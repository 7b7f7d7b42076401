#include <gtest/gtest.h>

#include "dtcv/error.hpp"
#include "dtcv/expr.hpp"

namespace dtcv {
namespace {

std::int64_t value_of(std::string_view text) {
  const auto v = fold_constant(parse_expr(text));
  EXPECT_TRUE(v.has_value()) << text;
  return v.value_or(-999);
}

TEST(Expr, Precedence) {
  EXPECT_EQ(value_of("1 + 2 * 3"), 7);
  EXPECT_EQ(value_of("(1 + 2) * 3"), 9);
  EXPECT_EQ(value_of("10 - 4 - 3"), 3);
  EXPECT_EQ(value_of("7 / 2"), 3);
  EXPECT_EQ(value_of("7 % 3"), 1);
  EXPECT_EQ(value_of("-3 + 5"), 2);
  EXPECT_EQ(value_of("1 < 2 && 3 >= 3"), 1);
  EXPECT_EQ(value_of("0 || 1 && 0"), 0);
  EXPECT_EQ(value_of("!(1 == 2)"), 1);
  EXPECT_EQ(value_of("0 imply 0"), 1);
  EXPECT_EQ(value_of("1 imply 0"), 0);
  EXPECT_EQ(value_of("(2 > 1) ? 10 : 20"), 10);
  EXPECT_EQ(value_of("not 0 and 1"), 1);
  EXPECT_EQ(value_of("true or false"), 1);
}

TEST(Expr, RoundTripsThroughText) {
  for (const char* text : {"a + b * c", "!(x <= 3) && y == 2", "Lamp.bright || v != 0",
                           "(c == 1) ? t[i + 1] : 0", "a - (b - c)", "x - y < 4 imply z"}) {
    const Expr e = parse_expr(text);
    EXPECT_EQ(parse_expr(to_string(e)), e) << text << " -> " << to_string(e);
  }
}

TEST(Expr, ParseErrorsCarryOffsets) {
  try {
    parse_expr("a + * b");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse_expr("(a + b"), ParseError);
  EXPECT_THROW(parse_expr("a b"), ParseError);
  EXPECT_THROW(parse_expr(""), ParseError);
}

TEST(Expr, Assignments) {
  const auto as = parse_assignments("x = 0, v := v + 1");
  ASSERT_EQ(as.size(), 2u);
  EXPECT_EQ(as[0].target, "x");
  EXPECT_EQ(as[1].target, "v");
  EXPECT_EQ(to_string(as[1].value), to_string(parse_expr("v + 1")));
  EXPECT_TRUE(parse_assignments("").empty());
  EXPECT_THROW(parse_assignments("x + 1"), ParseError);
}

TEST(Expr, BindingResolvesOrRejects) {
  const Resolver r = [](const std::string& name) -> std::optional<Symbol> {
    if (name == "v") return Symbol{SymbolKind::Variable, 0, -1, 0};
    if (name == "K") return Symbol{SymbolKind::Constant, -1, -1, 5};
    if (name == "x") return Symbol{SymbolKind::Clock, 1, -1, 0};
    return std::nullopt;
  };
  const Expr e = bind_symbols(parse_expr("v + K"), r);
  const std::vector<std::int64_t> values{3};
  EXPECT_EQ(eval(e, EvalEnv{values, {}, {}, {}}), 8);
  EXPECT_THROW(bind_symbols(parse_expr("w + 1"), r), ParseError);
  const Expr g = bind_symbols(parse_expr("x <= K && v == 3"), r);
  EXPECT_TRUE(mentions_clock(g));
  const auto parts = conjuncts(g);
  ASSERT_EQ(parts.size(), 2u);
  const auto atom = match_clock_atom(parts[0]);
  ASSERT_TRUE(atom.has_value());
  EXPECT_EQ(atom->i, 1u);
  EXPECT_EQ(atom->op, ExprOp::Le);
  EXPECT_FALSE(match_clock_atom(parts[1]).has_value());
}

TEST(Expr, ClockAtomsBecomeConstraints) {
  ClockAtom ge{1, 0, ExprOp::Ge, Expr::constant(2)};
  const auto cs = to_constraints(ge, 2);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].i, 0u);
  EXPECT_EQ(cs[0].j, 1u);
  EXPECT_EQ(cs[0].bound, Bound::le(-2));
  ClockAtom eq{1, 0, ExprOp::Eq, Expr::constant(3)};
  EXPECT_EQ(to_constraints(eq, 3).size(), 2u);
}

TEST(Expr, EvalErrors) {
  EXPECT_THROW(eval(parse_expr("1 / 0"), EvalEnv{}), EvalError);
}

}  // namespace
}  // namespace dtcv
