#include <gtest/gtest.h>

#include "test_support.hpp"
#include "usplit/formula.hpp"

namespace usplit {
namespace {

TEST(Parse, DiamondVerum) { EXPECT_EQ(parse("<>T"), dia(top())); }

TEST(Parse, BoxDiamondVerum) { EXPECT_EQ(parse("[]<>T"), box(dia(top()))); }

TEST(Parse, IncompleteInputIsAnError) {
  try {
    parse("p0 ->");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
}

TEST(Parse, RejectsGarbage) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("p"), ParseError);
  EXPECT_THROW(parse("(p0"), ParseError);
  EXPECT_THROW(parse("p0 p1"), ParseError);
  EXPECT_THROW(parse("q0"), ParseError);
  EXPECT_THROW(parse("p0 &"), ParseError);
}

TEST(Parse, Precedence) {
  Formula p0 = var(0), p1 = var(1), p2 = var(2);
  EXPECT_EQ(parse("p0 & p1 | p2"), disj(conj(p0, p1), p2));
  EXPECT_EQ(parse("p0 | p1 & p2"), disj(p0, conj(p1, p2)));
  EXPECT_EQ(parse("p0 -> p1 -> p2"), imp(p0, imp(p1, p2)));
  EXPECT_EQ(parse("p0 -> p1 <-> p2"), iff(imp(p0, p1), p2));
  EXPECT_EQ(parse("~p0 & []p1"), conj(neg(p0), box(p1)));
  EXPECT_EQ(parse("~[]<>p0"), neg(box(dia(p0))));
  EXPECT_EQ(parse("p0 & p1 & p2"), conj(conj(p0, p1), p2));
}

TEST(Parse, UnicodeAliases) {
  EXPECT_EQ(parse("□◇⊤"), parse("[]<>T"));
  EXPECT_EQ(parse("¬p0 ∧ p1 ∨ ⊥ → p2 ↔ p3"), parse("~p0 & p1 | F -> p2 <-> p3"));
}

TEST(Print, ParenthesizesNestedBinaries) {
  EXPECT_EQ(to_string(imp(conj(var(0), var(1)), var(2))), "(p0 & p1) -> p2");
  EXPECT_EQ(to_string(neg(disj(var(0), top()))), "~(p0 | T)");
  EXPECT_EQ(to_string(box(dia(top()))), "[]<>T");
}

TEST(Formula, RoundTripProperty) {
  testing::FormulaGen gen(7, 4);
  for (int i = 0; i < 2000; ++i) {
    Formula f = gen(5);
    ASSERT_EQ(parse(to_string(f)), f) << to_string(f);
  }
}

TEST(BoxLeq, Unfolding) {
  Formula p0 = var(0);
  EXPECT_EQ(box_leq(0, p0), p0);
  EXPECT_EQ(box_leq(2, p0), conj(p0, conj(box(p0), box(box(p0)))));
  EXPECT_EQ(box_leq(1, bot()), conj(bot(), box(bot())));
}

TEST(BoxLeq, AddsModalDepth) {
  testing::FormulaGen gen(11);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen(4);
    for (std::size_t n = 0; n < 4; ++n) ASSERT_EQ(modal_depth(box_leq(n, f)), modal_depth(f) + n);
  }
}

TEST(Substitute, Examples) {
  EXPECT_EQ(substitute(conj(var(0), var(1)), {{0, top()}}), conj(top(), var(1)));
  EXPECT_EQ(substitute(box(var(0)), {{0, dia(var(0))}}), box(dia(var(0))));
  EXPECT_EQ(substitute(var(0), {}), var(0));
}

TEST(Substitute, IsSimultaneous) {
  Substitution swap{{0, var(1)}, {1, var(0)}};
  EXPECT_EQ(substitute(imp(var(0), var(1)), swap), imp(var(1), var(0)));
}

TEST(Substitute, ComposesProperty) {
  testing::FormulaGen gen(3, 3);
  for (int i = 0; i < 500; ++i) {
    Formula f = gen(4);
    Substitution s{{0, gen(2)}, {2, gen(2)}};
    Substitution t{{1, gen(2)}, {2, gen(1)}};
    ASSERT_EQ(substitute(substitute(f, s), t), substitute(f, compose(s, t)));
  }
}

TEST(ModalDepth, Examples) {
  EXPECT_EQ(modal_depth(var(0)), 0u);
  EXPECT_EQ(modal_depth(box(dia(top()))), 2u);
  EXPECT_EQ(modal_depth(box_leq(3, var(0))), 3u);
}

TEST(Formula, StructuralEqualityAndOrder) {
  Formula a = parse("[](p0 -> p1)");
  Formula b = box(imp(var(0), var(1)));
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a < b);
  EXPECT_FALSE(b < a);
  EXPECT_NE(a, parse("[](p1 -> p0)"));
  EXPECT_EQ(variables(parse("p3 & []p1 | p3")), (std::set<VarIndex>{1, 3}));
}

}  // namespace
}  // namespace usplit
