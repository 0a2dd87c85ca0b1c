#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "usplit/algebra.hpp"
#include "usplit/tableau.hpp"

namespace usplit {
namespace {

using namespace usplit::testing;

TEST(KTheorem, Examples) {
  EXPECT_TRUE(is_k_theorem(parse("[](p0 -> p1) -> ([]p0 -> []p1)")));
  EXPECT_TRUE(is_k_theorem(parse("p0 | ~p0")));
  EXPECT_TRUE(is_k_theorem(parse("[]T")));
  EXPECT_TRUE(is_k_theorem(parse("<>p0 <-> ~[]~p0")));
  EXPECT_TRUE(is_k_theorem(parse("[](p0 & p1) <-> ([]p0 & []p1)")));
  EXPECT_FALSE(is_k_theorem(parse("[]p0 -> p0")));
  EXPECT_FALSE(is_k_theorem(parse("<>T")));
  EXPECT_FALSE(is_k_theorem(parse("[]<>T")));
  EXPECT_FALSE(is_k_theorem(parse("[]p0 -> [][]p0")));
  EXPECT_FALSE(is_k_theorem(parse("<>(p0 | p1) -> <>p0")));
}

TEST(KTheorem, ArenaSharesSubformulas) {
  tableau::Arena arena;
  int a = arena.intern(parse("[]p0 & []p0"));
  int b = arena.intern(parse("[]p0"));
  EXPECT_LT(b, a);
  EXPECT_EQ(arena.intern(parse("[]p0")), b);
}

/// The countermodel really refutes the formula at its root.
void expect_genuine_countermodel(const Formula& f) {
  auto tree = tableau::k_countermodel(f);
  ASSERT_TRUE(tree.has_value()) << to_string(f);
  FrameModel m = to_frame_model(*tree);
  Valuation v = m.valuation;
  for (VarIndex x : variables(f)) v.try_emplace(x, 0);
  EXPECT_FALSE((evaluate(DualAlgebra(m.frame), f, v) >> 0) & 1u) << to_string(f);
}

TEST(KCountermodel, Examples) {
  expect_genuine_countermodel(parse("[]p0 -> p0"));
  expect_genuine_countermodel(parse("[]<>T"));
  expect_genuine_countermodel(parse("<>p0 & <>p1 -> <>(p0 & p1)"));
  EXPECT_FALSE(tableau::k_countermodel(parse("[]T")).has_value());
}

TEST(KTheorem, AgreesWithFrameSemantics) {
  FormulaGen gen(99, 2);
  std::mt19937 rng(3);
  auto frames = all_labeled_frames(2);
  auto three = all_labeled_frames(3);
  for (int i = 0; i < 40; ++i) frames.push_back(three[rng() % three.size()]);
  std::size_t theorems = 0, non_theorems = 0;
  for (int i = 0; i < 400; ++i) {
    Formula f = gen(4);
    bool thm = is_k_theorem(f);
    if (thm) {
      ++theorems;
      for (const auto& fr : frames) ASSERT_TRUE(validates(fr, f)) << to_string(f);
    } else {
      ++non_theorems;
      expect_genuine_countermodel(f);
    }
  }
  EXPECT_GT(theorems, 10u);
  EXPECT_GT(non_theorems, 10u);
}

TEST(KTheorem, Substitution) {
  // instances of theorems are theorems
  Formula k = parse("[](p0 -> p1) -> ([]p0 -> []p1)");
  FormulaGen gen(5, 2);
  for (int i = 0; i < 50; ++i) ASSERT_TRUE(is_k_theorem(substitute(k, {{0, gen(3)}, {1, gen(3)}})));
}

}  // namespace
}  // namespace usplit
