#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "usplit/algebra.hpp"

namespace usplit {
namespace {

using namespace usplit::testing;

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(DualAlgebra(chain3()), top(), {}), full_set(3));
  EXPECT_EQ(evaluate(DualAlgebra(dead_end()), dia(top()), {}), 0u);
  // only the dead end d (point 1) satisfies []<>T
  EXPECT_EQ(evaluate(DualAlgebra(loop_with_dead_end()), parse("[]<>T"), {}), singleton(1));
}

TEST(Evaluate, UncoveredVariable) {
  EXPECT_THROW(evaluate(DualAlgebra(dead_end()), var(3), {{0, 1}}), std::invalid_argument);
}

TEST(Evaluate, BoxIsDualOfDiamond) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& f : all_labeled_frames(n)) {
      DualAlgebra alg(f);
      for (PointSet a : alg.carrier()) ASSERT_EQ(alg.box(a), alg.complement(alg.diamond(alg.complement(a))));
    }
}

TEST(Validates, Examples) {
  EXPECT_TRUE(validates(dead_end(), box(bot())));
  EXPECT_FALSE(validates(loop_with_dead_end(), parse("[]<>T")));
  EXPECT_TRUE(validates(reflexive_point(), dia(top())));
  EXPECT_TRUE(validates(chain3(), parse("[](p0 -> p1) -> ([]p0 -> []p1)")));
  EXPECT_FALSE(validates(chain2(), parse("[]p0 -> p0")));
  EXPECT_TRUE(validates(reflexive_point(), parse("[]p0 -> p0")));
}

TEST(Validates, SatisfiabilityRouteAgreesWithEnumeration) {
  FormulaGen gen(21, 3);
  auto frames = all_labeled_frames(2);
  std::mt19937 rng(4);
  auto three = all_labeled_frames(3);
  for (int i = 0; i < 30; ++i) frames.push_back(three[rng() % three.size()]);
  for (int i = 0; i < 150; ++i) {
    Formula f = gen(4);
    detail::Program prog(f);
    for (const auto& fr : frames) {
      auto brute = detail::refute_by_enumeration(fr, prog);
      auto sat = detail::refute_by_sat(fr, prog);
      ASSERT_EQ(brute.has_value(), sat.has_value()) << to_string(f);
      if (sat) {
        Valuation v = *sat;
        for (VarIndex x : variables(f)) v.try_emplace(x, 0);
        ASSERT_NE(evaluate(DualAlgebra(fr), f, v), fr.points()) << to_string(f);
      }
    }
  }
}

TEST(FiniteHeight, Examples) {
  EXPECT_EQ(finite_height(DualAlgebra(dead_end())), 1u);
  EXPECT_EQ(finite_height(DualAlgebra(reflexive_point())), std::nullopt);
  EXPECT_EQ(finite_height(DualAlgebra(chain2())), 2u);
  EXPECT_EQ(height(DualAlgebra(dead_end())), 0u);
  EXPECT_EQ(height(DualAlgebra(chain3())), 2u);
}

TEST(FiniteHeight, ChainOfBoxesStabilizesWithinCarrier) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& f : all_labeled_frames(n)) {
      DualAlgebra alg(f);
      const std::size_t card = std::size_t{1} << n;
      PointSet prev = 0;
      bool stable = false;
      for (std::size_t k = 1; k < card; ++k) {
        PointSet cur = alg.box_n(k, 0);
        ASSERT_TRUE(alg.leq(prev, cur));
        if (stable) {
          ASSERT_EQ(cur, prev);
        }
        stable = stable || cur == prev;
        prev = cur;
      }
      ASSERT_EQ(alg.box_n(card, 0), alg.box_n(card - 1, 0));
    }
}

TEST(FiniteHeight, PresentIffCycleFree) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& f : all_labeled_frames(n))
      ASSERT_EQ(finite_height(DualAlgebra(f)).has_value(), is_cycle_free(f));
}

/// The opremum condition read literally: some c != 1 such that for every
/// a != 1 there is n < |A| with box^{<=n} a <= c.
bool has_opremum_by_definition(const DualAlgebra& alg) {
  const std::size_t card = std::size_t{1} << alg.points();
  for (PointSet c = 0; c < alg.one(); ++c) {
    bool all = true;
    for (PointSet a = 0; all && a < alg.one(); ++a) {
      bool some = false;
      for (std::size_t n = 0; !some && n < card; ++n) some = alg.leq(alg.box_leq(n, a), c);
      all = some;
    }
    if (all) return true;
  }
  return false;
}

TEST(SubdirectlyIrreducible, Examples) {
  EXPECT_TRUE(is_subdirectly_irreducible(DualAlgebra(dead_end())));
  EXPECT_EQ(opremum(DualAlgebra(dead_end())), 0u);
  EXPECT_FALSE(is_subdirectly_irreducible(DualAlgebra(two_isolated_dead_ends())));
  EXPECT_FALSE(has_opremum_by_definition(DualAlgebra(two_isolated_dead_ends())));
  EXPECT_TRUE(is_subdirectly_irreducible(DualAlgebra(loop_with_dead_end())));
}

TEST(SubdirectlyIrreducible, MatchesDefinitionOnSmallFrames) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& f : all_labeled_frames(n))
      ASSERT_EQ(is_subdirectly_irreducible(DualAlgebra(f)), has_opremum_by_definition(DualAlgebra(f)));
}

TEST(SubdirectlyIrreducible, IffRooted) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& f : all_labeled_frames(n)) ASSERT_EQ(is_subdirectly_irreducible(DualAlgebra(f)), is_rooted(f));
}

TEST(EmbedsIntoSiImage, Examples) {
  EXPECT_TRUE(embeds_into_si_image(dead_end(), loop_with_dead_end()));
  EXPECT_FALSE(embeds_into_si_image(dead_end(), reflexive_point()));
  EXPECT_TRUE(embeds_into_si_image(chain3(), chain3()));
  EXPECT_THROW(embeds_into_si_image(two_isolated_dead_ends(), chain2()), std::invalid_argument);
}

// A surjective p-morphism g -> h dualizes to an embedding of h's algebra into
// g's (preimage). Finite height of the subalgebra must carry over.
TEST(HeightReflection, SubalgebraOfFiniteHeight) {
  auto frames = all_labeled_frames(1);
  for (auto& f : all_labeled_frames(2)) frames.push_back(f);
  for (auto& f : all_labeled_frames(3)) frames.push_back(f);
  std::size_t checked = 0;
  for (const auto& g : frames) {
    for (const auto& h : frames) {
      if (h.size() > g.size()) continue;
      auto m = find_surjective_p_morphism(g, h);
      if (!m) continue;
      DualAlgebra big(g), small(h);
      auto embed = [&](PointSet b) {
        PointSet out = 0;
        for (std::size_t x = 0; x < g.size(); ++x)
          if ((b >> m->map[x]) & 1u) out |= singleton(x);
        return out;
      };
      for (PointSet b : small.carrier()) {
        ASSERT_EQ(embed(small.diamond(b)), big.diamond(embed(b)));
        ASSERT_EQ(embed(small.complement(b)), big.complement(embed(b)));
      }
      if (finite_height(small)) {
        ASSERT_TRUE(finite_height(big).has_value());
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(FrameModel, FromTree) {
  tableau::TreeModel tree;
  tree.worlds = {{{0}, {1}}, {{}, {}}};
  FrameModel m = to_frame_model(tree);
  EXPECT_EQ(m.frame, chain2());
  EXPECT_EQ(m.valuation.at(0), singleton(0));
}

}  // namespace
}  // namespace usplit
