#include <gtest/gtest.h>

#include "test_support.hpp"
#include "usplit/prover.hpp"

namespace usplit {
namespace {

using namespace usplit::testing;

const Formula kAxiomK = parse("[](p0 -> p1) -> ([]p0 -> []p1)");

Budget small_budget(std::size_t candidates = 200) {
  Budget b;
  b.max_candidates = candidates;
  b.max_frame_size = 3;
  return b;
}

TEST(Match, Examples) {
  Substitution s;
  EXPECT_TRUE(match(parse("[]p0 -> p0"), parse("[](p1 & T) -> (p1 & T)"), s));
  EXPECT_EQ(s.at(0), parse("p1 & T"));
  Substitution t;
  EXPECT_FALSE(match(parse("[]p0 -> p0"), parse("[]p1 -> p2"), t));
  Substitution u;
  EXPECT_FALSE(match(parse("<>p0"), parse("[]p0"), u));
}

TEST(Match, RecoversRandomSubstitutions) {
  FormulaGen gen(17, 3);
  for (int i = 0; i < 300; ++i) {
    Formula pattern = gen(3);
    Substitution s{{0, gen(2)}, {1, gen(2)}, {2, gen(2)}};
    Formula target = substitute(pattern, s);
    Substitution found;
    ASSERT_TRUE(match(pattern, target, found));
    ASSERT_EQ(substitute(pattern, found), target);
  }
}

TEST(CandidateStream, IdentityThenDepthZeroSingletons) {
  Formula eps = jankov_formula(dead_end()).formula;
  detail::CandidateStream stream({eps}, dia(top()), 2);
  auto first = stream.next();
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(*first, std::vector<Formula>{eps});
  std::vector<Substitution> expected = {
      {{0, top()}, {1, top()}}, {{0, top()}, {1, bot()}}, {{0, bot()}, {1, top()}}, {{0, bot()}, {1, bot()}}};
  for (const auto& s : expected) {
    auto c = stream.next();
    ASSERT_TRUE(c.has_value());
    ASSERT_EQ(c->size(), 1u);
    EXPECT_EQ(c->front(), substitute(eps, s));
  }
  // then pairs of depth-0 instances
  auto pair = stream.next();
  ASSERT_TRUE(pair.has_value());
  EXPECT_EQ(pair->size(), 2u);
}

TEST(CandidateStream, EndsForVariableFreeAxioms) {
  detail::CandidateStream stream({dia(top())}, box(bot()), 2);
  std::size_t n = 0;
  while (stream.next()) ASSERT_LT(++n, 10u);
  EXPECT_EQ(n, 2u);  // the axiom itself, then the same axiom as a depth-0 singleton
}

TEST(CandidateStream, SubsetsAreDistinct) {
  detail::CandidateStream stream({parse("[]p0 -> p0")}, parse("p0"), 1);
  std::set<std::vector<Formula>> seen;
  for (int i = 0; i < 500; ++i) {
    auto c = stream.next();
    ASSERT_TRUE(c.has_value());
    if (i == 0) continue;
    std::vector<Formula> sorted = *c;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_TRUE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    ASSERT_TRUE(seen.insert(sorted).second);
  }
}

TEST(MembershipSemi, DiamondVerumGivesNotBoxFalsum) {
  Verdict v = membership_semi({dia(top())}, neg(box(bot())), small_budget());
  ASSERT_EQ(v.outcome, Outcome::Yes);
  auto cert = std::get<ProofCertificate>(v.witness);
  EXPECT_EQ(cert.prefix, 0u);
  EXPECT_EQ(cert.instances, std::vector<Formula>{dia(top())});
}

TEST(MembershipSemi, KAxiomFromNothing) {
  Verdict v = membership_semi({}, kAxiomK, small_budget());
  EXPECT_EQ(v.outcome, Outcome::Yes);
}

TEST(MembershipSemi, NeverSaysNo) {
  Verdict v = membership_semi({dia(top())}, box(bot()), small_budget(50));
  EXPECT_EQ(v.outcome, Outcome::Unknown);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(v.witness));
  EXPECT_LE(v.effort.proof_candidates, 50u);
}

TEST(MembershipSemi, NeedsAnInstance) {
  // []p0 -> p0 proves []p1 -> p1 only after renaming p0
  Verdict v = membership_semi({parse("[]p0 -> p0")}, parse("[]p1 -> p1"), small_budget());
  ASSERT_EQ(v.outcome, Outcome::Yes);
  auto cert = std::get<ProofCertificate>(v.witness);
  EXPECT_TRUE(verify_certificate({parse("[]p0 -> p0")}, parse("[]p1 -> p1"), cert));
}

TEST(FindJankovCountermodel, Examples) {
  EXPECT_EQ(find_jankov_countermodel({}, dia(top()), 3), dead_end());
  EXPECT_EQ(find_jankov_countermodel(JankovAxiomSet({dead_end()}), dia(top()), 4), std::nullopt);
  EXPECT_EQ(find_jankov_countermodel(JankovAxiomSet({dead_end()}), box(bot()), 3), reflexive_point());
}

// Frames validating eps(dead end) are serial and so validate []<>T.
TEST(FindJankovCountermodel, NoSerialFrameRefutesBoxDiamond) {
  JankovAxiomSet s({dead_end()});
  Formula f = parse("[]<>T");
  EXPECT_EQ(find_jankov_countermodel(s, f, 4), std::nullopt);
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& c : all_labeled_frames(n)) ASSERT_FALSE(is_jankov_countermodel(s, f, c));
}

TEST(FindJankovCountermodel, FirstWitnessIsMinimal) {
  JankovAxiomSet s({chain2()});
  Formula f = parse("[]<>T");
  auto b = find_jankov_countermodel(s, f, 3);
  ASSERT_TRUE(b.has_value());
  EXPECT_TRUE(validates_jankov_logic(*b, s));
  EXPECT_FALSE(validates(*b, f));
  for (std::size_t n = 1; n < b->size(); ++n)
    for (const auto& c : all_labeled_frames(n)) ASSERT_FALSE(is_jankov_countermodel(s, f, c));
}

TEST(MemberOfJankovLogic, DeadEndAxiomProvesDiamondVerum) {
  JankovAxiomSet s({dead_end()});
  Verdict v = member_of_jankov_logic(s, dia(top()), Budget{});
  ASSERT_EQ(v.outcome, Outcome::Yes);
  auto cert = std::get<ProofCertificate>(v.witness);
  EXPECT_EQ(cert.prefix, 0u);
  ASSERT_EQ(cert.instances.size(), 1u);
  EXPECT_EQ(cert.instances[0], substitute(s.formulas()[0], {{0, bot()}, {1, top()}}));
  EXPECT_TRUE(verify_membership(s, dia(top()), v));
}

TEST(MemberOfJankovLogic, BoxFalsumIsNotInKD) {
  JankovAxiomSet s({dead_end()});
  Verdict v = member_of_jankov_logic(s, box(bot()), Budget{});
  ASSERT_EQ(v.outcome, Outcome::No);
  EXPECT_EQ(std::get<FiniteFrame>(v.witness), reflexive_point());
  EXPECT_TRUE(verify_membership(s, box(bot()), v));
}

TEST(MemberOfJankovLogic, BoxDiamondVerumIsInKD) {
  JankovAxiomSet s({dead_end()});
  Verdict v = member_of_jankov_logic(s, parse("[]<>T"), Budget{});
  ASSERT_EQ(v.outcome, Outcome::Yes);
  EXPECT_TRUE(verify_membership(s, parse("[]<>T"), v));
}

TEST(MemberOfJankovLogic, EmptySetIsK) {
  Verdict yes = member_of_jankov_logic({}, kAxiomK, Budget{});
  ASSERT_EQ(yes.outcome, Outcome::Yes);
  EXPECT_TRUE(verify_membership({}, kAxiomK, yes));
  Verdict no = member_of_jankov_logic({}, parse("[]p0 -> p0"), Budget{});
  ASSERT_EQ(no.outcome, Outcome::No);
  EXPECT_EQ(std::get<FiniteFrame>(no.witness), dead_end());
}

TEST(MemberOfJankovLogic, AlternatesStrictly) {
  MembershipSearch search(JankovAxiomSet({chain2()}), box(bot()), small_budget(1000));
  for (int i = 0; i < 6 && !search.done(); ++i) {
    search.step();
    const Effort& e = search.verdict().effort;
    ASSERT_LE(e.proof_candidates - std::min(e.proof_candidates, e.countermodel_frames), 1u);
  }
}

TEST(MemberOfJankovLogic, ExclusiveAcrossBudgets) {
  std::vector<JankovAxiomSet> sets = {JankovAxiomSet(), JankovAxiomSet({dead_end()}), JankovAxiomSet({chain2()})};
  std::vector<Formula> fs = {top(), bot(), dia(top()), box(bot()), parse("[]<>T"), neg(box(bot())), kAxiomK};
  for (const auto& s : sets)
    for (const auto& f : fs) {
      bool yes = false, no = false;
      for (std::size_t c : {1u, 5u, 40u, 300u}) {
        Verdict v = member_of_jankov_logic(s, f, small_budget(c));
        yes = yes || v.outcome == Outcome::Yes;
        no = no || v.outcome == Outcome::No;
        ASSERT_TRUE(verify_membership(s, f, v)) << to_string(f);
      }
      EXPECT_FALSE(yes && no) << to_string(f);
    }
}

TEST(VerifyCertificate, RejectsTampering) {
  JankovAxiomSet s({dead_end()});
  Verdict v = member_of_jankov_logic(s, dia(top()), Budget{});
  auto cert = std::get<ProofCertificate>(v.witness);
  ProofCertificate foreign = cert;
  foreign.instances.push_back(box(bot()));
  EXPECT_FALSE(verify_certificate(s.formulas(), dia(top()), foreign));
  ProofCertificate wrong_goal = cert;
  EXPECT_FALSE(verify_certificate(s.formulas(), box(bot()), wrong_goal));
  ProofCertificate empty{0, {}};
  EXPECT_FALSE(verify_certificate(s.formulas(), dia(top()), empty));
}

}  // namespace
}  // namespace usplit
