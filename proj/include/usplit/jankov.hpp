#ifndef USPLIT_JANKOV_HPP
#define USPLIT_JANKOV_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "usplit/algebra.hpp"
#include "usplit/formula.hpp"
#include "usplit/frame.hpp"

namespace usplit {

/// Jankov formula of the dual algebra of a rooted cycle-free frame.
struct JankovAxiom {
  FiniteFrame frame;
  Formula formula;
  /// n with A |= box^{n+1} bot.
  std::size_t height = 0;
};

/// Largest frame whose Jankov formula we build: p_a ranges over 2^points
/// variables and the join clauses over all ordered pairs of elements.
inline constexpr std::size_t kMaxJankovPoints = 6;

inline void require_jankov_frame(const FiniteFrame& a, const char* who) {
  if (!is_rooted(a)) throw std::invalid_argument(std::string(who) + ": frame is not rooted");
  if (!is_cycle_free(a)) throw std::invalid_argument(std::string(who) + ": frame is not cycle-free");
}

/// Builds
///   (box^{n+1} bot & box^{<=n} /\Gamma) -> \/ { box^{<=n} p_a : a != 1 }
/// where Gamma is the diagram of the algebra:
///   p_{a v b} <-> (p_a | p_b),  p_{-a} <-> ~p_a,  <>p_a <-> p_{<>a}.
/// The variable standing for element a has index equal to a's bit pattern.
/// Meets are definable from joins and complements, so no meet clauses.
inline JankovAxiom jankov_formula(const FiniteFrame& a) {
  require_jankov_frame(a, "jankov_formula");
  if (a.size() > kMaxJankovPoints) throw std::invalid_argument("jankov_formula: frame too large");
  DualAlgebra alg(a);
  std::size_t n = *height(alg);
  auto p = [](PointSet x) { return var(static_cast<VarIndex>(x)); };
  const std::vector<PointSet> elements = alg.carrier();

  std::vector<Formula> gamma;
  for (PointSet x : elements)
    for (PointSet y : elements) gamma.push_back(iff(p(alg.join(x, y)), disj(p(x), p(y))));
  for (PointSet x : elements) gamma.push_back(iff(p(alg.complement(x)), neg(p(x))));
  for (PointSet x : elements) gamma.push_back(iff(dia(p(x)), p(alg.diamond(x))));

  std::vector<Formula> delta;
  for (PointSet x : elements)
    if (x != alg.one()) delta.push_back(box_leq(n, p(x)));

  Formula premise = conj(box_n(n + 1, bot()), box_leq(n, big_conj(gamma)));
  return {a, imp(premise, big_disj(delta)), n};
}

/// B refutes the Jankov formula of A, decided structurally: A's dual embeds
/// into an s.i. homomorphic image of B's dual.
inline bool refutes_jankov(const FiniteFrame& b, const FiniteFrame& a) {
  require_jankov_frame(a, "refutes_jankov");
  return embeds_into_si_image(a, b);
}

/// A finite set of rooted cycle-free frames, kept in canonical form,
/// deduplicated up to isomorphism and sorted in enumeration order. Stands
/// for the logic K + { eps(A) : A in the set }; the empty set is K.
class JankovAxiomSet {
 public:
  JankovAxiomSet() = default;

  explicit JankovAxiomSet(const std::vector<FiniteFrame>& frames) {
    for (const auto& f : frames) insert(f);
  }

  void insert(const FiniteFrame& f) {
    require_jankov_frame(f, "JankovAxiomSet");
    FiniteFrame c = canonical_form(f);
    auto pos = std::lower_bound(frames_.begin(), frames_.end(), c, canonical_less);
    if (pos != frames_.end() && *pos == c) return;
    frames_.insert(pos, std::move(c));
  }

  const std::vector<FiniteFrame>& frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }

  std::size_t total_points() const {
    std::size_t n = 0;
    for (const auto& f : frames_) n += f.size();
    return n;
  }

  std::size_t max_points() const {
    std::size_t n = 0;
    for (const auto& f : frames_) n = std::max(n, f.size());
    return n;
  }

  /// Jankov formulas in set order; each uses its own p_a indexing.
  std::vector<Formula> formulas() const {
    std::vector<Formula> out;
    for (const auto& f : frames_) out.push_back(jankov_formula(f).formula);
    return out;
  }

  /// One formula axiomatizing the same logic: the conjunction of the
  /// Jankov formulas with variables of the i-th one shifted past those of
  /// the earlier ones, so that no two formulas share a variable.
  Formula conjunction() const {
    std::vector<Formula> parts;
    VarIndex offset = 0;
    for (const auto& f : frames_) {
      Formula eps = jankov_formula(f).formula;
      Substitution shift;
      for (VarIndex v : variables(eps)) shift[v] = var(v + offset);
      parts.push_back(substitute(eps, shift));
      offset += static_cast<VarIndex>(std::size_t{1} << f.size());
    }
    return big_conj(parts);
  }

  friend bool operator==(const JankovAxiomSet&, const JankovAxiomSet&) = default;

 private:
  std::vector<FiniteFrame> frames_;
};

/// eps(B) is a theorem of the logic of s: B refutes the Jankov formula of
/// some member of s.
inline bool jankov_member(const FiniteFrame& b, const JankovAxiomSet& s) {
  require_jankov_frame(b, "jankov_member");
  return std::any_of(s.frames().begin(), s.frames().end(), [&](const FiniteFrame& a) { return refutes_jankov(b, a); });
}

/// B validates every axiom of s.
inline bool validates_jankov_logic(const FiniteFrame& b, const JankovAxiomSet& s) {
  return std::none_of(s.frames().begin(), s.frames().end(), [&](const FiniteFrame& a) { return refutes_jankov(b, a); });
}

/// The two axiom sets axiomatize the same logic.
inline bool jankov_logic_equal(const JankovAxiomSet& s, const JankovAxiomSet& t) {
  auto covered = [](const JankovAxiomSet& from, const JankovAxiomSet& by) {
    return std::all_of(from.frames().begin(), from.frames().end(),
                       [&](const FiniteFrame& a) { return jankov_member(a, by); });
  };
  return covered(s, t) && covered(t, s);
}

}  // namespace usplit

#endif  // USPLIT_JANKOV_HPP
