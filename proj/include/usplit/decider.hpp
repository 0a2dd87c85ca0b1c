#ifndef USPLIT_DECIDER_HPP
#define USPLIT_DECIDER_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "usplit/algebra.hpp"
#include "usplit/formula.hpp"
#include "usplit/frame.hpp"
#include "usplit/jankov.hpp"
#include "usplit/prover.hpp"

namespace usplit {

/// Where an exhausted union-splitting search stopped. Feeding it back makes
/// the next run skip the NEG frames already rejected and the POS sets already
/// refuted; sets whose membership was still open are searched again.
struct SearchCursor {
  std::size_t neg_examined = 0;
  std::size_t pos_opened = 0;
  std::vector<std::size_t> pos_pending;
  friend bool operator==(const SearchCursor&, const SearchCursor&) = default;
};

struct UnionSplittingResult {
  Verdict verdict;
  std::optional<JankovAxiomSet> axiomatization;
  /// Proof that f lies in the logic of the axiomatization.
  std::optional<ProofCertificate> certificate;
  std::optional<FiniteFrame> counterexample;
  SearchCursor cursor;
};

/// c refutes f while every rooted cycle-free generated subframe of c
/// validates f. Such a c shows K + f is not a union-splitting.
inline bool is_neg_witness(const Formula& f, const FiniteFrame& c) {
  if (validates(c, f)) return false;
  auto subs = rooted_cycle_free_generated_subframes(c);
  return std::all_of(subs.begin(), subs.end(), [&](const FiniteFrame& g) { return validates(g, f); });
}

namespace detail {

/// Rooted cycle-free frames up to max_size in enumeration order, computed once
/// per bound.
inline const std::vector<FiniteFrame>& rooted_cycle_free_frames(std::size_t max_size) {
  static std::mutex lock;
  static std::map<std::size_t, std::vector<FiniteFrame>> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(max_size);
  if (it == cache.end()) it = cache.emplace(max_size, enumerate_frames(max_size, FrameFilter::RootedCycleFree)).first;
  return it->second;
}

/// Finite sets of rooted cycle-free frames refuting f, ordered by total
/// points, then number of frames, then lexicographically by position in
/// enumeration order. Sets with a member refuting the Jankov formula of
/// another member are skipped: that member is redundant and the smaller set
/// came earlier.
class AxiomSetStream {
 public:
  AxiomSetStream(const Formula& f, std::size_t max_frame_size) {
    for (const auto& a : rooted_cycle_free_frames(max_frame_size)) {
      if (validates(a, f)) continue;
      total_ += a.size();
      frames_.push_back(a);
    }
  }

  /// Next set as indices into frames(), or nullopt when none are left.
  std::optional<std::vector<std::size_t>> next() {
    if (!started_) {
      started_ = true;
      return seq_;
    }
    while (true) {
      if (!seq_.empty() && successor()) return seq_;
      if (!advance_shape()) return std::nullopt;
      seq_.assign(count_, 0);
      if (complete(0, 0, total_points_)) return seq_;
    }
  }

  const std::vector<FiniteFrame>& frames() const { return frames_; }

 private:
  bool advance_shape() {
    while (true) {
      if (count_ < std::min(total_points_, frames_.size())) {
        ++count_;
      } else {
        ++total_points_;
        count_ = 1;
        if (total_points_ > total_) return false;
      }
      if (count_ <= frames_.size()) return true;
    }
  }

  bool redundant(std::size_t i, std::size_t j) {
    auto key = std::minmax(i, j);
    auto it = redundant_.find(key);
    if (it != redundant_.end()) return it->second;
    bool r = refutes_jankov(frames_[i], frames_[j]) || refutes_jankov(frames_[j], frames_[i]);
    redundant_.emplace(key, r);
    return r;
  }

  /// Lexicographically least completion of seq_[pos..] from index start on.
  bool complete(std::size_t pos, std::size_t start, std::size_t remaining) {
    const std::size_t left = count_ - pos;
    if (left == 0) return remaining == 0;
    for (std::size_t j = start; j < frames_.size(); ++j) {
      const std::size_t s = frames_[j].size();
      if (s * left > remaining) break;  // sizes only grow along the list
      if (left == 1 && s != remaining) continue;
      bool clash = false;
      for (std::size_t q = 0; q < pos && !clash; ++q) clash = redundant(seq_[q], j);
      if (clash) continue;
      seq_[pos] = j;
      if (complete(pos + 1, j + 1, remaining - s)) return true;
    }
    return false;
  }

  bool successor() {
    for (std::size_t p = count_; p-- > 0;) {
      std::size_t used = 0;
      for (std::size_t q = 0; q < p; ++q) used += frames_[seq_[q]].size();
      if (complete(p, seq_[p] + 1, total_points_ - used)) return true;
    }
    return false;
  }

  std::vector<FiniteFrame> frames_;
  std::size_t total_ = 0;
  std::size_t total_points_ = 0;
  std::size_t count_ = 0;
  bool started_ = false;
  std::vector<std::size_t> seq_;
  std::map<std::pair<std::size_t, std::size_t>, bool> redundant_;
};

}  // namespace detail

/// Dovetails the POS search (axiom sets whose logic contains f) with the NEG
/// search (frames violating the union-splitting characterization), one tick
/// each in turn. Each POS tick opens the next set and advances every open
/// membership search by one step. Once a yes appears, searches on earlier
/// sets keep running so that the earliest set proving f is reported.
inline UnionSplittingResult is_union_splitting(const Formula& f, const Budget& budget,
                                               const SearchCursor& resume = {}) {
  require_valid_budget(budget);
  UnionSplittingResult out;
  Effort& effort = out.verdict.effort;

  struct Open {
    std::size_t ordinal;
    std::unique_ptr<MembershipSearch> search;
  };
  std::vector<Open> open;
  detail::AxiomSetStream sets(f, budget.max_frame_size);
  std::size_t opened = 0;
  bool sets_done = false;
  auto make_set = [&](const std::vector<std::size_t>& idx) {
    std::vector<FiniteFrame> fs;
    for (std::size_t i : idx) fs.push_back(sets.frames()[i]);
    return JankovAxiomSet(fs);
  };
  auto open_set = [&](std::size_t ordinal, const std::vector<std::size_t>& idx) {
    open.push_back({ordinal, std::make_unique<MembershipSearch>(make_set(idx), f, budget)});
  };
  // replay the POS prefix: only still-pending sets are reopened
  {
    std::set<std::size_t> pending(resume.pos_pending.begin(), resume.pos_pending.end());
    while (opened < resume.pos_opened) {
      auto idx = sets.next();
      if (!idx) {
        sets_done = true;
        break;
      }
      if (pending.count(opened)) open_set(opened, *idx);
      ++opened;
    }
  }

  FrameEnumerator neg_frames(budget.max_frame_size);
  std::size_t neg_seen = 0;
  bool neg_done = false;
  while (neg_seen < resume.neg_examined) {
    if (!neg_frames.next()) {
      neg_done = true;
      break;
    }
    ++neg_seen;
  }

  std::optional<std::size_t> best_ordinal;
  std::optional<JankovAxiomSet> best_set;
  std::optional<ProofCertificate> best_cert;
  std::size_t neg_ticks = 0, pos_ticks = 0;
  bool neg_turn = true;

  auto neg_tick = [&] {
    ++neg_ticks;
    auto c = neg_frames.next();
    if (!c) {
      neg_done = true;
      return;
    }
    ++neg_seen;
    ++effort.neg_frames;
    if (is_neg_witness(f, *c)) out.counterexample = std::move(*c);
  };

  auto pos_tick = [&] {
    ++pos_ticks;
    if (!best_ordinal && !sets_done) {
      if (auto idx = sets.next()) {
        ++effort.axiom_sets;
        open_set(opened++, *idx);
      } else {
        sets_done = true;
      }
    }
    for (auto& o : open) {
      if (best_ordinal && o.ordinal > *best_ordinal) continue;
      o.search->step();
      if (o.search->verdict().outcome == Outcome::Yes && (!best_ordinal || o.ordinal < *best_ordinal)) {
        best_ordinal = o.ordinal;
        best_set = o.search->axioms();
        best_cert = std::get<ProofCertificate>(o.search->verdict().witness);
      }
    }
    std::vector<Open> keep;
    for (auto& o : open) {
      if (o.search->done()) {
        effort += o.search->verdict().effort;
        continue;
      }
      if (best_ordinal && o.ordinal > *best_ordinal) {
        effort += o.search->verdict().effort;
        continue;
      }
      keep.push_back(std::move(o));
    }
    open = std::move(keep);
  };

  while (!out.counterexample) {
    const bool neg_live = !best_ordinal && !neg_done && neg_ticks < budget.max_candidates;
    const bool pos_live = pos_ticks < budget.max_candidates && (!sets_done || !open.empty()) &&
                          !(best_ordinal && open.empty());
    if (!neg_live && !pos_live) break;
    if (neg_live && (neg_turn || !pos_live))
      neg_tick();
    else
      pos_tick();
    neg_turn = !neg_turn;
  }
  for (auto& o : open) effort += o.search->verdict().effort;

  if (out.counterexample) {
    out.verdict.outcome = Outcome::No;
    out.verdict.witness = *out.counterexample;
  } else if (best_ordinal) {
    out.verdict.outcome = Outcome::Yes;
    out.verdict.witness = *best_set;
    out.axiomatization = best_set;
    out.certificate = best_cert;
  } else {
    out.cursor.neg_examined = neg_seen;
    out.cursor.pos_opened = opened;
    for (auto& o : open) out.cursor.pos_pending.push_back(o.ordinal);
  }
  return out;
}

/// Replays a union-splitting result against f.
inline bool verify_union_splitting(const Formula& f, const UnionSplittingResult& r) {
  switch (r.verdict.outcome) {
    case Outcome::Yes: {
      if (!r.axiomatization || !r.certificate) return false;
      for (const auto& a : r.axiomatization->frames())
        if (validates(a, f)) return false;
      return verify_certificate(r.axiomatization->formulas(), f, *r.certificate);
    }
    case Outcome::No:
      return r.counterexample && is_neg_witness(f, *r.counterexample);
    default:
      return !r.axiomatization && !r.counterexample;
  }
}

// ---------------------------------------------------------------------------
// Splitting

struct SplittingResult {
  Verdict verdict;
  UnionSplittingResult union_splitting;
  /// On yes: the frame whose Jankov formula axiomatizes K + f.
  std::optional<FiniteFrame> splitting_frame;
};

/// A union-splitting K + {eps(A_i)} is a splitting iff it equals K + eps(B)
/// for some rooted cycle-free B no larger than the largest A_i.
inline SplittingResult is_splitting(const Formula& f, const Budget& budget) {
  SplittingResult out;
  out.union_splitting = is_union_splitting(f, budget);
  out.verdict.effort = out.union_splitting.verdict.effort;
  const auto& us = out.union_splitting;
  if (us.verdict.outcome == Outcome::Unknown) return out;
  if (us.verdict.outcome == Outcome::No) {
    out.verdict.outcome = Outcome::No;
    out.verdict.witness = *us.counterexample;
    return out;
  }
  const JankovAxiomSet& s = *us.axiomatization;
  out.verdict.outcome = Outcome::No;
  out.verdict.witness = s;
  if (s.empty()) return out;
  FrameEnumerator frames(s.max_points(), FrameFilter::RootedCycleFree);
  while (auto b = frames.next()) {
    if (jankov_logic_equal(JankovAxiomSet({*b}), s)) {
      out.verdict.outcome = Outcome::Yes;
      out.verdict.witness = JankovAxiomSet({*b});
      out.splitting_frame = std::move(*b);
      return out;
    }
  }
  return out;
}

inline bool verify_splitting(const Formula& f, const SplittingResult& r) {
  const auto& us = r.union_splitting;
  if (!verify_union_splitting(f, us)) return false;
  switch (r.verdict.outcome) {
    case Outcome::Yes:
      return us.verdict.outcome == Outcome::Yes && r.splitting_frame &&
             jankov_logic_equal(JankovAxiomSet({*r.splitting_frame}), *us.axiomatization);
    case Outcome::No: {
      if (us.verdict.outcome == Outcome::No) return true;
      if (us.verdict.outcome != Outcome::Yes) return false;
      const JankovAxiomSet& s = *us.axiomatization;
      if (s.empty()) return true;
      FrameEnumerator frames(s.max_points(), FrameFilter::RootedCycleFree);
      while (auto b = frames.next())
        if (jankov_logic_equal(JankovAxiomSet({*b}), s)) return false;
      return true;
    }
    default:
      return us.verdict.outcome == Outcome::Unknown;
  }
}

// ---------------------------------------------------------------------------
// Consistency

/// Both maximal consistent logics at once: point 0 is reflexive, point 1 a
/// dead end.
inline FiniteFrame coatom_pair() { return FiniteFrame::from_edges(2, {{0, 0}}); }

/// K + f is consistent iff a single reflexive or irreflexive point validates f.
inline bool is_consistent(const Formula& f) {
  return validates(FiniteFrame(1), f) || validates(FiniteFrame::from_edges(1, {{0, 0}}), f);
}

/// Yes with the one-point frame validating f, or no with coatom_pair(),
/// both of whose points refute f.
inline Verdict consistency_verdict(const Formula& f) {
  Verdict v;
  for (const auto& point : {FiniteFrame(1), FiniteFrame::from_edges(1, {{0, 0}})}) {
    if (validates(point, f)) {
      v.outcome = Outcome::Yes;
      v.witness = point;
      return v;
    }
  }
  v.outcome = Outcome::No;
  v.witness = coatom_pair();
  return v;
}

inline bool verify_consistency(const Formula& f, const Verdict& v) {
  auto* frame = std::get_if<FiniteFrame>(&v.witness);
  if (!frame) return false;
  if (v.outcome == Outcome::Yes) return frame->size() == 1 && validates(*frame, f);
  if (v.outcome == Outcome::No)
    return *frame == coatom_pair() && !validates(generated_subframe(*frame, 0), f) &&
           !validates(generated_subframe(*frame, 1), f);
  return false;
}

// ---------------------------------------------------------------------------
// Axiomatization problem

enum class DecisionBasis { Inconsistent, UnionSplitting, None };

inline const char* to_string(DecisionBasis b) {
  switch (b) {
    case DecisionBasis::Inconsistent: return "inconsistent";
    case DecisionBasis::UnionSplitting: return "union-splitting";
    default: return "none";
  }
}

/// Answers "is K + psi = K + f?" for a fixed f. status is yes when a
/// decision function exists, no when the problem is undecidable for f, and
/// unknown when the union-splitting search ran out of budget.
struct AxiomatizationDecider {
  Outcome status = Outcome::Unknown;
  DecisionBasis basis = DecisionBasis::None;
  Verdict consistency;
  std::optional<UnionSplittingResult> union_splitting;
  std::function<Verdict(const Formula&)> decide;
  std::string report;
};

namespace detail {

inline AxiomatizationDecider make_axiomatization_decider(const Verdict& consistency,
                                                         const std::optional<UnionSplittingResult>& us,
                                                         const Budget& budget) {
  AxiomatizationDecider d;
  d.consistency = consistency;
  d.union_splitting = us;
  if (consistency.outcome == Outcome::No) {
    d.status = Outcome::Yes;
    d.basis = DecisionBasis::Inconsistent;
    d.decide = [](const Formula& psi) {
      Verdict c = consistency_verdict(psi);
      c.outcome = c.outcome == Outcome::Yes ? Outcome::No : Outcome::Yes;
      return c;
    };
    d.report = "the logic is inconsistent; K + psi equals it iff psi is inconsistent";
    return d;
  }
  if (!us || us->verdict.outcome == Outcome::Unknown) {
    d.report = "union-splitting search exhausted its budget";
    return d;
  }
  if (us->verdict.outcome == Outcome::No) {
    d.status = Outcome::No;
    d.report = "K + f is consistent and not a union-splitting: its axiomatization problem is undecidable";
    return d;
  }
  d.status = Outcome::Yes;
  d.basis = DecisionBasis::UnionSplitting;
  JankovAxiomSet s = *us->axiomatization;
  d.decide = [s, budget](const Formula& psi) {
    for (const auto& a : s.frames()) {
      if (validates(a, psi)) {
        Verdict v;
        v.outcome = Outcome::No;
        v.witness = a;
        return v;
      }
    }
    return member_of_jankov_logic(s, psi, budget);
  };
  d.report = "K + f is a union-splitting; K + psi equals it iff every axiom frame refutes psi and psi is in its logic";
  return d;
}

}  // namespace detail

inline AxiomatizationDecider axiomatization_problem_decider(const Formula& f, const Budget& budget) {
  Verdict consistency = consistency_verdict(f);
  std::optional<UnionSplittingResult> us;
  if (consistency.outcome == Outcome::Yes) us = is_union_splitting(f, budget);
  return detail::make_axiomatization_decider(consistency, us, budget);
}

/// Replays one answer of a decision function built from d.
inline bool verify_axiomatization_answer(const AxiomatizationDecider& d, const Formula& psi, const Verdict& v) {
  if (d.basis == DecisionBasis::Inconsistent) {
    Verdict c = v;
    c.outcome = v.outcome == Outcome::Yes ? Outcome::No : v.outcome == Outcome::No ? Outcome::Yes : Outcome::Unknown;
    return verify_consistency(psi, c);
  }
  if (d.basis != DecisionBasis::UnionSplitting) return false;
  const JankovAxiomSet& s = *d.union_splitting->axiomatization;
  if (v.outcome == Outcome::Yes) {
    for (const auto& a : s.frames())
      if (validates(a, psi)) return false;
    return verify_membership(s, psi, v);
  }
  if (v.outcome == Outcome::No) {
    auto* frame = std::get_if<FiniteFrame>(&v.witness);
    if (!frame) return false;
    bool axiom_validates = std::any_of(s.frames().begin(), s.frames().end(), [&](const FiniteFrame& a) {
      return isomorphic(a, *frame) && validates(a, psi);
    });
    return axiom_validates || is_jankov_countermodel(s, psi, *frame);
  }
  return std::holds_alternative<std::monostate>(v.witness);
}

// ---------------------------------------------------------------------------
// Decidable formulas and the equivalence report

struct DecidableFormulaResult {
  Verdict verdict;
  Verdict consistency;
  std::optional<UnionSplittingResult> union_splitting;
};

namespace detail {

inline DecidableFormulaResult decidable_formula_from(const Verdict& consistency,
                                                     const std::optional<UnionSplittingResult>& us) {
  DecidableFormulaResult r;
  r.consistency = consistency;
  r.union_splitting = us;
  if (consistency.outcome == Outcome::No) {
    r.verdict.outcome = Outcome::Yes;
    r.verdict.witness = consistency.witness;
    return r;
  }
  r.verdict = us->verdict;
  return r;
}

}  // namespace detail

/// f is a decidable formula iff K + f is inconsistent or a union-splitting.
inline DecidableFormulaResult is_decidable_formula(const Formula& f, const Budget& budget) {
  Verdict consistency = consistency_verdict(f);
  std::optional<UnionSplittingResult> us;
  if (consistency.outcome == Outcome::Yes) us = is_union_splitting(f, budget);
  return detail::decidable_formula_from(consistency, us);
}

inline bool verify_decidable_formula(const Formula& f, const DecidableFormulaResult& r) {
  if (!verify_consistency(f, r.consistency)) return false;
  if (r.consistency.outcome == Outcome::No) return r.verdict.outcome == Outcome::Yes;
  return r.union_splitting && r.union_splitting->verdict.outcome == r.verdict.outcome &&
         verify_union_splitting(f, *r.union_splitting);
}

struct EquivalenceReport {
  Outcome axiomatization_decidable = Outcome::Unknown;
  Outcome decidable_formula = Outcome::Unknown;
  Outcome union_splitting_or_inconsistent = Outcome::Unknown;
  Verdict consistency;
  std::optional<UnionSplittingResult> union_splitting;

  bool agree() const {
    return axiomatization_decidable == decidable_formula && decidable_formula == union_splitting_or_inconsistent;
  }
};

/// The three equivalent statuses, computed from one consistency check and
/// one union-splitting search.
inline EquivalenceReport equivalence_report(const Formula& f, const Budget& budget) {
  EquivalenceReport r;
  r.consistency = consistency_verdict(f);
  if (r.consistency.outcome == Outcome::Yes) r.union_splitting = is_union_splitting(f, budget);
  r.axiomatization_decidable = detail::make_axiomatization_decider(r.consistency, r.union_splitting, budget).status;
  r.decidable_formula = detail::decidable_formula_from(r.consistency, r.union_splitting).verdict.outcome;
  r.union_splitting_or_inconsistent =
      r.consistency.outcome == Outcome::No ? Outcome::Yes : r.union_splitting->verdict.outcome;
  return r;
}

// ---------------------------------------------------------------------------
// Logic equality

struct EqualityResult {
  Verdict verdict;
  /// 0 or 1: which formula's logic had a decision function; absent on unknown.
  std::optional<std::size_t> resolved_side;
  std::optional<AxiomatizationDecider> decider;
  std::string report;
};

/// K + f = K + g, decided when one side is inconsistent or a union-splitting.
/// Equality of arbitrary finitely axiomatized logics is undecidable, so
/// otherwise the answer is unknown.
inline EqualityResult logic_equal(const Formula& f, const Formula& g, const Budget& budget) {
  EqualityResult r;
  const Formula sides[2] = {f, g};
  for (std::size_t i = 0; i < 2; ++i) {
    AxiomatizationDecider d = axiomatization_problem_decider(sides[i], budget);
    if (d.status != Outcome::Yes) continue;
    r.verdict = d.decide(sides[1 - i]);
    r.resolved_side = i;
    r.report = d.report;
    r.decider = std::move(d);
    return r;
  }
  r.report = "neither logic is inconsistent or a union-splitting within budget; equality is undecidable in general";
  return r;
}

}  // namespace usplit

#endif  // USPLIT_DECIDER_HPP
