#ifndef USPLIT_PROVER_HPP
#define USPLIT_PROVER_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "usplit/algebra.hpp"
#include "usplit/formula.hpp"
#include "usplit/frame.hpp"
#include "usplit/jankov.hpp"
#include "usplit/tableau.hpp"

namespace usplit {

/// Bounds for the semi-procedures. max_candidates caps each side of a
/// dovetailed search separately.
struct Budget {
  std::size_t max_candidates = 100000;
  std::size_t max_frame_size = 5;
  std::size_t max_subst_depth = 2;
  std::size_t max_prefix = 3;
};

inline void require_valid_budget(const Budget& b) {
  if (b.max_candidates == 0) throw std::invalid_argument("budget: max_candidates must be positive");
  if (b.max_frame_size == 0) throw std::invalid_argument("budget: max_frame_size must be positive");
  if (b.max_frame_size > kMaxCanonicalPoints) throw std::invalid_argument("budget: max_frame_size too large");
}

enum class Outcome { Yes, No, Unknown };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    default: return "unknown";
  }
}

/// f follows from the instances: box^{<=prefix}(/\ instances) -> f is a K theorem.
struct ProofCertificate {
  std::size_t prefix = 0;
  std::vector<Formula> instances;
  friend bool operator==(const ProofCertificate&, const ProofCertificate&) = default;
};

struct Effort {
  std::size_t proof_candidates = 0;
  std::size_t countermodel_frames = 0;
  std::size_t axiom_sets = 0;
  std::size_t neg_frames = 0;

  Effort& operator+=(const Effort& o) {
    proof_candidates += o.proof_candidates;
    countermodel_frames += o.countermodel_frames;
    axiom_sets += o.axiom_sets;
    neg_frames += o.neg_frames;
    return *this;
  }
};

using Witness = std::variant<std::monostate, JankovAxiomSet, FiniteFrame, ProofCertificate>;

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  Witness witness;
  Effort effort;
};

// ---------------------------------------------------------------------------
// Certificates

/// Extends s so that substitute(pattern, s) == target, if possible.
inline bool match(const Formula& pattern, const Formula& target, Substitution& s) {
  if (pattern.op() == Op::Var) {
    auto [it, fresh] = s.emplace(pattern.index(), target);
    return fresh || it->second == target;
  }
  if (pattern.op() != target.op()) return false;
  if (pattern.op() == Op::Top || pattern.op() == Op::Bot) return true;
  if (!match(pattern.lhs(), target.lhs(), s)) return false;
  return !is_binary(pattern.op()) || match(pattern.rhs(), target.rhs(), s);
}

inline bool is_instance_of(const Formula& instance, const std::vector<Formula>& axioms) {
  return std::any_of(axioms.begin(), axioms.end(), [&](const Formula& ax) {
    Substitution s;
    return match(ax, instance, s);
  });
}

inline Formula certificate_goal(const ProofCertificate& c, const Formula& f) {
  return imp(box_leq(c.prefix, big_conj(c.instances)), f);
}

/// Replays a certificate independently of the search that produced it.
inline bool verify_certificate(const std::vector<Formula>& axioms, const Formula& f, const ProofCertificate& c) {
  for (const auto& inst : c.instances)
    if (!is_instance_of(inst, axioms)) return false;
  return is_k_theorem(certificate_goal(c, f));
}

// ---------------------------------------------------------------------------
// Substitution instances

namespace detail {

/// Substitution images over a fixed alphabet, layer by layer. Layer 0 is the
/// alphabet; layer d adds ~, [], <> of layer d-1 and &, | of pairs drawn from
/// layers below d with at least one operand in layer d-1.
class ImageLibrary {
 public:
  explicit ImageLibrary(const std::vector<Formula>& atoms) {
    for (const auto& a : atoms)
      if (seen_.insert(a).second) all_.push_back(a);
    ends_.push_back(all_.size());
  }

  /// Number of images of depth <= d.
  std::size_t count(std::size_t d) {
    while (ends_.size() <= d) grow();
    return ends_[d];
  }

  /// Number of images of depth < d.
  std::size_t below(std::size_t d) { return d == 0 ? 0 : count(d - 1); }

  const Formula& operator[](std::size_t i) const { return all_[i]; }

 private:
  void grow() {
    std::size_t prev_begin = ends_.size() >= 2 ? ends_[ends_.size() - 2] : 0;
    std::size_t prev_end = ends_.back();
    auto add = [&](Formula f) {
      if (seen_.insert(f).second) all_.push_back(std::move(f));
    };
    for (std::size_t i = prev_begin; i < prev_end; ++i) {
      Formula x = all_[i];
      add(neg(x));
      add(box(x));
      add(dia(x));
    }
    for (std::size_t i = 0; i < prev_end; ++i)
      for (std::size_t j = 0; j < prev_end; ++j) {
        if (i < prev_begin && j < prev_begin) continue;
        Formula x = all_[i], y = all_[j];
        add(conj(x, y));
        add(disj(x, y));
      }
    ends_.push_back(all_.size());
  }

  std::vector<Formula> all_;
  std::vector<std::size_t> ends_;
  std::unordered_set<Formula> seen_;
};

/// Lazily generated substitution instances of the axioms, ordered by image
/// depth; images come from the variables of the goal plus T and F. Within a
/// depth the axioms take turns, each running an odometer over its variables
/// with the last variable fastest.
class InstanceStream {
 public:
  InstanceStream(std::vector<Formula> axioms, const Formula& goal, std::size_t max_depth)
      : axioms_(std::move(axioms)), max_depth_(max_depth), images_(alphabet(goal)) {
    for (const auto& ax : axioms_) {
      auto vs = variables(ax);
      vars_.emplace_back(vs.begin(), vs.end());
    }
    start_depth(0);
  }

  /// Instance i if it exists and has depth <= d.
  const Formula* at(std::size_t i, std::size_t d) {
    while (list_.size() <= i && pull()) {
    }
    if (i >= list_.size() || depth_of_[i] > d) return nullptr;
    return &list_[i];
  }

  /// Number of instances of depth < d; generates all of them.
  std::size_t start_of_depth(std::size_t d) {
    while (depth_ < d && pull()) {
    }
    return depth_ >= d ? depth_starts_[d] : list_.size();
  }

  bool finished() const { return done_; }

 private:
  static std::vector<Formula> alphabet(const Formula& goal) {
    std::vector<Formula> atoms{top(), bot()};
    for (VarIndex v : variables(goal)) atoms.push_back(var(v));
    return atoms;
  }

  void start_depth(std::size_t d) {
    depth_ = d;
    depth_starts_.resize(d + 1, 0);
    depth_starts_[d] = list_.size();
    odometers_.assign(axioms_.size(), {});
    live_.clear();
    for (std::size_t a = 0; a < axioms_.size(); ++a) {
      if (vars_[a].empty() && d > 0) continue;
      odometers_[a].assign(vars_[a].size(), 0);
      live_.push_back(a);
    }
    turn_ = 0;
  }

  /// Adds one instance to list_; false once depth max_depth is used up.
  bool pull() {
    while (!done_) {
      if (live_.empty()) {
        if (depth_ == max_depth_) {
          done_ = true;
          return false;
        }
        start_depth(depth_ + 1);
        continue;
      }
      turn_ %= live_.size();
      auto inst = advance(live_[turn_]);
      if (!inst) {
        live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(turn_));
        continue;
      }
      ++turn_;
      if (seen_.insert(*inst).second) {
        list_.push_back(std::move(*inst));
        depth_of_.push_back(depth_);
        return true;
      }
    }
    return false;
  }

  /// Next instance of axiom a at the current depth; at depth d > 0 some
  /// image must have depth exactly d.
  std::optional<Formula> advance(std::size_t a) {
    auto& odo = odometers_[a];
    if (odo.empty()) {
      odo.push_back(0);  // marks the variable-free axiom as emitted
      return axioms_[a];
    }
    if (vars_[a].empty()) return std::nullopt;
    const std::size_t n = images_.count(depth_);
    const std::size_t lo = images_.below(depth_);
    while (odo[0] < n) {
      std::vector<std::size_t> current = odo;
      for (std::size_t i = odo.size(); i-- > 0;) {
        if (++odo[i] < n || i == 0) break;
        odo[i] = 0;
      }
      if (depth_ > 0 && std::none_of(current.begin(), current.end(), [&](std::size_t k) { return k >= lo; }))
        continue;
      Substitution s;
      for (std::size_t k = 0; k < current.size(); ++k) s[vars_[a][k]] = images_[current[k]];
      return substitute(axioms_[a], s);
    }
    return std::nullopt;
  }

  std::vector<Formula> axioms_;
  std::vector<std::vector<VarIndex>> vars_;
  std::size_t max_depth_;
  ImageLibrary images_;
  std::size_t depth_ = 0;
  std::vector<std::size_t> depth_starts_;
  std::vector<std::vector<std::size_t>> odometers_;
  std::vector<std::size_t> live_;
  std::size_t turn_ = 0;
  std::vector<Formula> list_;
  std::vector<std::size_t> depth_of_;
  std::unordered_set<Formula> seen_;
  bool done_ = false;
};

/// Proof candidates in stage order. Stage 0 is the axioms themselves;
/// stage t >= 1 runs through (d, k) with d + k = t, d <= max depth, k >= 1,
/// and yields the k-subsets of the instances of depth <= d in colex order
/// that contain an instance of depth exactly d.
class CandidateStream {
 public:
  CandidateStream(std::vector<Formula> axioms, const Formula& goal, std::size_t max_depth)
      : axioms_(axioms), instances_(std::move(axioms), goal, max_depth), max_depth_(max_depth) {}

  /// Next candidate set, or nullopt once every stage is exhausted.
  std::optional<std::vector<Formula>> next() {
    if (!identity_done_) {
      identity_done_ = true;
      return axioms_;
    }
    while (!exhausted_) {
      if (in_stage_) {
        if (auto c = step_stage()) {
          yielded_ = true;
          return c;
        }
        in_stage_ = false;
      }
      open_next_stage();
    }
    return std::nullopt;
  }

 private:
  void open_next_stage() {
    if (t_ == 0 || d_ >= std::min(t_ - 1, max_depth_)) {
      // past the last depth every later stage only asks for larger subsets
      if (t_ > max_depth_ && !yielded_ && instances_.finished()) {
        exhausted_ = true;
        return;
      }
      ++t_;
      d_ = 0;
      yielded_ = false;
    } else {
      ++d_;
    }
    k_ = t_ - d_;
    lo_ = instances_.start_of_depth(d_);
    combo_.clear();
    for (std::size_t i = 0; i + 1 < k_; ++i) combo_.push_back(i);
    combo_.push_back(std::max(lo_, k_ - 1));
    in_stage_ = true;
  }

  std::optional<std::vector<Formula>> step_stage() {
    if (!instances_.at(combo_.back(), d_)) return std::nullopt;
    std::vector<Formula> out;
    for (std::size_t i : combo_) out.push_back(*instances_.at(i, d_));
    advance_combo();
    return out;
  }

  // colex successor; the largest index only moves once the others wrap
  void advance_combo() {
    const std::size_t k = combo_.size();
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (combo_[i] + 1 < combo_[i + 1]) {
        ++combo_[i];
        for (std::size_t j = 0; j < i; ++j) combo_[j] = j;
        return;
      }
    }
    for (std::size_t j = 0; j + 1 < k; ++j) combo_[j] = j;
    ++combo_[k - 1];
  }

  std::vector<Formula> axioms_;
  InstanceStream instances_;
  std::size_t max_depth_;
  bool identity_done_ = false;
  bool in_stage_ = false;
  bool yielded_ = false;
  bool exhausted_ = false;
  std::size_t t_ = 0, d_ = 0, k_ = 0, lo_ = 0;
  std::vector<std::size_t> combo_;
};

/// Least n <= max_prefix for which the candidate proves f.
inline std::optional<ProofCertificate> try_candidate(const std::vector<Formula>& sigma, const Formula& f,
                                                     std::size_t max_prefix) {
  ProofCertificate c{max_prefix, sigma};
  if (!is_k_theorem(certificate_goal(c, f))) return std::nullopt;
  for (std::size_t n = 0; n < max_prefix; ++n) {
    ProofCertificate smaller{n, sigma};
    if (is_k_theorem(certificate_goal(smaller, f))) return smaller;
  }
  return c;
}

}  // namespace detail

/// Semi-decision for f in K + axioms: searches substitution instances in
/// stage order. Never answers no.
inline Verdict membership_semi(const std::vector<Formula>& axioms, const Formula& f, const Budget& budget) {
  Verdict v;
  detail::CandidateStream stream(axioms, f, budget.max_subst_depth);
  while (v.effort.proof_candidates < budget.max_candidates) {
    auto sigma = stream.next();
    if (!sigma) break;
    ++v.effort.proof_candidates;
    if (auto cert = detail::try_candidate(*sigma, f, budget.max_prefix)) {
      v.outcome = Outcome::Yes;
      v.witness = std::move(*cert);
      break;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Countermodels

/// b validates the logic of s (checked structurally) and refutes f.
inline bool is_jankov_countermodel(const JankovAxiomSet& s, const Formula& f, const FiniteFrame& b) {
  return validates_jankov_logic(b, s) && !validates(b, f);
}

inline std::optional<FiniteFrame> find_jankov_countermodel(const JankovAxiomSet& s, const Formula& f,
                                                           std::size_t max_size, std::size_t* examined = nullptr) {
  FrameEnumerator frames(max_size);
  while (auto b = frames.next()) {
    if (examined) ++*examined;
    if (is_jankov_countermodel(s, f, *b)) return b;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dovetailed membership

/// Decides f in K + {eps(A) : A in s} by alternating one proof candidate with
/// one countermodel candidate. Resumable: step() does one unit of work.
class MembershipSearch {
 public:
  MembershipSearch(JankovAxiomSet s, Formula f, Budget budget)
      : s_(std::move(s)),
        f_(std::move(f)),
        budget_(budget),
        proofs_(s_.formulas(), f_, budget.max_subst_depth),
        frames_(budget.max_frame_size) {
    require_valid_budget(budget);
  }

  bool done() const { return verdict_.outcome != Outcome::Unknown || (proof_over_ && model_over_); }
  const Verdict& verdict() const { return verdict_; }
  const JankovAxiomSet& axioms() const { return s_; }

  void step() {
    if (done()) return;
    if (s_.empty()) {
      decide_in_k();
      return;
    }
    bool proof_turn = !proof_over_ && (model_over_ || proof_next_);
    proof_next_ = !proof_next_;
    if (proof_turn)
      proof_step();
    else
      model_step();
  }

  const Verdict& run() {
    while (!done()) step();
    return verdict_;
  }

 private:
  void proof_step() {
    if (verdict_.effort.proof_candidates >= budget_.max_candidates) {
      proof_over_ = true;
      return;
    }
    auto sigma = proofs_.next();
    if (!sigma) {
      proof_over_ = true;
      return;
    }
    ++verdict_.effort.proof_candidates;
    if (auto cert = detail::try_candidate(*sigma, f_, budget_.max_prefix)) {
      verdict_.outcome = Outcome::Yes;
      verdict_.witness = std::move(*cert);
    }
  }

  void model_step() {
    if (verdict_.effort.countermodel_frames >= budget_.max_candidates) {
      model_over_ = true;
      return;
    }
    auto b = frames_.next();
    if (!b) {
      model_over_ = true;
      return;
    }
    ++verdict_.effort.countermodel_frames;
    if (is_jankov_countermodel(s_, f_, *b)) {
      verdict_.outcome = Outcome::No;
      verdict_.witness = std::move(*b);
    }
  }

  // With no axioms the logic is K and the tableau decides outright. The
  // witness for a non-theorem is still the first refuting frame in
  // enumeration order when one fits the size bound.
  void decide_in_k() {
    ++verdict_.effort.proof_candidates;
    if (is_k_theorem(f_)) {
      verdict_.outcome = Outcome::Yes;
      verdict_.witness = ProofCertificate{0, {}};
      return;
    }
    if (auto b = find_jankov_countermodel(s_, f_, budget_.max_frame_size, &verdict_.effort.countermodel_frames)) {
      verdict_.outcome = Outcome::No;
      verdict_.witness = std::move(*b);
      return;
    }
    auto tree = tableau::k_countermodel(f_);
    proof_over_ = model_over_ = true;
    if (!tree || tree->worlds.size() > kMaxPoints) return;
    verdict_.outcome = Outcome::No;
    verdict_.witness = to_frame_model(*tree).frame;
  }

  JankovAxiomSet s_;
  Formula f_;
  Budget budget_;
  detail::CandidateStream proofs_;
  FrameEnumerator frames_;
  Verdict verdict_;
  bool proof_next_ = true;
  bool proof_over_ = false;
  bool model_over_ = false;
};

inline Verdict member_of_jankov_logic(const JankovAxiomSet& s, const Formula& f, const Budget& budget) {
  MembershipSearch search(s, f, budget);
  return search.run();
}

/// Replays a membership verdict against its postconditions.
inline bool verify_membership(const JankovAxiomSet& s, const Formula& f, const Verdict& v) {
  if (v.outcome == Outcome::Yes) {
    auto* cert = std::get_if<ProofCertificate>(&v.witness);
    return cert && verify_certificate(s.formulas(), f, *cert);
  }
  if (v.outcome == Outcome::No) {
    auto* frame = std::get_if<FiniteFrame>(&v.witness);
    return frame && is_jankov_countermodel(s, f, *frame);
  }
  return std::holds_alternative<std::monostate>(v.witness);
}

}  // namespace usplit

#endif  // USPLIT_PROVER_HPP
