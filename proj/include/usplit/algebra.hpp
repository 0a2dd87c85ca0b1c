#ifndef USPLIT_ALGEBRA_HPP
#define USPLIT_ALGEBRA_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "usplit/formula.hpp"
#include "usplit/frame.hpp"
#include "usplit/tableau.hpp"

namespace usplit {

/// The complex (powerset) algebra of a finite frame. Elements are point
/// sets; 0 is the empty set and 1 the full set.
class DualAlgebra {
 public:
  explicit DualAlgebra(FiniteFrame frame) : frame_(std::move(frame)) {}

  const FiniteFrame& frame() const { return frame_; }
  std::size_t points() const { return frame_.size(); }

  PointSet zero() const { return 0; }
  PointSet one() const { return frame_.points(); }
  PointSet join(PointSet a, PointSet b) const { return a | b; }
  PointSet meet(PointSet a, PointSet b) const { return a & b; }
  PointSet complement(PointSet a) const { return one() & ~a; }
  PointSet diamond(PointSet a) const { return frame_.diamond(a); }
  PointSet box(PointSet a) const { return complement(diamond(complement(a))); }
  bool leq(PointSet a, PointSet b) const { return (a & ~b) == 0; }

  PointSet box_n(std::size_t n, PointSet a) const {
    for (std::size_t i = 0; i < n; ++i) a = box(a);
    return a;
  }

  PointSet box_leq(std::size_t n, PointSet a) const {
    PointSet acc = a;
    for (std::size_t i = 0; i < n; ++i) {
      a = box(a);
      acc &= a;
    }
    return acc;
  }

  /// Every element, by bit pattern. Only sensible for small frames.
  std::vector<PointSet> carrier() const {
    if (points() > 20) throw std::length_error("carrier too large to list");
    std::vector<PointSet> out;
    for (PointSet a = 0; a <= one(); ++a) out.push_back(a);
    return out;
  }

 private:
  FiniteFrame frame_;
};

using Valuation = std::map<VarIndex, PointSet>;

namespace detail {

/// Formula flattened to a postorder program over shared subterms.
class Program {
 public:
  explicit Program(const Formula& f) { root_ = arena_.intern(f); }

  const tableau::Arena& arena() const { return arena_; }
  int root() const { return root_; }

  std::vector<VarIndex> variables() const {
    std::vector<VarIndex> out;
    for (std::size_t id = 0; id < arena_.size(); ++id) {
      const auto& n = arena_.node(static_cast<int>(id));
      if (n.op == Op::Var) out.push_back(n.var);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Arena ids are created children-first, so a single forward pass works.
  template <class VarValue>
  PointSet run(const FiniteFrame& frame, VarValue&& var_value, std::vector<PointSet>& scratch) const {
    const PointSet one = frame.points();
    scratch.resize(arena_.size());
    for (std::size_t id = 0; id < arena_.size(); ++id) {
      const auto& n = arena_.node(static_cast<int>(id));
      auto at = [&](int k) { return scratch[static_cast<std::size_t>(k)]; };
      PointSet v = 0;
      switch (n.op) {
        case Op::Var: v = var_value(n.var); break;
        case Op::Top: v = one; break;
        case Op::Bot: v = 0; break;
        case Op::Not: v = one & ~at(n.lhs); break;
        case Op::And: v = at(n.lhs) & at(n.rhs); break;
        case Op::Or: v = at(n.lhs) | at(n.rhs); break;
        case Op::Imp: v = (one & ~at(n.lhs)) | at(n.rhs); break;
        case Op::Iff: v = one & ~(at(n.lhs) ^ at(n.rhs)); break;
        case Op::Box: v = one & ~frame.diamond(one & ~at(n.lhs)); break;
        case Op::Dia: v = frame.diamond(at(n.lhs)); break;
      }
      scratch[id] = v;
    }
    return scratch[static_cast<std::size_t>(root_)];
  }

 private:
  tableau::Arena arena_;
  int root_ = -1;
};

/// Above this many valuation bits, refutation search switches from
/// enumerating valuations to propositional satisfiability.
inline constexpr std::size_t kBruteForceValuationBits = 22;

inline std::optional<Valuation> refute_by_enumeration(const FiniteFrame& frame, const Program& prog) {
  std::vector<VarIndex> vars = prog.variables();
  const PointSet one = frame.points();
  std::vector<PointSet> values(vars.size(), 0);
  std::map<VarIndex, std::size_t> slot;
  for (std::size_t i = 0; i < vars.size(); ++i) slot[vars[i]] = i;
  std::vector<PointSet> scratch;
  while (true) {
    PointSet r = prog.run(frame, [&](VarIndex v) { return values[slot.at(v)]; }, scratch);
    if (r != one) {
      Valuation out;
      for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i]] = values[i];
      return out;
    }
    // odometer over (2^n)^vars
    std::size_t i = 0;
    while (i < vars.size()) {
      if (values[i] < one) {
        ++values[i];
        break;
      }
      values[i] = 0;
      ++i;
    }
    if (i == vars.size()) return std::nullopt;
  }
}

/// Unrolls the formula over the frame into a propositional formula whose
/// atoms are (variable, point) pairs, then asks the tableau for a model.
inline std::optional<Valuation> refute_by_sat(const FiniteFrame& frame, const Program& prog) {
  std::vector<VarIndex> vars = prog.variables();
  std::map<VarIndex, std::size_t> slot;
  for (std::size_t i = 0; i < vars.size(); ++i) slot[vars[i]] = i;
  const std::size_t n = frame.size();
  if (vars.size() * n >= (std::size_t{1} << 31)) throw std::length_error("valuation space too large");

  const auto& src = prog.arena();
  tableau::Arena out;
  // unrolled[id * n + w]
  std::vector<int> unrolled(src.size() * n, -1);
  for (std::size_t id = 0; id < src.size(); ++id) {
    const auto& node = src.node(static_cast<int>(id));
    for (std::size_t w = 0; w < n; ++w) {
      auto at = [&](int k, std::size_t u) { return unrolled[static_cast<std::size_t>(k) * n + u]; };
      int v = -1;
      switch (node.op) {
        case Op::Var: v = out.make(Op::Var, static_cast<VarIndex>(slot.at(node.var) * n + w)); break;
        case Op::Top:
        case Op::Bot: v = out.make(node.op); break;
        case Op::Not: v = out.make(Op::Not, 0, at(node.lhs, w)); break;
        case Op::And:
        case Op::Or:
        case Op::Imp:
        case Op::Iff: v = out.make(node.op, 0, at(node.lhs, w), at(node.rhs, w)); break;
        case Op::Box:
        case Op::Dia: {
          std::vector<int> parts;
          for (PointSet rest = frame.successors(w); rest; rest &= rest - 1)
            parts.push_back(at(node.lhs, static_cast<std::size_t>(std::countr_zero(rest))));
          v = node.op == Op::Box ? out.conj_all(parts) : out.disj_all(parts);
          break;
        }
      }
      unrolled[id * n + w] = v;
    }
  }
  std::vector<int> falsified;
  for (std::size_t w = 0; w < n; ++w)
    falsified.push_back(out.make(Op::Not, 0, unrolled[static_cast<std::size_t>(prog.root()) * n + w]));
  int goal = out.disj_all(falsified);
  tableau::Solver solver(out);
  tableau::TreeModel model;
  if (!solver.satisfiable({tableau::signed_true(goal)}, &model)) return std::nullopt;
  // propositional: the model is the single root world
  Valuation val;
  for (VarIndex v : vars) val[v] = 0;
  for (VarIndex atom : model.worlds.back().true_vars) val[vars[atom / n]] |= singleton(atom % n);
  return val;
}

}  // namespace detail

/// The element denoted by f under v. Throws std::invalid_argument if v
/// misses a variable of f.
inline PointSet evaluate(const DualAlgebra& alg, const Formula& f, const Valuation& v) {
  detail::Program prog(f);
  std::vector<PointSet> scratch;
  return prog.run(
      alg.frame(),
      [&](VarIndex x) {
        auto it = v.find(x);
        if (it == v.end()) throw std::invalid_argument("valuation does not cover p" + std::to_string(x));
        return it->second & alg.one();
      },
      scratch);
}

/// A valuation under which f is not 1, if any.
inline std::optional<Valuation> find_refuting_valuation(const DualAlgebra& alg, const Formula& f) {
  detail::Program prog(f);
  std::size_t bits = prog.variables().size() * alg.points();
  if (bits <= detail::kBruteForceValuationBits) return detail::refute_by_enumeration(alg.frame(), prog);
  return detail::refute_by_sat(alg.frame(), prog);
}

/// A |= f: f evaluates to 1 under every valuation.
inline bool validates(const DualAlgebra& alg, const Formula& f) { return !find_refuting_valuation(alg, f).has_value(); }
inline bool validates(const FiniteFrame& frame, const Formula& f) { return validates(DualAlgebra(frame), f); }

/// Least n with box^n 0 = 1, searched over n < |A|; absent when the
/// sequence stabilizes below 1.
inline std::optional<std::size_t> finite_height(const DualAlgebra& alg) {
  PointSet a = alg.zero();
  // |A| = 2^points; the increasing chain box^n 0 stabilizes long before that
  for (std::size_t n = 0;; ++n) {
    if (a == alg.one()) return n;
    PointSet next = alg.box(a);
    if (next == a) return std::nullopt;
    a = next;
  }
}

/// Paper-style height: least n with A |= box^{n+1} bot.
inline std::optional<std::size_t> height(const DualAlgebra& alg) {
  auto h = finite_height(alg);
  if (!h) return std::nullopt;
  return *h == 0 ? 0 : *h - 1;
}

/// The decreasing chain box^{<=n} a, taken to its fixed point.
inline PointSet box_leq_limit(const DualAlgebra& alg, PointSet a) {
  PointSet acc = a;
  PointSet cur = a;
  while (true) {
    cur = alg.box(cur);
    PointSet next = acc & cur;
    if (next == acc) return acc;
    acc = next;
  }
}

/// Least opremum: an element c != 1 above box^{<=n} a for some n, for every
/// a != 1. Such c exist iff the join of the limits of all a != 1 is not 1,
/// and that join is then the least one.
inline std::optional<PointSet> opremum(const DualAlgebra& alg) {
  if (alg.points() > 20) throw std::length_error("opremum search limited to 20 points");
  PointSet c = 0;
  for (PointSet a = 0; a < alg.one(); ++a) c |= box_leq_limit(alg, a);
  if (c == alg.one()) return std::nullopt;
  return c;
}

inline bool is_subdirectly_irreducible(const DualAlgebra& alg) { return opremum(alg).has_value(); }

/// Whether the dual algebra of `a` is a subalgebra of an s.i. homomorphic
/// image of the dual algebra of `b`: some point of b generates a subframe
/// that maps onto a by a surjective p-morphism.
inline bool embeds_into_si_image(const FiniteFrame& a, const FiniteFrame& b) {
  if (!is_rooted(a)) throw std::invalid_argument("embeds_into_si_image: first frame must be rooted");
  for (std::size_t x = 0; x < b.size(); ++x) {
    FiniteFrame g = generated_subframe(b, x);
    if (g.size() >= a.size() && exists_surjective_p_morphism(g, a)) return true;
  }
  return false;
}

/// A Kripke model on a finite frame.
struct FrameModel {
  FiniteFrame frame;
  Valuation valuation;
};

inline FrameModel to_frame_model(const tableau::TreeModel& tree) {
  if (tree.worlds.empty() || tree.worlds.size() > kMaxPoints) throw std::length_error("tree model does not fit a frame");
  FrameModel m{FiniteFrame(tree.worlds.size()), {}};
  for (std::size_t w = 0; w < tree.worlds.size(); ++w) {
    for (std::size_t c : tree.worlds[w].children) m.frame.add_edge(w, c);
    for (VarIndex v : tree.worlds[w].true_vars) m.valuation[v] |= singleton(w);
  }
  return m;
}

}  // namespace usplit

#endif  // USPLIT_ALGEBRA_HPP
