#ifndef USPLIT_TABLEAU_HPP
#define USPLIT_TABLEAU_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "usplit/formula.hpp"

namespace usplit::tableau {

/// Hash-consed formula DAG. Node ids are dense, so per-branch state is a
/// flat vector indexed by id.
class Arena {
 public:
  struct Node {
    Op op;
    VarIndex var = 0;
    int lhs = -1;
    int rhs = -1;
  };

  int make(Op op, VarIndex var = 0, int lhs = -1, int rhs = -1) {
    Key key{op, var, lhs, rhs};
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({op, var, lhs, rhs});
    index_.emplace(key, id);
    return id;
  }

  int intern(const Formula& f) {
    switch (f.op()) {
      case Op::Var: return make(Op::Var, f.index());
      case Op::Top:
      case Op::Bot: return make(f.op());
      case Op::Not:
      case Op::Box:
      case Op::Dia: return make(f.op(), 0, intern(f.lhs()));
      default: {
        int a = intern(f.lhs());
        int b = intern(f.rhs());
        return make(f.op(), 0, a, b);
      }
    }
  }

  /// Right fold; empty lists give verum / falsum.
  int conj_all(const std::vector<int>& ids) {
    if (ids.empty()) return make(Op::Top);
    int acc = ids.back();
    for (std::size_t i = ids.size() - 1; i-- > 0;) acc = make(Op::And, 0, ids[i], acc);
    return acc;
  }

  int disj_all(const std::vector<int>& ids) {
    if (ids.empty()) return make(Op::Bot);
    int acc = ids.back();
    for (std::size_t i = ids.size() - 1; i-- > 0;) acc = make(Op::Or, 0, ids[i], acc);
    return acc;
  }

  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Key {
    Op op;
    VarIndex var;
    int lhs;
    int rhs;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = static_cast<std::size_t>(k.op) * 1000003u ^ k.var;
      h = h * 0x100000001b3ull ^ static_cast<std::size_t>(k.lhs + 1);
      h = h * 0x100000001b3ull ^ static_cast<std::size_t>(k.rhs + 1);
      return h;
    }
  };

  std::vector<Node> nodes_;
  std::unordered_map<Key, int, KeyHash> index_;
};

/// Signed formula: 2*id + 1 asserts the formula true, 2*id asserts it false.
using Signed = int;
inline Signed signed_true(int id) { return 2 * id + 1; }
inline Signed signed_false(int id) { return 2 * id; }
inline Signed flip(Signed s) { return s ^ 1; }

/// Tree-shaped Kripke model read off an open tableau; world 0 is the root.
struct TreeModel {
  struct World {
    std::vector<VarIndex> true_vars;
    std::vector<std::size_t> children;
  };
  std::vector<World> worlds;
};

/// Signed tableau for K with unit propagation over beta formulas and
/// semantic branching. Each world is saturated propositionally, then one
/// successor is opened per diamond requirement carrying all box obligations;
/// modal depth strictly decreases, so the procedure terminates. Closed
/// (unsatisfiable) world labels are cached.
class Solver {
 public:
  explicit Solver(const Arena& arena) : arena_(arena) {}

  bool satisfiable(std::vector<Signed> label, TreeModel* model = nullptr) {
    normalize(label);
    if (model) {
      model->worlds.clear();
      return world(label, model) != kClosed;
    }
    return world(label, nullptr) != kClosed;
  }

  std::size_t worlds_explored() const { return explored_; }

 private:
  static constexpr std::size_t kClosed = static_cast<std::size_t>(-1);
  static constexpr std::size_t kOpenNoModel = static_cast<std::size_t>(-2);

  struct Branch {
    std::vector<std::int8_t> value;  // 0 unassigned, 1 true, -1 false
    std::vector<Signed> betas;
    std::vector<bool> resolved;
    std::vector<Signed> modal;
  };

  static void normalize(std::vector<Signed>& label) {
    std::sort(label.begin(), label.end());
    label.erase(std::unique(label.begin(), label.end()), label.end());
  }

  std::int8_t value_of(const Branch& b, Signed s) const {
    std::int8_t v = b.value[static_cast<std::size_t>(s >> 1)];
    if (v == 0) return 0;
    return (s & 1) ? v : static_cast<std::int8_t>(-v);
  }

  // Alternatives of a beta formula, each a list of at most two signed formulas.
  std::pair<std::vector<Signed>, std::vector<Signed>> alternatives(Signed s) const {
    const auto& n = arena_.node(s >> 1);
    bool t = s & 1;
    switch (n.op) {
      case Op::And: return {{signed_false(n.lhs)}, {signed_false(n.rhs)}};
      case Op::Or: return {{signed_true(n.lhs)}, {signed_true(n.rhs)}};
      case Op::Imp: return {{signed_false(n.lhs)}, {signed_true(n.rhs)}};
      case Op::Iff:
        if (t) return {{signed_true(n.lhs), signed_true(n.rhs)}, {signed_false(n.lhs), signed_false(n.rhs)}};
        return {{signed_true(n.lhs), signed_false(n.rhs)}, {signed_false(n.lhs), signed_true(n.rhs)}};
      default: return {};
    }
  }

  // Returns false on a clash.
  bool assign(Branch& b, Signed s, std::vector<Signed>& queue) const {
    int id = s >> 1;
    bool t = s & 1;
    std::int8_t& v = b.value[static_cast<std::size_t>(id)];
    if (v != 0) return (v == 1) == t;
    v = t ? 1 : -1;
    const auto& n = arena_.node(id);
    switch (n.op) {
      case Op::Var: return true;
      case Op::Top: return t;
      case Op::Bot: return !t;
      case Op::Not: queue.push_back(t ? signed_false(n.lhs) : signed_true(n.lhs)); return true;
      case Op::And:
        if (!t) break;
        queue.push_back(signed_true(n.lhs));
        queue.push_back(signed_true(n.rhs));
        return true;
      case Op::Or:
        if (t) break;
        queue.push_back(signed_false(n.lhs));
        queue.push_back(signed_false(n.rhs));
        return true;
      case Op::Imp:
        if (t) break;
        queue.push_back(signed_true(n.lhs));
        queue.push_back(signed_false(n.rhs));
        return true;
      case Op::Iff: break;
      case Op::Box:
      case Op::Dia: b.modal.push_back(s); return true;
    }
    b.betas.push_back(s);
    b.resolved.push_back(false);
    return true;
  }

  bool drain(Branch& b, std::vector<Signed>& queue) const {
    while (!queue.empty()) {
      Signed s = queue.back();
      queue.pop_back();
      if (!assign(b, s, queue)) return false;
    }
    return true;
  }

  enum class AltState { Open, Satisfied, Dead };

  AltState alt_state(const Branch& b, const std::vector<Signed>& alt) const {
    bool all = true;
    for (Signed s : alt) {
      std::int8_t v = value_of(b, s);
      if (v < 0) return AltState::Dead;
      if (v == 0) all = false;
    }
    return all ? AltState::Satisfied : AltState::Open;
  }

  // Unit propagation over pending betas. Returns false on a clash.
  bool propagate(Branch& b, std::vector<Signed>& queue) const {
    if (!drain(b, queue)) return false;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < b.betas.size(); ++i) {
        if (b.resolved[i]) continue;
        auto [left, right] = alternatives(b.betas[i]);
        AltState l = alt_state(b, left);
        AltState r = alt_state(b, right);
        if (l == AltState::Satisfied || r == AltState::Satisfied) {
          b.resolved[i] = true;
        } else if (l == AltState::Dead && r == AltState::Dead) {
          return false;
        } else if (l == AltState::Dead || r == AltState::Dead) {
          b.resolved[i] = true;
          const auto& alt = l == AltState::Dead ? right : left;
          queue.insert(queue.end(), alt.begin(), alt.end());
          if (!drain(b, queue)) return false;
          changed = true;
        }
      }
    }
    return true;
  }

  // Saturates one branch and checks its modal successors. Returns the model
  // index of the world (or kOpenNoModel) when open, kClosed when closed.
  std::size_t saturate(Branch b, std::vector<Signed> queue, TreeModel* model) {
    while (true) {
      if (!propagate(b, queue)) return kClosed;
      std::size_t pick = b.betas.size();
      for (std::size_t i = 0; i < b.betas.size(); ++i)
        if (!b.resolved[i]) {
          pick = i;
          break;
        }
      if (pick == b.betas.size()) break;
      b.resolved[pick] = true;
      auto [left, right] = alternatives(b.betas[pick]);
      std::size_t r = saturate(b, left, model);
      if (r != kClosed) return r;
      queue = right;
      // semantic branching: the left alternative is refuted on this branch
      if (left.size() == 1) queue.push_back(flip(left[0]));
    }
    return expand_modal(b, model);
  }

  std::size_t expand_modal(const Branch& b, TreeModel* model) {
    std::vector<Signed> obligations;
    std::vector<Signed> requirements;
    for (Signed s : b.modal) {
      const auto& n = arena_.node(s >> 1);
      bool t = s & 1;
      if (n.op == Op::Box) (t ? obligations : requirements).push_back(t ? signed_true(n.lhs) : signed_false(n.lhs));
      else (t ? requirements : obligations).push_back(t ? signed_true(n.lhs) : signed_false(n.lhs));
    }
    std::vector<std::size_t> children;
    for (Signed req : requirements) {
      std::vector<Signed> label = obligations;
      label.push_back(req);
      normalize(label);
      std::size_t child = world(label, model);
      if (child == kClosed) return kClosed;
      children.push_back(child);
    }
    if (!model) return kOpenNoModel;
    TreeModel::World w;
    for (std::size_t id = 0; id < b.value.size(); ++id) {
      const auto& n = arena_.node(static_cast<int>(id));
      if (n.op == Op::Var && b.value[id] == 1) w.true_vars.push_back(n.var);
    }
    std::sort(w.true_vars.begin(), w.true_vars.end());
    w.children = std::move(children);
    model->worlds.push_back(std::move(w));
    return model->worlds.size() - 1;
  }

  std::size_t world(const std::vector<Signed>& label, TreeModel* model) {
    auto it = cache_.find(label);
    if (it != cache_.end() && (!it->second || !model)) return it->second ? kOpenNoModel : kClosed;
    ++explored_;
    Branch b;
    b.value.assign(arena_.size(), 0);
    std::size_t r = saturate(std::move(b), label, model);
    cache_[label] = r != kClosed;
    return r;
  }

  const Arena& arena_;
  std::map<std::vector<Signed>, bool> cache_;
  std::size_t explored_ = 0;
};

/// Keeps the worlds reachable from `root` (closed branches may leave
/// orphans behind) and renumbers them in depth-first order from the root.
inline void compact(TreeModel& m, std::size_t root) {
  std::vector<TreeModel::World> out;
  out.push_back(m.worlds[root]);
  // iterative DFS; each out-world's children are rewritten as they are copied
  std::vector<std::size_t> pending{0};
  while (!pending.empty()) {
    std::size_t at = pending.back();
    pending.pop_back();
    std::vector<std::size_t> kids = out[at].children;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      out.push_back(m.worlds[kids[i]]);
      out[at].children[i] = out.size() - 1;
      pending.push_back(out.size() - 1);
    }
  }
  m.worlds = std::move(out);
}

/// True iff f is valid on every Kripke frame.
inline bool is_k_theorem(const Formula& f) {
  Arena arena;
  int id = arena.intern(f);
  Solver solver(arena);
  return !solver.satisfiable({signed_false(id)});
}

/// A tree model whose root refutes f, when f is not a K theorem.
inline std::optional<TreeModel> k_countermodel(const Formula& f) {
  Arena arena;
  int id = arena.intern(f);
  Solver solver(arena);
  TreeModel model;
  if (solver.satisfiable({signed_false(id)}, &model)) {
    compact(model, model.worlds.size() - 1);
    return model;
  }
  return std::nullopt;
}

}  // namespace usplit::tableau

namespace usplit {
using tableau::is_k_theorem;
}

#endif  // USPLIT_TABLEAU_HPP
