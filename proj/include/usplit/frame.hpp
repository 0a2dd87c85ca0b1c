#ifndef USPLIT_FRAME_HPP
#define USPLIT_FRAME_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace usplit {

/// Subset of frame points, bit i standing for point i.
using PointSet = std::uint64_t;

inline constexpr std::size_t kMaxPoints = 64;
/// Canonical codes pack size*size relation bits into one 64-bit word.
inline constexpr std::size_t kMaxCanonicalPoints = 8;

inline constexpr PointSet singleton(std::size_t x) { return PointSet{1} << x; }
inline constexpr PointSet full_set(std::size_t n) { return n >= 64 ? ~PointSet{0} : (PointSet{1} << n) - 1; }

/// Finite Kripke frame: points 0..size-1 with an arbitrary binary relation
/// (loops allowed), stored as successor bitsets.
class FiniteFrame {
 public:
  FiniteFrame() = default;
  explicit FiniteFrame(std::size_t size) : succ_(check_size(size), 0) {}

  /// Builds a frame from an edge list; rejects out-of-range points and
  /// duplicate edges.
  static FiniteFrame from_edges(std::size_t size, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    FiniteFrame f(size);
    for (auto [x, y] : edges) {
      if (x >= size || y >= size)
        throw std::invalid_argument("edge (" + std::to_string(x) + "," + std::to_string(y) + ") out of range");
      if (f.has_edge(x, y))
        throw std::invalid_argument("duplicate edge (" + std::to_string(x) + "," + std::to_string(y) + ")");
      f.add_edge(x, y);
    }
    return f;
  }

  std::size_t size() const { return succ_.size(); }
  PointSet points() const { return full_set(size()); }
  PointSet successors(std::size_t x) const { return succ_.at(x); }
  bool has_edge(std::size_t x, std::size_t y) const { return (succ_.at(x) >> y) & 1u; }

  void add_edge(std::size_t x, std::size_t y) {
    if (x >= size() || y >= size()) throw std::out_of_range("edge endpoint out of range");
    succ_[x] |= singleton(y);
  }

  /// Edges in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < size(); ++x)
      for (std::size_t y = 0; y < size(); ++y)
        if (has_edge(x, y)) out.emplace_back(x, y);
    return out;
  }

  /// Points with at least one successor in `a`.
  PointSet diamond(PointSet a) const {
    PointSet out = 0;
    for (std::size_t x = 0; x < size(); ++x)
      if (succ_[x] & a) out |= singleton(x);
    return out;
  }

  /// Points all of whose successors lie in `a`.
  PointSet box(PointSet a) const { return points() & ~diamond(points() & ~a); }

  /// Labeled equality (same points, same relation).
  friend bool operator==(const FiniteFrame&, const FiniteFrame&) = default;

 private:
  static std::size_t check_size(std::size_t size) {
    if (size == 0 || size > kMaxPoints)
      throw std::invalid_argument("frame size must be between 1 and " + std::to_string(kMaxPoints));
    return size;
  }

  std::vector<PointSet> succ_;
};

/// Points reachable from `root` under the reflexive-transitive closure.
inline PointSet reachable_from(const FiniteFrame& f, std::size_t root) {
  if (root >= f.size()) throw std::out_of_range("root out of range");
  PointSet seen = singleton(root);
  PointSet frontier = seen;
  while (frontier) {
    PointSet next = 0;
    for (PointSet rest = frontier; rest; rest &= rest - 1) next |= f.successors(std::countr_zero(rest));
    frontier = next & ~seen;
    seen |= next;
  }
  return seen;
}

/// Points reachable from `x` by a nonempty path.
inline PointSet strictly_reachable_from(const FiniteFrame& f, std::size_t x) {
  PointSet out = 0;
  for (PointSet rest = f.successors(x); rest; rest &= rest - 1) out |= reachable_from(f, std::countr_zero(rest));
  return out;
}

/// Subframe on `keep`, points renumbered in increasing original order.
inline FiniteFrame restrict_to(const FiniteFrame& f, PointSet keep) {
  std::vector<std::size_t> index(f.size(), 0);
  std::size_t n = 0;
  for (std::size_t x = 0; x < f.size(); ++x)
    if ((keep >> x) & 1u) index[x] = n++;
  FiniteFrame out(n);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (!((keep >> x) & 1u)) continue;
    for (PointSet rest = f.successors(x) & keep; rest; rest &= rest - 1) out.add_edge(index[x], index[std::countr_zero(rest)]);
  }
  return out;
}

/// The subframe generated by `root`, renumbered order-preservingly.
inline FiniteFrame generated_subframe(const FiniteFrame& f, std::size_t root) {
  return restrict_to(f, reachable_from(f, root));
}

inline bool is_rooted(const FiniteFrame& f) {
  for (std::size_t x = 0; x < f.size(); ++x)
    if (reachable_from(f, x) == f.points()) return true;
  return false;
}

/// No point reaches itself by a nonempty path; loops count as cycles.
inline bool is_cycle_free(const FiniteFrame& f) {
  for (std::size_t x = 0; x < f.size(); ++x)
    if ((strictly_reachable_from(f, x) >> x) & 1u) return false;
  return true;
}

// ---------------------------------------------------------------------------
// p-morphisms

/// A total map between frame points; valid when it satisfies forth and back.
struct PMorphism {
  FiniteFrame source;
  FiniteFrame target;
  std::vector<std::size_t> map;
};

inline bool is_p_morphism(const FiniteFrame& source, const FiniteFrame& target, const std::vector<std::size_t>& map) {
  if (map.size() != source.size()) return false;
  for (std::size_t x = 0; x < source.size(); ++x) {
    if (map[x] >= target.size()) return false;
    PointSet image = 0;
    for (PointSet rest = source.successors(x); rest; rest &= rest - 1) image |= singleton(map[std::countr_zero(rest)]);
    // forth: image within target successors; back: every target successor is hit
    if (image != target.successors(map[x])) return false;
  }
  return true;
}

inline bool is_surjective(const std::vector<std::size_t>& map, std::size_t target_size) {
  PointSet hit = 0;
  for (std::size_t y : map) hit |= singleton(y);
  return hit == full_set(target_size);
}

namespace detail {

class PMorphismSearch {
 public:
  PMorphismSearch(const FiniteFrame& g, const FiniteFrame& h) : g_(g), h_(h), map_(g.size(), kUnset) {}

  std::optional<std::vector<std::size_t>> run() {
    if (g_.size() < h_.size()) return std::nullopt;
    if (assign(0)) return map_;
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  // Image of x's successors under the partial map, and whether all are mapped.
  std::pair<PointSet, bool> image_of_successors(std::size_t x) const {
    PointSet image = 0;
    bool complete = true;
    for (PointSet rest = g_.successors(x); rest; rest &= rest - 1) {
      std::size_t y = std::countr_zero(rest);
      if (map_[y] == kUnset) complete = false;
      else image |= singleton(map_[y]);
    }
    return {image, complete};
  }

  bool consistent(std::size_t x) const {
    if (map_[x] == kUnset) return true;
    auto [image, complete] = image_of_successors(x);
    PointSet wanted = h_.successors(map_[x]);
    if (image & ~wanted) return false;
    return !complete || image == wanted;
  }

  bool assign(std::size_t x) {
    if (x == g_.size()) return is_surjective(map_, h_.size());
    PointSet hit = 0;
    for (std::size_t y = 0; y < x; ++y) hit |= singleton(map_[y]);
    std::size_t missing = static_cast<std::size_t>(std::popcount(h_.points() & ~hit));
    if (missing > g_.size() - x) return false;
    for (std::size_t v = 0; v < h_.size(); ++v) {
      map_[x] = v;
      bool ok = consistent(x);
      // x's new value may complete or violate its predecessors' constraints
      for (std::size_t y = 0; ok && y < x; ++y)
        if ((g_.successors(y) >> x) & 1u) ok = consistent(y);
      if (ok && assign(x + 1)) return true;
    }
    map_[x] = kUnset;
    return false;
  }

  const FiniteFrame& g_;
  const FiniteFrame& h_;
  std::vector<std::size_t> map_;
};

}  // namespace detail

/// Backtracking search for a surjective p-morphism g -> h.
inline std::optional<PMorphism> find_surjective_p_morphism(const FiniteFrame& g, const FiniteFrame& h) {
  auto map = detail::PMorphismSearch(g, h).run();
  if (!map) return std::nullopt;
  return PMorphism{g, h, std::move(*map)};
}

inline bool exists_surjective_p_morphism(const FiniteFrame& g, const FiniteFrame& h) {
  return detail::PMorphismSearch(g, h).run().has_value();
}

// ---------------------------------------------------------------------------
// Canonical forms
//
// A frame on n points is encoded as n*n relation bits read in "shell" order:
// shell k lists (k,0),(0,k),(k,1),(1,k),...,(k,k-1),(k-1,k),(k,k). The code of
// the subframe on points 0..k-1 is therefore a prefix of the full code, which
// makes orderly generation possible. The canonical form is the relabeling with
// the lexicographically least code.

namespace detail {

inline std::uint32_t shell_bits(const FiniteFrame& f, const std::vector<std::size_t>& order, std::size_t k) {
  std::uint32_t bits = 0;
  std::size_t pk = order[k];
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t pi = order[i];
    bits = (bits << 1) | (f.has_edge(pk, pi) ? 1u : 0u);
    bits = (bits << 1) | (f.has_edge(pi, pk) ? 1u : 0u);
  }
  return (bits << 1) | (f.has_edge(pk, pk) ? 1u : 0u);
}

inline std::uint64_t code_of(const FiniteFrame& f, const std::vector<std::size_t>& order) {
  std::uint64_t code = 0;
  for (std::size_t k = 0; k < order.size(); ++k) code = (code << (2 * k + 1)) | shell_bits(f, order, k);
  return code;
}

inline void require_canonical_size(const FiniteFrame& f) {
  if (f.size() > kMaxCanonicalPoints)
    throw std::invalid_argument("canonical forms are limited to " + std::to_string(kMaxCanonicalPoints) + " points");
}

/// Branch-and-bound search over relabelings, comparing shell by shell.
class Labeler {
 public:
  explicit Labeler(const FiniteFrame& f) : f_(f), order_(f.size()) {}

  /// True iff no relabeling yields a smaller code than the identity.
  bool identity_is_least() {
    std::vector<std::size_t> id(f_.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
    target_.resize(f_.size());
    for (std::size_t k = 0; k < f_.size(); ++k) target_[k] = shell_bits(f_, id, k);
    return !find_smaller(0, 0);
  }

  /// The least-code relabeling: order[new label] = original point.
  std::vector<std::size_t> least_order() {
    best_.clear();
    current_.assign(f_.size(), 0);
    minimize(0, 0);
    return best_order_;
  }

 private:
  bool find_smaller(std::size_t k, PointSet used) {
    if (k == f_.size()) return false;
    for (std::size_t u = 0; u < f_.size(); ++u) {
      if ((used >> u) & 1u) continue;
      order_[k] = u;
      std::uint32_t s = shell_bits(f_, order_, k);
      if (s < target_[k]) return true;
      if (s == target_[k] && find_smaller(k + 1, used | singleton(u))) return true;
    }
    return false;
  }

  void minimize(std::size_t k, PointSet used) {
    if (k == f_.size()) {
      if (best_.empty() || current_ < best_) {
        best_ = current_;
        best_order_ = order_;
      }
      return;
    }
    for (std::size_t u = 0; u < f_.size(); ++u) {
      if ((used >> u) & 1u) continue;
      order_[k] = u;
      current_[k] = shell_bits(f_, order_, k);
      if (!best_.empty() && std::lexicographical_compare(best_.begin(), best_.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                                                         current_.begin(), current_.begin() + static_cast<std::ptrdiff_t>(k) + 1))
        continue;
      minimize(k + 1, used | singleton(u));
    }
  }

  const FiniteFrame& f_;
  std::vector<std::size_t> order_;
  std::vector<std::uint32_t> target_;
  std::vector<std::uint32_t> current_;
  std::vector<std::uint32_t> best_;
  std::vector<std::size_t> best_order_;
};

}  // namespace detail

/// Relation code of f under its own labeling.
inline std::uint64_t encode(const FiniteFrame& f) {
  detail::require_canonical_size(f);
  std::vector<std::size_t> id(f.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  return detail::code_of(f, id);
}

inline FiniteFrame decode(std::size_t size, std::uint64_t code) {
  if (size > kMaxCanonicalPoints) throw std::invalid_argument("frame too large to decode");
  FiniteFrame f(size);
  int bit = static_cast<int>(size * size) - 1;
  auto take = [&] { return ((code >> bit--) & 1u) != 0; };
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t i = 0; i < k; ++i) {
      if (take()) f.add_edge(k, i);
      if (take()) f.add_edge(i, k);
    }
    if (take()) f.add_edge(k, k);
  }
  return f;
}

inline bool is_canonical(const FiniteFrame& f) {
  detail::require_canonical_size(f);
  return detail::Labeler(f).identity_is_least();
}

inline FiniteFrame canonical_form(const FiniteFrame& f) {
  detail::require_canonical_size(f);
  auto order = detail::Labeler(f).least_order();
  return decode(f.size(), detail::code_of(f, order));
}

inline std::uint64_t canonical_code(const FiniteFrame& f) { return encode(canonical_form(f)); }

inline bool isomorphic(const FiniteFrame& a, const FiniteFrame& b) {
  return a.size() == b.size() && canonical_code(a) == canonical_code(b);
}

/// Enumeration order: size first, then canonical code.
inline bool canonical_less(const FiniteFrame& a, const FiniteFrame& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return canonical_code(a) < canonical_code(b);
}

/// Distinct (up to isomorphism) cycle-free generated subframes of f, in
/// canonical order. These are the duals of the s.i. homomorphic images of
/// finite height.
inline std::vector<FiniteFrame> rooted_cycle_free_generated_subframes(const FiniteFrame& f) {
  std::vector<std::pair<std::size_t, std::uint64_t>> keys;
  std::vector<FiniteFrame> out;
  for (std::size_t x = 0; x < f.size(); ++x) {
    FiniteFrame g = generated_subframe(f, x);
    if (!is_cycle_free(g)) continue;
    FiniteFrame c = canonical_form(g);
    std::pair<std::size_t, std::uint64_t> key{c.size(), encode(c)};
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
    keys.push_back(key);
    out.push_back(std::move(c));
  }
  std::vector<std::size_t> idx(out.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<FiniteFrame> sorted;
  for (std::size_t i : idx) sorted.push_back(out[i]);
  return sorted;
}

// ---------------------------------------------------------------------------
// Enumeration up to isomorphism

enum class FrameFilter { Any, Rooted, RootedCycleFree };

inline bool passes(const FiniteFrame& f, FrameFilter filter) {
  switch (filter) {
    case FrameFilter::Any: return true;
    case FrameFilter::Rooted: return is_rooted(f);
    case FrameFilter::RootedCycleFree: return is_cycle_free(f) && is_rooted(f);
  }
  return false;
}

/// Orderly generation of one canonical frame per isomorphism class: sizes
/// ascending, canonical code ascending within a size. Canonical frames of
/// size n are exactly the canonical extensions of canonical frames of size
/// n-1 by one shell, and parents and shells are visited in increasing order,
/// so the stream comes out sorted without buffering.
class FrameEnumerator {
 public:
  FrameEnumerator(std::size_t max_size, FrameFilter filter = FrameFilter::Any) : max_size_(max_size), filter_(filter) {
    if (max_size == 0) throw std::invalid_argument("max size must be positive");
    if (max_size > kMaxCanonicalPoints)
      throw std::invalid_argument("enumeration is limited to " + std::to_string(kMaxCanonicalPoints) + " points");
    parents_ = {0};  // the empty frame
  }

  std::optional<FiniteFrame> next() {
    while (size_ <= max_size_) {
      std::uint64_t shell_count = std::uint64_t{1} << (2 * (size_ - 1) + 1);
      while (parent_ < parents_.size()) {
        while (shell_ < shell_count) {
          std::uint64_t code = (parents_[parent_] << (2 * (size_ - 1) + 1)) | shell_;
          ++shell_;
          FiniteFrame f = decode(size_, code);
          if (!is_canonical(f)) continue;
          if (size_ < max_size_) children_.push_back(code);
          if (!passes(f, filter_)) continue;
          ++produced_;
          return f;
        }
        shell_ = 0;
        ++parent_;
      }
      parents_ = std::move(children_);
      children_.clear();
      parent_ = 0;
      ++size_;
    }
    return std::nullopt;
  }

  std::size_t produced() const { return produced_; }

 private:
  std::size_t max_size_;
  FrameFilter filter_;
  std::size_t size_ = 1;
  std::vector<std::uint64_t> parents_;
  std::vector<std::uint64_t> children_;
  std::size_t parent_ = 0;
  std::uint64_t shell_ = 0;
  std::size_t produced_ = 0;
};

inline std::vector<FiniteFrame> enumerate_frames(std::size_t max_size, FrameFilter filter = FrameFilter::Any) {
  std::vector<FiniteFrame> out;
  FrameEnumerator it(max_size, filter);
  while (auto f = it.next()) out.push_back(std::move(*f));
  return out;
}

}  // namespace usplit

#endif  // USPLIT_FRAME_HPP
