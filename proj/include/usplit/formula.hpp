#ifndef USPLIT_FORMULA_HPP
#define USPLIT_FORMULA_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace usplit {

/// Connectives of the basic modal language. Derived connectives are kept as
/// first-class nodes so that constructed formulas print the way they were built.
enum class Op : std::uint8_t { Var, Top, Bot, Not, And, Or, Imp, Iff, Box, Dia };

inline bool is_binary(Op op) { return op == Op::And || op == Op::Or || op == Op::Imp || op == Op::Iff; }
inline bool is_unary(Op op) { return op == Op::Not || op == Op::Box || op == Op::Dia; }

using VarIndex = std::uint32_t;

/// Immutable modal formula with structural equality. Copies share the tree.
class Formula {
 public:
  /// Default-constructed formula is verum.
  Formula();

  static Formula var(VarIndex index);
  static Formula top();
  static Formula bot();

  Op op() const;
  /// Only meaningful when op() == Op::Var.
  VarIndex index() const;
  /// Operand of a unary node, left operand of a binary node.
  const Formula& lhs() const;
  /// Right operand of a binary node.
  const Formula& rhs() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  /// Total structural order; used for deterministic containers.
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }
  static int compare(const Formula& a, const Formula& b);

  friend Formula neg(Formula f);
  friend Formula box(Formula f);
  friend Formula dia(Formula f);
  friend Formula conj(Formula a, Formula b);
  friend Formula disj(Formula a, Formula b);
  friend Formula imp(Formula a, Formula b);
  friend Formula iff(Formula a, Formula b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, VarIndex index, const Formula* lhs, const Formula* rhs);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  VarIndex index = 0;
  std::size_t hash = 0;
  std::vector<Formula> kids;
};

inline Op Formula::op() const { return node_->op; }
inline VarIndex Formula::index() const { return node_->index; }
inline std::size_t Formula::hash() const { return node_->hash; }

inline Formula Formula::make(Op op, VarIndex index, const Formula* lhs, const Formula* rhs) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->index = index;
  std::size_t h = std::hash<std::uint32_t>{}(static_cast<std::uint32_t>(op) * 0x9e3779b1u ^ index);
  auto mix = [&h](std::size_t k) { h ^= k + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  if (lhs) {
    node->kids.push_back(*lhs);
    mix(lhs->hash());
  }
  if (rhs) {
    node->kids.push_back(*rhs);
    mix(rhs->hash());
  }
  node->hash = h;
  return Formula(std::move(node));
}

inline Formula::Formula() : Formula(top()) {}
inline Formula Formula::var(VarIndex index) { return make(Op::Var, index, nullptr, nullptr); }

inline Formula Formula::top() {
  static const Formula t = make(Op::Top, 0, nullptr, nullptr);
  return t;
}

inline Formula Formula::bot() {
  static const Formula b = make(Op::Bot, 0, nullptr, nullptr);
  return b;
}

inline const Formula& Formula::lhs() const {
  if (node_->kids.empty()) throw std::logic_error("formula has no operands");
  return node_->kids[0];
}

inline const Formula& Formula::rhs() const {
  if (node_->kids.size() < 2) throw std::logic_error("formula has no right operand");
  return node_->kids[1];
}

inline int Formula::compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  if (a.op() == Op::Var && a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  const auto& ka = a.node_->kids;
  const auto& kb = b.node_->kids;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (int c = compare(ka[i], kb[i]); c != 0) return c;
  }
  return 0;
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return Formula::compare(a, b) == 0;
}

inline Formula neg(Formula f) { return Formula::make(Op::Not, 0, &f, nullptr); }
inline Formula box(Formula f) { return Formula::make(Op::Box, 0, &f, nullptr); }
inline Formula dia(Formula f) { return Formula::make(Op::Dia, 0, &f, nullptr); }
inline Formula conj(Formula a, Formula b) { return Formula::make(Op::And, 0, &a, &b); }
inline Formula disj(Formula a, Formula b) { return Formula::make(Op::Or, 0, &a, &b); }
inline Formula imp(Formula a, Formula b) { return Formula::make(Op::Imp, 0, &a, &b); }
inline Formula iff(Formula a, Formula b) { return Formula::make(Op::Iff, 0, &a, &b); }

inline Formula var(VarIndex index) { return Formula::var(index); }
inline Formula top() { return Formula::top(); }
inline Formula bot() { return Formula::bot(); }

/// Right-nested conjunction f0 & (f1 & (...)); the empty conjunction is verum.
inline Formula big_conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = conj(fs[i], acc);
  return acc;
}

/// Right-nested disjunction; the empty disjunction is falsum.
inline Formula big_disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = disj(fs[i], acc);
  return acc;
}

/// n-fold box.
inline Formula box_n(std::size_t n, Formula f) {
  for (std::size_t i = 0; i < n; ++i) f = box(f);
  return f;
}

/// f & []f & ... & []^n f, right-nested in increasing degree.
inline Formula box_leq(std::size_t n, const Formula& f) {
  std::vector<Formula> parts;
  parts.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) parts.push_back(box_n(i, f));
  return big_conj(parts);
}

inline std::size_t modal_depth(const Formula& f) {
  switch (f.op()) {
    case Op::Var:
    case Op::Top:
    case Op::Bot:
      return 0;
    case Op::Not:
      return modal_depth(f.lhs());
    case Op::Box:
    case Op::Dia:
      return 1 + modal_depth(f.lhs());
    default:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
  }
}

/// Height of the syntax tree counting every connective; atoms have depth 0.
inline std::size_t connective_depth(const Formula& f) {
  if (is_unary(f.op())) return 1 + connective_depth(f.lhs());
  if (is_binary(f.op())) return 1 + std::max(connective_depth(f.lhs()), connective_depth(f.rhs()));
  return 0;
}

inline std::size_t formula_size(const Formula& f) {
  if (is_unary(f.op())) return 1 + formula_size(f.lhs());
  if (is_binary(f.op())) return 1 + formula_size(f.lhs()) + formula_size(f.rhs());
  return 1;
}

inline void collect_variables(const Formula& f, std::set<VarIndex>& out) {
  if (f.op() == Op::Var) {
    out.insert(f.index());
  } else if (is_unary(f.op())) {
    collect_variables(f.lhs(), out);
  } else if (is_binary(f.op())) {
    collect_variables(f.lhs(), out);
    collect_variables(f.rhs(), out);
  }
}

inline std::set<VarIndex> variables(const Formula& f) {
  std::set<VarIndex> out;
  collect_variables(f, out);
  return out;
}

/// Finite map from variables to formulas, applied simultaneously.
using Substitution = std::map<VarIndex, Formula>;

inline Formula substitute(const Formula& f, const Substitution& s) {
  switch (f.op()) {
    case Op::Var: {
      auto it = s.find(f.index());
      return it == s.end() ? f : it->second;
    }
    case Op::Top:
    case Op::Bot:
      return f;
    case Op::Not:
      return neg(substitute(f.lhs(), s));
    case Op::Box:
      return box(substitute(f.lhs(), s));
    case Op::Dia:
      return dia(substitute(f.lhs(), s));
    case Op::And:
      return conj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::Or:
      return disj(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::Imp:
      return imp(substitute(f.lhs(), s), substitute(f.rhs(), s));
    case Op::Iff:
      return iff(substitute(f.lhs(), s), substitute(f.rhs(), s));
  }
  return f;
}

/// s then t: maps v to t(s(v)) on dom(s) and acts as t elsewhere.
inline Substitution compose(const Substitution& s, const Substitution& t) {
  Substitution out = t;
  for (const auto& [v, image] : s) out[v] = substitute(image, t);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline const char* binary_symbol(Op op) {
  switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Imp: return " -> ";
    case Op::Iff: return " <-> ";
    default: return "";
  }
}

inline void print(const Formula& f, std::string& out, bool nested) {
  switch (f.op()) {
    case Op::Var:
      out += 'p';
      out += std::to_string(f.index());
      return;
    case Op::Top: out += 'T'; return;
    case Op::Bot: out += 'F'; return;
    case Op::Not: out += '~'; print(f.lhs(), out, true); return;
    case Op::Box: out += "[]"; print(f.lhs(), out, true); return;
    case Op::Dia: out += "<>"; print(f.lhs(), out, true); return;
    default:
      if (nested) out += '(';
      print(f.lhs(), out, true);
      out += binary_symbol(f.op());
      print(f.rhs(), out, true);
      if (nested) out += ')';
  }
}

}  // namespace detail

/// ASCII rendering accepted back by parse(). Binary operands that are
/// themselves binary are always parenthesized.
inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print(f, out, false);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

// ---------------------------------------------------------------------------
// Parsing

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

enum class Tok { Var, Top, Bot, Not, And, Or, Imp, Iff, Box, Dia, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  VarIndex index = 0;
};

inline std::vector<Token> tokenize(std::string_view text) {
  struct Alias {
    std::string_view spelling;
    Tok kind;
  };
  // Longest spellings first so "<->" wins over "<>".
  static constexpr Alias aliases[] = {
      {"<->", Tok::Iff}, {"->", Tok::Imp},  {"[]", Tok::Box},   {"<>", Tok::Dia},  {"~", Tok::Not},
      {"&", Tok::And},   {"|", Tok::Or},    {"(", Tok::LParen}, {")", Tok::RParen}, {"T", Tok::Top},
      {"F", Tok::Bot},   {"⊤", Tok::Top}, {"⊥", Tok::Bot}, {"¬", Tok::Not},
      {"∧", Tok::And}, {"∨", Tok::Or}, {"→", Tok::Imp}, {"↔", Tok::Iff},
      {"□", Tok::Box}, {"◇", Tok::Dia}};

  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == 'p') {
      std::size_t j = i + 1;
      if (j >= text.size() || text[j] < '0' || text[j] > '9') throw ParseError("expected digits after 'p'", i);
      std::uint64_t value = 0;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') {
        value = value * 10 + static_cast<std::uint64_t>(text[j] - '0');
        if (value > 0xffffffffull) throw ParseError("variable index too large", i);
        ++j;
      }
      tokens.push_back({Tok::Var, i, static_cast<VarIndex>(value)});
      i = j;
      continue;
    }
    bool matched = false;
    for (const auto& alias : aliases) {
      if (text.substr(i, alias.spelling.size()) == alias.spelling) {
        tokens.push_back({alias.kind, i});
        i += alias.spelling.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  tokens.push_back({Tok::End, text.size()});
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().kind != Tok::End) throw ParseError("unexpected trailing input", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return tokens_[at_]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++at_;
    return true;
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept(Tok::Iff)) f = iff(f, parse_imp());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (accept(Tok::Imp)) return imp(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Or)) f = disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept(Tok::And)) f = conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    if (accept(Tok::Not)) return neg(parse_unary());
    if (accept(Tok::Box)) return box(parse_unary());
    if (accept(Tok::Dia)) return dia(parse_unary());
    return parse_atom();
  }

  Formula parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: ++at_; return var(t.index);
      case Tok::Top: ++at_; return top();
      case Tok::Bot: ++at_; return bot();
      case Tok::LParen: {
        ++at_;
        Formula f = parse_iff();
        if (!accept(Tok::RParen)) throw ParseError("expected ')'", peek().pos);
        return f;
      }
      case Tok::End: throw ParseError("unexpected end of input", t.pos);
      default: throw ParseError("expected a formula", t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
};

}  // namespace detail

/// Parses the ASCII grammar (Unicode connectives are accepted as aliases).
/// Throws ParseError carrying the byte offset of the offending token.
inline Formula parse(std::string_view text) { return detail::Parser(text).parse_all(); }

}  // namespace usplit

template <>
struct std::hash<usplit::Formula> {
  std::size_t operator()(const usplit::Formula& f) const noexcept { return f.hash(); }
};

#endif  // USPLIT_FORMULA_HPP
