#ifndef USPLIT_JSON_IO_HPP
#define USPLIT_JSON_IO_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "usplit/decider.hpp"
#include "usplit/formula.hpp"
#include "usplit/frame.hpp"
#include "usplit/jankov.hpp"
#include "usplit/prover.hpp"

namespace usplit {

using json = nlohmann::json;

namespace detail {

template <typename F>
auto reading(const char* what, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  } catch (const ParseError& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

// {"size": n, "edges": [[i, j], ...]}
inline json to_json(const FiniteFrame& f) {
  json edges = json::array();
  for (auto [x, y] : f.edges()) edges.push_back({x, y});
  return {{"size", f.size()}, {"edges", edges}};
}

inline FiniteFrame frame_from_json(const json& j) {
  return detail::reading("frame", [&] {
    if (!j.is_object()) throw std::invalid_argument("frame: expected an object");
    auto size = j.at("size").get<std::size_t>();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("frame: each edge is a pair [i, j]");
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    return FiniteFrame::from_edges(size, edges);
  });
}

inline json to_json(const JankovAxiomSet& s) {
  json out = json::array();
  for (const auto& f : s.frames()) out.push_back(to_json(f));
  return out;
}

inline JankovAxiomSet axiom_set_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("axiom set: expected a list of frames");
  std::vector<FiniteFrame> frames;
  for (const auto& f : j) frames.push_back(frame_from_json(f));
  return JankovAxiomSet(frames);
}

// {"prefix": n, "instances": ["<formula>", ...]}
inline json to_json(const ProofCertificate& c) {
  json inst = json::array();
  for (const auto& f : c.instances) inst.push_back(to_string(f));
  return {{"prefix", c.prefix}, {"instances", inst}};
}

inline ProofCertificate certificate_from_json(const json& j) {
  return detail::reading("certificate", [&] {
    ProofCertificate c;
    c.prefix = j.at("prefix").get<std::size_t>();
    for (const auto& t : j.at("instances")) c.instances.push_back(parse(t.get<std::string>()));
    return c;
  });
}

inline json to_json(const Effort& e) {
  return {{"proof_candidates", e.proof_candidates},
          {"countermodel_frames", e.countermodel_frames},
          {"axiom_sets", e.axiom_sets},
          {"neg_frames", e.neg_frames}};
}

inline json to_json(const SearchCursor& c) {
  return {{"neg_examined", c.neg_examined}, {"pos_opened", c.pos_opened}, {"pos_pending", c.pos_pending}};
}

inline SearchCursor cursor_from_json(const json& j) {
  return detail::reading("cursor", [&] {
    SearchCursor c;
    c.neg_examined = j.at("neg_examined").get<std::size_t>();
    c.pos_opened = j.at("pos_opened").get<std::size_t>();
    c.pos_pending = j.at("pos_pending").get<std::vector<std::size_t>>();
    return c;
  });
}

inline json to_json(const Budget& b) {
  return {{"max_steps", b.max_candidates},
          {"max_frame_size", b.max_frame_size},
          {"max_subst_depth", b.max_subst_depth},
          {"max_prefix", b.max_prefix}};
}

inline Budget budget_from_json(const json& j) {
  return detail::reading("budget", [&] {
    Budget b;
    b.max_candidates = j.at("max_steps").get<std::size_t>();
    b.max_frame_size = j.at("max_frame_size").get<std::size_t>();
    b.max_subst_depth = j.at("max_subst_depth").get<std::size_t>();
    b.max_prefix = j.at("max_prefix").get<std::size_t>();
    return b;
  });
}

inline Outcome outcome_from_string(const std::string& s) {
  if (s == "yes") return Outcome::Yes;
  if (s == "no") return Outcome::No;
  if (s == "unknown") return Outcome::Unknown;
  throw std::invalid_argument("verdict must be yes, no or unknown");
}

/// Witness of a union-splitting result: the axiomatization with its
/// certificate on yes, the counterexample frame on no, empty on unknown.
inline json union_splitting_witness(const UnionSplittingResult& r) {
  json w = json::object();
  if (r.axiomatization) w["axiomatization"] = to_json(*r.axiomatization);
  if (r.certificate) w["certificate"] = to_json(*r.certificate);
  if (r.counterexample) w["counterexample"] = to_json(*r.counterexample);
  return w;
}

inline UnionSplittingResult union_splitting_from_json(Outcome outcome, const json& w) {
  return detail::reading("witness", [&] {
    UnionSplittingResult r;
    r.verdict.outcome = outcome;
    if (w.contains("axiomatization")) {
      r.axiomatization = axiom_set_from_json(w.at("axiomatization"));
      r.verdict.witness = *r.axiomatization;
    }
    if (w.contains("certificate")) r.certificate = certificate_from_json(w.at("certificate"));
    if (w.contains("counterexample")) {
      r.counterexample = frame_from_json(w.at("counterexample"));
      r.verdict.witness = *r.counterexample;
    }
    return r;
  });
}

}  // namespace usplit

#endif  // USPLIT_JSON_IO_HPP
