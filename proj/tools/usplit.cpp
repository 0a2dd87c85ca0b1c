// usplit: decision procedures for logics K + f.
//
// Exit codes: 0 yes, 1 no, 2 unknown, 3 input error. With --verify the
// exit code is 0 when the witness in the given result replays and 1 when
// it does not.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "usplit/json_io.hpp"

namespace {

using namespace usplit;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInput = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Yes: return kExitYes;
    case Outcome::No: return kExitNo;
    default: return kExitUnknown;
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

Formula parse_formula(const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InputError("cannot parse formula \"" + text + "\": " + e.what());
  }
}

json verdict_json(const Verdict& v) {
  json w = json::object();
  if (auto* c = std::get_if<ProofCertificate>(&v.witness)) w["certificate"] = to_json(*c);
  if (auto* f = std::get_if<FiniteFrame>(&v.witness)) w["frame"] = to_json(*f);
  if (auto* s = std::get_if<JankovAxiomSet>(&v.witness)) w["axiomatization"] = to_json(*s);
  return {{"verdict", to_string(v.outcome)}, {"witness", w}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.outcome = outcome_from_string(j.at("verdict").get<std::string>());
  const json& w = j.at("witness");
  if (w.contains("certificate")) v.witness = certificate_from_json(w.at("certificate"));
  if (w.contains("frame")) v.witness = frame_from_json(w.at("frame"));
  if (w.contains("axiomatization")) v.witness = axiom_set_from_json(w.at("axiomatization"));
  return v;
}

json union_splitting_json(const UnionSplittingResult& r) {
  return {{"verdict", to_string(r.verdict.outcome)}, {"witness", union_splitting_witness(r)}};
}

UnionSplittingResult union_splitting_from(const json& j) {
  return union_splitting_from_json(outcome_from_string(j.at("verdict").get<std::string>()), j.at("witness"));
}

json result(json query, Outcome o, json witness, const Effort& effort, const SearchCursor& cursor = {}) {
  return {{"query", std::move(query)},
          {"verdict", to_string(o)},
          {"witness", std::move(witness)},
          {"effort", to_json(effort)},
          {"cursor", to_json(cursor)}};
}

void print_text(const json& r, std::ostream& out) {
  out << "verdict: " << r.at("verdict").get<std::string>() << "\n";
  for (const auto& [key, value] : r.at("witness").items()) {
    if (value.is_string())
      out << key << ": " << value.get<std::string>() << "\n";
    else
      out << key << ": " << value.dump() << "\n";
  }
}

// ---------------------------------------------------------------------------
// Commands

struct Context {
  Budget budget;
  std::string format = "json";
  std::string cursor_path;
};

json query_for(const std::string& command, const Context& ctx) {
  return {{"command", command}, {"budget", to_json(ctx.budget)}};
}

json decidable_witness(const DecidableFormulaResult& r) {
  json w = {{"consistency", verdict_json(r.consistency)}};
  if (r.union_splitting) w["union_splitting"] = union_splitting_json(*r.union_splitting);
  return w;
}

DecidableFormulaResult decidable_from(Outcome outcome, const json& w) {
  DecidableFormulaResult r;
  r.verdict.outcome = outcome;
  r.consistency = verdict_from_json(w.at("consistency"));
  if (w.contains("union_splitting")) r.union_splitting = union_splitting_from(w.at("union_splitting"));
  return r;
}

json run_union_splitting(const std::string& text, const Context& ctx) {
  Formula f = parse_formula(text);
  SearchCursor resume;
  if (!ctx.cursor_path.empty()) {
    json c = read_json_file(ctx.cursor_path);
    resume = cursor_from_json(c.contains("cursor") ? c.at("cursor") : c);
  }
  auto r = is_union_splitting(f, ctx.budget, resume);
  json q = query_for("check-union-splitting", ctx);
  q["formula"] = text;
  return result(q, r.verdict.outcome, union_splitting_witness(r), r.verdict.effort, r.cursor);
}

json run_splitting(const std::string& text, const Context& ctx) {
  Formula f = parse_formula(text);
  auto r = is_splitting(f, ctx.budget);
  json q = query_for("check-splitting", ctx);
  q["formula"] = text;
  json w = {{"union_splitting", union_splitting_json(r.union_splitting)}};
  if (r.splitting_frame) w["splitting_frame"] = to_json(*r.splitting_frame);
  return result(q, r.verdict.outcome, w, r.verdict.effort, r.union_splitting.cursor);
}

json run_consistent(const std::string& text, const Context& ctx) {
  Formula f = parse_formula(text);
  Verdict v = consistency_verdict(f);
  json q = query_for("consistent", ctx);
  q["formula"] = text;
  return result(q, v.outcome, verdict_json(v).at("witness"), v.effort);
}

json run_decidable(const std::string& text, const Context& ctx) {
  Formula f = parse_formula(text);
  auto r = is_decidable_formula(f, ctx.budget);
  json q = query_for("decidable-formula", ctx);
  q["formula"] = text;
  SearchCursor cursor = r.union_splitting ? r.union_splitting->cursor : SearchCursor{};
  return result(q, r.verdict.outcome, decidable_witness(r), r.verdict.effort, cursor);
}

json run_report(const std::string& text, const Context& ctx) {
  Formula f = parse_formula(text);
  auto r = equivalence_report(f, ctx.budget);
  json q = query_for("report", ctx);
  q["formula"] = text;
  DecidableFormulaResult shared{{}, r.consistency, r.union_splitting};
  json w = decidable_witness(shared);
  w["statuses"] = {{"axiomatization_problem_decidable", to_string(r.axiomatization_decidable)},
                   {"decidable_formula", to_string(r.decidable_formula)},
                   {"union_splitting_or_inconsistent", to_string(r.union_splitting_or_inconsistent)}};
  Outcome o = r.agree() ? r.decidable_formula : Outcome::Unknown;
  Effort effort = r.union_splitting ? r.union_splitting->verdict.effort : Effort{};
  SearchCursor cursor = r.union_splitting ? r.union_splitting->cursor : SearchCursor{};
  return result(q, o, w, effort, cursor);
}

json run_member(const std::string& text, const std::string& axioms_path, const Context& ctx) {
  Formula f = parse_formula(text);
  JankovAxiomSet s = axiom_set_from_json(read_json_file(axioms_path));
  Verdict v = member_of_jankov_logic(s, f, ctx.budget);
  json q = query_for("member", ctx);
  q["formula"] = text;
  q["axioms"] = to_json(s);
  return result(q, v.outcome, verdict_json(v).at("witness"), v.effort);
}

json run_equal(const std::string& left, const std::string& right, const Context& ctx) {
  Formula f = parse_formula(left);
  Formula g = parse_formula(right);
  auto r = logic_equal(f, g, ctx.budget);
  json q = query_for("equal", ctx);
  q["formulas"] = {left, right};
  json w = {{"report", r.report}};
  if (r.resolved_side) {
    const auto& d = *r.decider;
    w["resolved_side"] = *r.resolved_side;
    w["basis"] = to_string(d.basis);
    w["consistency"] = verdict_json(d.consistency);
    if (d.union_splitting) w["union_splitting"] = union_splitting_json(*d.union_splitting);
    w["answer"] = verdict_json(r.verdict);
  }
  return result(q, r.verdict.outcome, w, r.verdict.effort);
}

json run_jankov(const std::string& frame_path, const Context& ctx) {
  FiniteFrame a = frame_from_json(read_json_file(frame_path));
  JankovAxiom ax = jankov_formula(a);
  json q = query_for("jankov", ctx);
  q["frame"] = to_json(a);
  return result(q, Outcome::Yes, {{"formula", to_string(ax.formula)}, {"height", ax.height}}, {});
}

FrameFilter filter_from(const std::string& name) {
  if (name == "any") return FrameFilter::Any;
  if (name == "rooted") return FrameFilter::Rooted;
  if (name == "rooted-cycle-free") return FrameFilter::RootedCycleFree;
  throw InputError("filter must be any, rooted or rooted-cycle-free");
}

json run_enum(const std::string& filter, bool list, const Context& ctx) {
  FrameEnumerator frames(ctx.budget.max_frame_size, filter_from(filter));
  std::map<std::string, std::size_t> counts;
  json listed = json::array();
  while (auto f = frames.next()) {
    ++counts[std::to_string(f->size())];
    if (list) listed.push_back(to_json(*f));
  }
  json q = query_for("enum-frames", ctx);
  q["filter"] = filter;
  json w = {{"counts", counts}};
  if (list) w["frames"] = listed;
  return result(q, Outcome::Yes, w, {});
}

// ---------------------------------------------------------------------------
// Replay

bool replay(const json& r) {
  const json& q = r.at("query");
  const std::string cmd = q.at("command").get<std::string>();
  const Outcome outcome = outcome_from_string(r.at("verdict").get<std::string>());
  const json& w = r.at("witness");

  if (cmd == "check-union-splitting") {
    return verify_union_splitting(parse_formula(q.at("formula")), union_splitting_from_json(outcome, w));
  }
  if (cmd == "check-splitting") {
    SplittingResult s;
    s.verdict.outcome = outcome;
    s.union_splitting = union_splitting_from(w.at("union_splitting"));
    if (w.contains("splitting_frame")) s.splitting_frame = frame_from_json(w.at("splitting_frame"));
    return verify_splitting(parse_formula(q.at("formula")), s);
  }
  if (cmd == "consistent") {
    Verdict v = verdict_from_json({{"verdict", to_string(outcome)}, {"witness", w}});
    return verify_consistency(parse_formula(q.at("formula")), v);
  }
  if (cmd == "decidable-formula") {
    return verify_decidable_formula(parse_formula(q.at("formula")), decidable_from(outcome, w));
  }
  if (cmd == "report") {
    const json& st = w.at("statuses");
    for (const char* key : {"axiomatization_problem_decidable", "decidable_formula", "union_splitting_or_inconsistent"})
      if (outcome_from_string(st.at(key).get<std::string>()) != outcome) return false;
    return verify_decidable_formula(parse_formula(q.at("formula")), decidable_from(outcome, w));
  }
  if (cmd == "member") {
    Verdict v = verdict_from_json({{"verdict", to_string(outcome)}, {"witness", w}});
    return verify_membership(axiom_set_from_json(q.at("axioms")), parse_formula(q.at("formula")), v);
  }
  if (cmd == "equal") {
    if (!w.contains("resolved_side")) return outcome == Outcome::Unknown;
    const std::size_t side = w.at("resolved_side").get<std::size_t>();
    if (side > 1) return false;
    Formula resolved = parse_formula(q.at("formulas").at(side));
    Formula other = parse_formula(q.at("formulas").at(1 - side));
    AxiomatizationDecider d;
    d.consistency = verdict_from_json(w.at("consistency"));
    if (!verify_consistency(resolved, d.consistency)) return false;
    const std::string basis = w.at("basis").get<std::string>();
    if (basis == "inconsistent") {
      if (d.consistency.outcome != Outcome::No) return false;
      d.basis = DecisionBasis::Inconsistent;
    } else if (basis == "union-splitting") {
      d.basis = DecisionBasis::UnionSplitting;
      d.union_splitting = union_splitting_from(w.at("union_splitting"));
      if (d.union_splitting->verdict.outcome != Outcome::Yes) return false;
      if (!verify_union_splitting(resolved, *d.union_splitting)) return false;
    } else {
      return false;
    }
    Verdict answer = verdict_from_json(w.at("answer"));
    return answer.outcome == outcome && verify_axiomatization_answer(d, other, answer);
  }
  if (cmd == "jankov") {
    JankovAxiom ax = jankov_formula(frame_from_json(q.at("frame")));
    return w.at("formula").get<std::string>() == to_string(ax.formula) && w.at("height").get<std::size_t>() == ax.height;
  }
  if (cmd == "enum-frames") {
    Budget b = budget_from_json(q.at("budget"));
    FrameEnumerator frames(b.max_frame_size, filter_from(q.at("filter").get<std::string>()));
    std::map<std::string, std::size_t> counts;
    std::vector<FiniteFrame> all;
    while (auto f = frames.next()) {
      ++counts[std::to_string(f->size())];
      all.push_back(*f);
    }
    if (w.at("counts").get<std::map<std::string, std::size_t>>() != counts) return false;
    if (w.contains("frames")) {
      const json& listed = w.at("frames");
      if (listed.size() != all.size()) return false;
      for (std::size_t i = 0; i < all.size(); ++i)
        if (!(frame_from_json(listed[i]) == all[i])) return false;
    }
    return true;
  }
  throw InputError("unknown command in result: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedures for normal modal logics K + f"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Context ctx;
  std::string verify_path;
  app.add_option("--max-frame-size", ctx.budget.max_frame_size, "largest frame searched")->capture_default_str();
  app.add_option("--max-steps", ctx.budget.max_candidates, "candidates per search side")->capture_default_str();
  app.add_option("--max-subst-depth", ctx.budget.max_subst_depth, "depth of substitution images")
      ->capture_default_str();
  app.add_option("--max-prefix", ctx.budget.max_prefix, "largest n in box^{<=n}")->capture_default_str();
  app.add_option("--format", ctx.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  app.add_option("--verify", verify_path, "replay the witness in a result file");

  std::string formula, formula2, frame_path, axioms_path, filter = "any";
  bool list = false;

  auto* cus = app.add_subcommand("check-union-splitting", "is K + f a union-splitting?");
  cus->add_option("formula", formula)->required();
  cus->add_option("--cursor", ctx.cursor_path, "resume from an earlier result or cursor file");
  auto* cs = app.add_subcommand("check-splitting", "is K + f a splitting?");
  cs->add_option("formula", formula)->required();
  auto* con = app.add_subcommand("consistent", "is K + f consistent?");
  con->add_option("formula", formula)->required();
  auto* dec = app.add_subcommand("decidable-formula", "is f a decidable formula?");
  dec->add_option("formula", formula)->required();
  auto* eq = app.add_subcommand("equal", "is K + f = K + g?");
  eq->add_option("formula", formula)->required();
  eq->add_option("other", formula2)->required();
  auto* mem = app.add_subcommand("member", "is f in the logic of a set of Jankov frames?");
  mem->add_option("formula", formula)->required();
  mem->add_option("--axioms", axioms_path, "JSON list of frames")->required();
  auto* jan = app.add_subcommand("jankov", "print the Jankov formula of a frame");
  jan->add_option("--frame", frame_path, "frame JSON file")->required();
  auto* en = app.add_subcommand("enum-frames", "count frames up to isomorphism");
  en->add_option("--filter", filter, "any, rooted or rooted-cycle-free")->capture_default_str();
  en->add_flag("--list", list, "include the frames");
  auto* rep = app.add_subcommand("report", "the three equivalent decidability statuses");
  rep->add_option("formula", formula)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (!verify_path.empty()) {
      bool ok = replay(read_json_file(verify_path));
      std::cout << (ok ? "witness replays" : "witness does not replay") << "\n";
      return ok ? kExitYes : kExitNo;
    }
    require_valid_budget(ctx.budget);
    json r;
    if (*cus) r = run_union_splitting(formula, ctx);
    else if (*cs) r = run_splitting(formula, ctx);
    else if (*con) r = run_consistent(formula, ctx);
    else if (*dec) r = run_decidable(formula, ctx);
    else if (*eq) r = run_equal(formula, formula2, ctx);
    else if (*mem) r = run_member(formula, axioms_path, ctx);
    else if (*jan) r = run_jankov(frame_path, ctx);
    else if (*en) r = run_enum(filter, list, ctx);
    else if (*rep) r = run_report(formula, ctx);
    else {
      std::cerr << app.help();
      return kExitInput;
    }
    if (ctx.format == "text")
      print_text(r, std::cout);
    else
      std::cout << r.dump(2) << "\n";
    return exit_code(outcome_from_string(r.at("verdict").get<std::string>()));
  } catch (const InputError& e) {
    std::cerr << "usplit: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usplit: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "usplit: malformed input: " << e.what() << "\n";
    return kExitInput;
  }
}
