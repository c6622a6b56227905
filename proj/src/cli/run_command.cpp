#include "liftlim/cli.hpp"

#include <algorithm>
#include <cctype>

#include "liftlim/errors.hpp"
#include "report.hpp"

namespace liftlim {

using detail::Json;
using detail::Report;

namespace {

/// Request-level problems the caller can fix on the command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

const Tower& tower_of(const SpecDocument& doc) { return *doc.tower; }

const BaseModel& base_of(const SpecDocument& doc) {
  if (!doc.base) throw UsageError("this command needs a [base] section");
  return *doc.base;
}

const SpecDocument& target_of(const CommandOptions& o) {
  if (!o.target) throw UsageError("this command needs --target");
  return *o.target;
}

Json thread_stages(const Tower& t, std::size_t horizon) {
  Json stages = Json::array();
  for (std::size_t i = 0; i < t.stages_up_to(horizon); ++i)
    stages.push_back({{"stage", i}, {"group", t.group(i).name}, {"thread", describe(t.group(i), t.thread(i))}});
  return stages;
}

void require_coherent(const Tower& t, std::size_t horizon, const std::string& label) {
  const CoherenceResult c = check_coherence(t, horizon);
  if (c.ok()) return;
  const auto& v = c.violations.front();
  throw CoherenceViolation(v.witness, std::to_string(v.stage),
                           label + ": bonding " + std::to_string(v.stage) + " maps " + v.witness + " outside G_" +
                               std::to_string(v.stage));
}

std::string pick(Pi0Kind k, const Integer& n) {
  switch (k) {
    case Pi0Kind::Trivial: return "Trivial";
    case Pi0Kind::Uncountable: return "Uncountable";
    case Pi0Kind::CosetCount: return "CosetCount(" + n.get_str() + ")";
    default: return "Unknown";
  }
}

std::string pick(FiberKind k, const Integer& n) {
  switch (k) {
    case FiberKind::Finite: return "Finite(" + n.get_str() + ")";
    case FiberKind::Uncountable: return "Uncountable";
    default: return "Unknown";
  }
}

Report check(const SpecDocument& doc, std::size_t h, bool& incoherent) {
  const Tower& t = tower_of(doc);
  Report r{"check", "ok", {}, h, {}, {}, "coherent thread: each bonding maps G_{i+1} into G_i"};
  const CoherenceResult c = check_coherence(t, h);
  r.certainty = c.certainty;
  for (const auto& v : c.violations)
    r.witnesses.push_back("bonding " + std::to_string(v.stage) + ": " + v.witness + " not in G_" + std::to_string(v.stage));
  if (doc.base && c.ok()) {
    try {
      check_base_model(t, *doc.base, h);
    } catch (const CoherenceViolation& e) {
      r.witnesses.push_back(std::string("base model: ") + e.what());
    }
  }
  incoherent = !r.witnesses.empty();
  if (incoherent) r.verdict = "CoherenceViolation";
  r.stages = thread_stages(t, h);
  return r;
}

Report classify(const Tower& t, std::size_t h) {
  const StabilityResult s = stability_analysis(t, h);
  Report r{"classify", to_string(s.classification), s.classification.certainty, h, {}, {},
           "the limit is a covering iff the coset maps are eventually injective"};
  if (!s.classification.witness.empty()) r.witnesses.push_back(s.classification.witness);
  std::string ml = !s.ml_known ? "unknown" : (*s.ml_known ? "yes" : "no");
  if (s.ml_known) ml += s.ml_certainty.certified ? " [" + s.ml_certainty.rule + "]" : " [" + to_string(s.ml_certainty) + "]";
  r.witnesses.push_back("mittag-leffler: " + ml);
  for (const auto& st : s.stages) {
    Json j{{"stage", st.stage}, {"cosets", detail::optional_integer_json(st.coset_count)}};
    j["stable"] = st.stable_count ? detail::integer_json(*st.stable_count) : Json(nullptr);
    j["stable_certified"] = st.stable_certified;
    j["map_injective"] = st.map_injective ? Json(*st.map_injective) : Json(nullptr);
    r.stages.push_back(std::move(j));
  }
  return r;
}

Report fiber(const Tower& t, std::size_t h) {
  const FiberResult f = fiber_model(t, h);
  Report r{"fiber", pick(f.limit, f.limit_count), f.certainty, h, {}, {},
           "the fibre over the base point is the inverse limit of the coset spaces pi1(X_i)/G_i"};
  for (std::size_t i = 0; i < f.counts.size(); ++i)
    r.stages.push_back({{"stage", i}, {"cosets", detail::optional_integer_json(f.counts[i])}});
  return r;
}

Report pi1(const SpecDocument& doc, const CommandOptions& o) {
  const BaseModel& m = base_of(doc);
  if (!o.word) throw UsageError("pi1 needs --word");
  const Word w = parse_word(*o.word, m.group->alphabet);
  const Pi1Result p = pi1_membership(tower_of(doc), m, w, o.horizon);
  Report r{"pi1", p.accepted ? "InDescriptor" : "RejectedAtStage(" + std::to_string(p.rejected_stage) + ")",
           p.certainty, o.horizon, {"word: " + to_string(w)}, {},
           "pi1 of the limit is the intersection of the preimages phi_i^-1(G_i)"};
  if (!p.accepted)
    r.witnesses.push_back("phi_" + std::to_string(p.rejected_stage) + "(w) = " +
                          to_string(apply_hom(m.map(p.rejected_stage), w)) + " not in G_" +
                          std::to_string(p.rejected_stage));
  return r;
}

Report pi0(const SpecDocument& doc, std::size_t h) {
  const Pi0Result p = pi0_report(tower_of(doc), base_of(doc), h);
  return {"pi0", pick(p.kind, p.count), p.certainty, h, {}, Json::array(),
          "path components: orbits of the base group on the inverse limit of coset spaces"};
}

Report deck(const Tower& t, std::size_t h) {
  const DeckResult d = deck_tower(t, h);
  Report r{"deck", "DeckTower", d.certainty, h, {}, {}, "deck groups N(G_i)/G_i with the induced bondings"};
  for (const auto& s : d.stages)
    r.stages.push_back({{"stage", s.stage},
                        {"order", detail::optional_integer_json(s.order)},
                        {"structure", s.structure},
                        {"bonding", s.bonding}});
  return r;
}

Report dense(const SpecDocument& doc, std::size_t h) {
  const DensityResult d = density(tower_of(doc), base_of(doc), h);
  std::string v = d.kind == DensityKind::Dense      ? "Dense"
                  : d.kind == DensityKind::NotDense ? "NotDense(" + std::to_string(d.witness_stage) + ")"
                                                    : "Unknown";
  Report r{"density", v, d.certainty, h, {}, Json::array(),
           "density of the base image in the limit of coset spaces: stagewise surjectivity onto the stable "
           "image, or one of the finiteness conditions"};
  for (const auto& c : d.criteria) r.witnesses.push_back("criterion: " + c);
  return r;
}

Report tower_report(const std::string& command, const Tower& t, std::size_t h, std::string provenance) {
  const CoherenceResult c = check_coherence(t, h);
  Report r{command, "Tower", c.certainty, h, {}, thread_stages(t, h), std::move(provenance)};
  if (t.truncated() && r.certainty.certified) r.certainty = Certainty::limited(t.truncated_horizon());
  r.witnesses.push_back("classification: " + to_string(stability_analysis(t, h).classification));
  return r;
}

Report meet(const SpecDocument& doc, const CommandOptions& o) {
  const SpecDocument& other = target_of(o);
  require_coherent(tower_of(other), o.horizon, "--target");
  return tower_report("meet", thread_meet(tower_of(doc), tower_of(other), o.horizon), o.horizon,
                      "meet of two threads over the same tower: G_i intersect H_i");
}

Report thread_from(const SpecDocument& doc, const CommandOptions& o) {
  const BaseModel& m = base_of(doc);
  if (!o.word) throw UsageError("thread-from needs --word with comma-separated generators");
  std::vector<Word> gens;
  std::string item;
  for (std::size_t i = 0; i <= o.word->size(); ++i) {
    if (i == o.word->size() || (*o.word)[i] == ',') {
      gens.push_back(parse_word(item, m.group->alphabet));
      item.clear();
    } else {
      item += (*o.word)[i];
    }
  }
  return tower_report("thread-from", thread_from_subgroup(tower_of(doc), m, gens), o.horizon,
                      "thread of images phi_i(G) of a subgroup G of the base group");
}

Report lift(const SpecDocument& doc, const CommandOptions& o) {
  const SpecDocument& other = target_of(o);
  if (!doc.map) throw UsageError("lift needs a [map] section in the source spec");
  require_coherent(tower_of(other), o.horizon, "--target");
  const LiftResult l = lift_exists(tower_of(doc), tower_of(other), *doc.map, o.horizon);
  std::string v = l.kind == LiftKind::Liftable     ? "Liftable"
                  : l.kind == LiftKind::Obstructed ? "Obstructed(" + std::to_string(l.stage) + ")"
                                                   : "Unknown";
  Report r{"lift", v, l.certainty, o.horizon, {}, {}, "lifting criterion: f_i u_ij(G_j) <= H_i for some j >= i"};
  if (l.tail_offset) r.witnesses.push_back("tail: j(i) = i + " + std::to_string(*l.tail_offset));
  for (std::size_t i = 0; i < l.witnesses.size(); ++i) r.stages.push_back({{"stage", i}, {"j", l.witnesses[i]}});
  return r;
}

Report restrict(const SpecDocument& doc, const CommandOptions& o) {
  if (!o.indices) throw UsageError("restrict needs --indices");
  const IndexSequence seq = parse_indices(*o.indices);
  const Tower r = restrict_cofinal(tower_of(doc), seq);
  if (doc.base) check_base_model(r, restrict_base(tower_of(doc), *doc.base, seq), o.horizon);
  return tower_report("restrict", r, o.horizon, "restriction to a cofinal subsequence leaves the limit unchanged");
}

Report dispatch(const SpecDocument& doc, const std::string& cmd, const CommandOptions& o, bool& incoherent) {
  const std::size_t h = o.horizon;
  if (cmd == "check") return check(doc, h, incoherent);
  {
    Report c = check(doc, h, incoherent);
    if (incoherent) {
      c.command = cmd;
      return c;
    }
  }
  if (cmd == "classify") return classify(tower_of(doc), h);
  if (cmd == "fiber") return fiber(tower_of(doc), h);
  if (cmd == "pi1") return pi1(doc, o);
  if (cmd == "pi0") return pi0(doc, h);
  if (cmd == "deck") return deck(tower_of(doc), h);
  if (cmd == "density") return dense(doc, h);
  if (cmd == "meet") return meet(doc, o);
  if (cmd == "thread-from") return thread_from(doc, o);
  if (cmd == "lift") return lift(doc, o);
  if (cmd == "restrict") return restrict(doc, o);
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"check", "classify", "fiber",       "pi1",  "pi0",     "deck",
                                                 "density", "meet",   "thread-from", "lift", "restrict"};
  return names;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ReferenceError*>(&e) ||
      dynamic_cast<const UsageError*>(&e))
    return 2;
  if (dynamic_cast<const CoherenceViolation*>(&e)) return 3;
  if (dynamic_cast<const BudgetExceeded*>(&e)) return 4;
  return 1;
}

CommandOutcome run_command(const SpecDocument& doc, const std::string& command, const CommandOptions& options) {
  CommandOutcome out;
  try {
    if (!doc.tower) throw UsageError("spec has no tower");
    bool incoherent = false;
    const Report r = dispatch(doc, command, options, incoherent);
    out.report = detail::render(r, options.format);
    if (incoherent) {
      out.exit_code = 3;
      out.diagnostics = "liftlim: coherence violation: " + r.witnesses.front() + "\n";
    } else if (options.require_certified && !r.certainty.certified) {
      out.exit_code = 5;
      out.diagnostics = "liftlim: verdict is " + to_string(r.certainty) + ", not certified\n";
    }
  } catch (const std::exception& e) {
    out.report.clear();
    out.exit_code = exit_code_for(e);
    out.diagnostics = std::string("liftlim: ") + e.what() + "\n";
  }
  return out;
}

std::size_t resolve_horizon(std::optional<std::size_t> flag, const SpecDocument& doc, const char* env_value) {
  if (flag) {
    if (*flag == 0) throw UsageError("--horizon must be positive");
    return *flag;
  }
  if (doc.horizon) return *doc.horizon;
  if (env_value && *env_value) {
    const std::string s(env_value);
    if (s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        std::stoul(s) == 0)
      throw UsageError("LIFTLIM_DEFAULT_HORIZON must be a positive integer, got '" + s + "'");
    return std::stoul(s);
  }
  return kDefaultHorizon;
}

}  // namespace liftlim
