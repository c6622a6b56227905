#include "liftlim/errors.hpp"
#include "analysis_common.hpp"

namespace liftlim {

using detail::InjectivityAnswer;

namespace {

constexpr std::size_t kRejectionSearchCap = 4096;

std::string map_witness(std::size_t i, const InjectivityAnswer& a) {
  return "stage " + std::to_string(i) + ": " + a.witness;
}

/// N with every map out of stage j+1 injective for j >= N, from maps [0, upto); nullopt if one is unknown.
std::optional<std::size_t> covering_stage(const std::vector<InjectivityAnswer>& maps, std::size_t upto) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < upto; ++i) {
    if (!maps[i].injective) return std::nullopt;
    if (!*maps[i].injective) n = i + 1;
  }
  return n;
}

Classification classify(const Tower& t, std::size_t horizon, const detail::TailFacts& f,
                        const std::vector<InjectivityAnswer>& maps) {
  Classification c;
  c.certainty = Certainty::limited(horizon);
  if (!t.has_tail()) {
    if (auto n = covering_stage(maps, maps.size())) {
      c.kind = ClassKind::Covering;
      c.stage = *n;
      c.certainty = Certainty::by("finite-chain");
    }
    return c;
  }
  const std::size_t t0 = t.prefix_length();
  if (f.period_start) {
    const std::size_t from = t0 + *f.period_start, to = from + f.period;
    bool known = true, injective = true;
    std::size_t bad = 0;
    for (std::size_t i = from; i < to; ++i) {
      if (!maps[i].injective) known = false;
      else if (!*maps[i].injective && injective) injective = false, bad = i;
    }
    if (known && !injective) {
      c.kind = ClassKind::StrictLifting;
      c.witness = map_witness(bad, maps[bad]);
      c.certainty = Certainty::by("finite-chain");
      return c;
    }
    if (known)
      if (auto n = covering_stage(maps, from)) {
        c.kind = ClassKind::Covering;
        c.stage = *n;
        c.certainty = Certainty::by("finite-chain");
        return c;
      }
  }
  // a non-injective tail map stays non-injective after applying s when s is injective and commutes with b
  if (f.commute && f.step_injective)
    for (std::size_t i = t0; i < maps.size(); ++i)
      if (maps[i].injective == false) {
        c.kind = ClassKind::StrictLifting;
        c.witness = map_witness(i, maps[i]);
        c.certainty = Certainty::by("stationary-induction");
        return c;
      }
  return c;
}

bool all_prefix_bondings_surjective(const Tower& t) {
  const std::size_t n = t.has_tail() ? t.prefix_length() : t.last_stage();
  for (std::size_t i = 0; i < n; ++i)
    if (!detail::hom_surjective(t.bonding(i), t.group(i + 1), t.group(i), t.budget())) return false;
  return true;
}

}  // namespace

namespace detail {

TowerSurvey survey(const Tower& t, std::size_t horizon) {
  TowerSurvey s;
  s.facts = tail_facts(t, horizon);
  s.image = tail_group_image(t, horizon);
  const std::size_t maps = t.has_tail() ? t.prefix_length() + horizon : t.last_stage();
  for (std::size_t i = 0; i < maps; ++i) s.maps.push_back(stage_map_injective(t, i));
  s.classification = classify(t, horizon, s.facts, s.maps);
  return s;
}

}  // namespace detail

static StabilityResult stability_analysis_exact(const Tower& t, std::size_t horizon) {
  const detail::TowerSurvey sv = detail::survey(t, horizon);
  StabilityResult out;
  const std::size_t n = t.stages_up_to(horizon);
  for (std::size_t i = 0; i < n; ++i) {
    StageStability st;
    st.stage = i;
    st.coset_count = detail::index(t.group(i), t.thread(i));
    const auto stable = detail::coset_stable_image(t, i, horizon, sv.image);
    st.stable_count = stable.count;
    st.stable_certified = stable.certified;
    if (i < sv.maps.size()) st.map_injective = sv.maps[i].injective;
    out.stages.push_back(std::move(st));
  }

  const bool surjective = all_prefix_bondings_surjective(t) && (!t.has_tail() || sv.facts.bonding_surjective);
  if (surjective) {
    out.ml_known = true;
    out.ml_certainty = Certainty::by("surjective-bondings");
  } else if (!t.has_tail()) {
    out.ml_known = true;
    out.ml_certainty = Certainty::by("finite-chain");
  } else if (sv.image.ml) {
    out.ml_known = *sv.image.ml;
    out.ml_certainty = Certainty::by(t.backend() == Backend::Abelian ? "divisible-core" : "finite-chain");
  } else {
    out.ml_certainty = Certainty::limited(horizon);
  }
  out.mittag_leffler = out.ml_known.value_or(false);
  out.classification = sv.classification;
  out.eventually_injective = sv.classification.kind == ClassKind::Covering;
  return out;
}

namespace {

FiberResult fiber_from(const Tower& t, std::size_t horizon, const detail::TowerSurvey& sv) {
  FiberResult out;
  const std::size_t n = t.stages_up_to(horizon);
  for (std::size_t i = 0; i < n; ++i) out.counts.push_back(detail::index(t.group(i), t.thread(i)));
  out.certainty = Certainty::limited(horizon);
  const Classification& c = sv.classification;
  if (c.kind == ClassKind::Covering && c.certainty.certified) {
    const auto stable = detail::coset_stable_image(t, c.stage, horizon, sv.image);
    if (stable.certified && stable.count) {
      out.limit = FiberKind::Finite;
      out.limit_count = *stable.count;
      out.certainty = c.certainty;
    }
    return out;
  }
  if (c.kind == ClassKind::StrictLifting && c.certainty.certified && sv.facts.bonding_surjective &&
      sv.facts.finite_spaces) {
    for (std::size_t i = 0; i < t.prefix_length(); ++i)
      if (!out.counts[i]) return out;
    // finite nonempty sets, surjective maps, infinitely many of them non-injective
    out.limit = FiberKind::Uncountable;
    out.certainty = c.certainty;
  }
  return out;
}

}  // namespace

static FiberResult fiber_model_exact(const Tower& t, std::size_t horizon) { return fiber_from(t, horizon, detail::survey(t, horizon)); }

static Pi1Result pi1_membership_exact(const Tower& t, const BaseModel& m, const Word& w, std::size_t horizon) {
  if (!(w.alphabet() == m.group->alphabet)) throw AlphabetMismatch("word is not over the base model alphabet");
  Pi1Result out;
  if (w.is_identity()) {
    out.accepted = true;
    out.certainty = Certainty::by("trivial-word");
    return out;
  }
  auto rejects = [&](std::size_t i) { return !detail::member(t.group(i), t.thread(i), apply_hom(m.map(i), w)); };
  const std::size_t n = t.stages_up_to(horizon);
  for (std::size_t i = 0; i < n; ++i)
    if (rejects(i)) {
      out.rejected_stage = i;
      out.certainty = Certainty::by("stage-witness");
      return out;
    }
  out.accepted = true;
  if (!t.has_tail()) {
    out.certainty = Certainty::by("finite-chain");
    return out;
  }
  const std::size_t t0 = t.prefix_length();
  const Tail& tail = *t.tail();
  const StageGroup& tg = *tail.group;
  if (tg.backend == Backend::Abelian) {
    // ∩_k G_{t+k} = ∩_k s^k(G_t)
    const Lattice core = divisible_core(detail::hom_matrix(tail.step), t.thread(t0).lattice());
    if (liftlim::member(abelianize(apply_hom(*m.tail_map, w)), core)) {
      out.certainty = Certainty::by("divisible-core");
      return out;
    }
    for (std::size_t i = n; i < t0 + kRejectionSearchCap; ++i)
      if (rejects(i)) {
        out.accepted = false;
        out.rejected_stage = i;
        out.certainty = Certainty::by("divisible-core");
        return out;
      }
    out.certainty = Certainty::limited(t0 + kRejectionSearchCap);
    return out;
  }
  const detail::TailFacts f = detail::tail_facts(t, horizon);
  if (f.period_start) {
    const std::size_t end = t0 + *f.period_start + f.period;
    for (std::size_t i = n; i < end; ++i)
      if (rejects(i)) {
        out.accepted = false;
        out.rejected_stage = i;
        out.certainty = Certainty::by("finite-chain");
        return out;
      }
    out.certainty = Certainty::by("finite-chain");
    return out;
  }
  out.certainty = Certainty::limited(horizon);
  return out;
}

static Pi0Result pi0_report_exact(const Tower& t, const BaseModel& m, std::size_t horizon) {
  const detail::TowerSurvey sv = detail::survey(t, horizon);
  Pi0Result out;
  out.certainty = Certainty::limited(horizon);
  const Classification& c = sv.classification;
  if (c.kind == ClassKind::Covering && c.certainty.certified) {
    const std::size_t N = c.stage;
    const StageGroup& g = t.group(N);
    const auto stable = detail::coset_stable_image(t, N, horizon, sv.image);
    if (!stable.certified) return out;
    std::vector<Word> phi;
    for (const auto& w : detail::full_generators(*m.group)) phi.push_back(apply_hom(m.map(N), w));
    if (!stable.count) {
      // infinite stable coset space: only a single orbit is decidable
      std::vector<Word> reach = phi;
      for (const auto& w : t.thread(N).generators()) reach.push_back(w);
      if (detail::covers_stable(t, N, reach, stable) == true) {
        out.kind = Pi0Kind::Trivial;
        out.count = 1;
        out.certainty = c.certainty;
      }
      return out;
    }
    std::optional<Integer> orbits;
    if (stable.lattice) {
      std::vector<IntVector> cols;
      for (const auto& w : phi) cols.push_back(abelianize(w));
      const Lattice reach = lattice_sum(Lattice::from_vectors(g.rank(), cols), t.thread(N).lattice());
      orbits = relative_index(*stable.lattice, reach);
    } else if (stable.action) {
      orbits = Integer(static_cast<unsigned long>(detail::orbit_count(g, *stable.action, phi, stable.marks)));
    }
    if (!orbits) return out;
    out.kind = *orbits == 1 ? Pi0Kind::Trivial : Pi0Kind::CosetCount;
    out.count = *orbits;
    out.certainty = c.certainty;
    return out;
  }
  const FiberResult fiber = fiber_from(t, horizon, sv);
  if (fiber.limit == FiberKind::Uncountable) {
    // each orbit of the countable group P is countable
    out.kind = Pi0Kind::Uncountable;
    out.certainty = fiber.certainty;
  }
  return out;
}

// A truncated tower stands in for an infinite one: nothing about it is certified.
StabilityResult stability_analysis(const Tower& t, std::size_t horizon) {
  StabilityResult r = stability_analysis_exact(t, horizon);
  detail::cap(t, r.ml_certainty);
  detail::cap(t, r.classification.certainty);
  return r;
}

FiberResult fiber_model(const Tower& t, std::size_t horizon) {
  FiberResult r = fiber_model_exact(t, horizon);
  detail::cap(t, r.certainty);
  return r;
}

Pi1Result pi1_membership(const Tower& t, const BaseModel& m, const Word& w, std::size_t horizon) {
  Pi1Result r = pi1_membership_exact(t, m, w, horizon);
  if (r.accepted && !w.is_identity()) detail::cap(t, r.certainty);
  return r;
}

Pi0Result pi0_report(const Tower& t, const BaseModel& m, std::size_t horizon) {
  Pi0Result r = pi0_report_exact(t, m, horizon);
  detail::cap(t, r.certainty);
  return r;
}

}  // namespace liftlim
