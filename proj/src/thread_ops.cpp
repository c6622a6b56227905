#include <algorithm>
#include <cctype>

#include "liftlim/errors.hpp"
#include "analysis_common.hpp"

namespace liftlim {

namespace {

bool same_structure(const Tower& a, const Tower& b) {
  if (a.prefix_length() != b.prefix_length() || a.has_tail() != b.has_tail()) return false;
  const std::size_t stages = a.prefix_length() + (a.has_tail() ? 1 : 0);
  for (std::size_t i = 0; i < stages; ++i)
    if (!(a.group(i).alphabet == b.group(i).alphabet) || a.group(i).relators != b.group(i).relators) return false;
  for (std::size_t i = 0; i + 1 < stages; ++i)
    if (!(a.bonding(i) == b.bonding(i))) return false;
  return !a.has_tail() || a.tail()->bonding == b.tail()->bonding;
}

/// n when h = n·id on Z^r
std::optional<Integer> scalar_of(const GroupHom& h) {
  const IntMatrix m = detail::hom_matrix(h).matrix();
  if (m.rows() == 0) return std::nullopt;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (r != c && m(r, c) != 0) return std::nullopt;
  for (std::size_t r = 1; r < m.rows(); ++r)
    if (m(r, r) != m(0, 0)) return std::nullopt;
  return m(0, 0);
}

GroupHom hom_power(const GroupHom& h, std::size_t k) {
  GroupHom out = GroupHom::identity(h.source());
  for (std::size_t i = 0; i < k; ++i) out = compose(h, out);
  return out;
}

std::vector<GroupRef> prefix_groups(const Tower& t) {
  std::vector<GroupRef> g;
  for (std::size_t i = 0; i < t.prefix_length(); ++i) g.push_back(t.group_ref(i));
  return g;
}

std::vector<GroupHom> prefix_bondings(const Tower& t) {
  std::vector<GroupHom> b;
  const std::size_t n = t.prefix_length() == 0 ? 0 : t.prefix_length() - 1 + (t.has_tail() ? 1 : 0);
  for (std::size_t i = 0; i < n; ++i) b.push_back(t.bonding(i));
  return b;
}

void require_coherent(const Tower& t, std::size_t horizon) {
  const CoherenceResult c = check_coherence(t, horizon);
  if (!c.ok())
    throw CoherenceViolation(c.violations[0].witness, "1",
                             "constructed thread is not coherent at bonding " + std::to_string(c.violations[0].stage));
}

}  // namespace

Tower thread_meet(const Tower& a, const Tower& b, std::size_t horizon) {
  if (a.backend() == Backend::Fp) throw UnsupportedBackend("intersection of coset-table subgroups");
  if (!same_structure(a, b)) throw Error("thread_meet needs two threads over the same tower");
  const auto& budget = a.budget();
  auto meet_at = [&](std::size_t i) { return detail::intersect(a.group(i), a.thread(i), b.thread(i), budget); };

  Thread th;
  for (std::size_t i = 0; i < a.prefix_length(); ++i) th.prefix.push_back(meet_at(i));
  if (!a.has_tail()) {
    Tower out(prefix_groups(a), prefix_bondings(a), std::move(th), std::nullopt, budget);
    if (a.truncated() || b.truncated())
      out.mark_truncated(std::max(a.truncated_horizon(), b.truncated_horizon()));
    return out;
  }

  const std::size_t t0 = a.prefix_length();
  const StageGroup& tg = *a.tail()->group;
  const GroupHom& sa = *a.thread_data().tail_step;
  const GroupHom& sb = *b.thread_data().tail_step;
  std::optional<GroupHom> step;
  if (sa == sb && detail::hom_injective(sa, tg, tg, budget) == true) {
    step = sa;  // s^k(A ∩ B) = s^k(A) ∩ s^k(B) for injective s
  } else if (tg.backend == Backend::Abelian && a.thread(t0) == full_subgroup(tg) && b.thread(t0) == full_subgroup(tg)) {
    const auto x = scalar_of(sa), y = scalar_of(sb);
    if (x && y && *x != 0 && *y != 0) {
      // a^k Z^r ∩ b^k Z^r = lcm(a, b)^k Z^r
      Integer l;
      mpz_lcm(l.get_mpz_t(), x->get_mpz_t(), y->get_mpz_t());
      step = detail::hom_from_matrix(tg, tg, scaled(IntMatrix::identity(tg.rank()), l));
    }
  }
  if (step) {
    th.tail_start = meet_at(t0);
    th.tail_step = *step;
    Tower out(prefix_groups(a), prefix_bondings(a), std::move(th), a.tail(), budget);
    require_coherent(out, horizon);
    return out;
  }

  // no closed form for the tail: materialize it up to the horizon
  std::vector<GroupRef> groups = prefix_groups(a);
  std::vector<GroupHom> bondings = prefix_bondings(a);
  const std::size_t last = std::max(horizon, t0);
  for (std::size_t i = t0; i <= last; ++i) {
    groups.push_back(a.tail()->group);
    th.prefix.push_back(meet_at(i));
    if (i < last) bondings.push_back(a.tail()->bonding);
  }
  Tower out(std::move(groups), std::move(bondings), std::move(th), std::nullopt, budget);
  out.mark_truncated(horizon);
  return out;
}

Tower thread_from_subgroup(const Tower& t, const BaseModel& m, const std::vector<Word>& generators) {
  for (const auto& w : generators)
    if (!(w.alphabet() == m.group->alphabet)) throw AlphabetMismatch("generator is not over the base model alphabet");
  auto image_at = [&](const GroupHom& phi, const StageGroup& g) {
    std::vector<Word> gens;
    for (const auto& w : generators) gens.push_back(apply_hom(phi, w));
    return Subgroup(g, std::move(gens), t.budget());
  };
  Thread th;
  for (std::size_t i = 0; i < t.prefix_length(); ++i) th.prefix.push_back(image_at(m.map(i), t.group(i)));
  std::optional<Tail> tail = t.tail();
  if (tail) {
    // b∘φ_T = φ_T, so the constant thread φ_T(G) is coherent on the tail
    th.tail_start = image_at(*m.tail_map, *tail->group);
    th.tail_step = GroupHom::identity(tail->group->alphabet);
    tail->step = *th.tail_step;
  }
  Tower out(prefix_groups(t), prefix_bondings(t), std::move(th), std::move(tail), t.budget());
  if (t.truncated()) out.mark_truncated(t.truncated_horizon());
  require_coherent(out, 1);
  return out;
}

namespace {

bool lifts(const Tower& src, const Tower& dst, const TowerMap& f, std::size_t i, std::size_t j) {
  const GroupHom h = compose(f.map(i), src.bonding_composite(i, j));
  const Subgroup img = detail::image(h, dst.group(i), src.thread(j), dst.budget());
  return detail::contains(dst.group(i), dst.thread(i), img);
}

/// Certifies that no j works for dst stage i: the lattices (bs)^k(G_r) + MZ^n repeat, with
/// MZ^n mapping into H_i, and none of them maps into H_i.
bool obstructed_by_chain(const Tower& src, const Tower& dst, const TowerMap& f, std::size_t i) {
  if (src.backend() != Backend::Abelian || dst.backend() != Backend::Abelian || !src.has_tail()) return false;
  const QuotientInfo q = quotient_info(dst.thread(i).lattice());
  if (!q.finite) return false;
  const Integer mod = q.cyclic_factors.empty() ? Integer(1) : q.cyclic_factors.back();
  const StageGroup& tg = *src.tail()->group;
  const std::size_t r = std::max(i, src.prefix_length());
  const AbelianHom u = detail::hom_matrix(compose(f.map(i), src.bonding_composite(i, r)));
  const AbelianHom bs = detail::hom_matrix(compose(src.tail()->bonding, *src.thread_data().tail_step));
  const Lattice mz = image(AbelianHom::scalar(tg.rank(), mod), Lattice::full(tg.rank()));
  std::vector<Lattice> seen;
  Lattice l = lattice_sum(src.thread(r).lattice(), mz);
  while (std::find(seen.begin(), seen.end(), l) == seen.end()) {
    if (liftlim::contains(dst.thread(i).lattice(), image(u, l))) return false;
    seen.push_back(l);
    l = lattice_sum(image(bs, l), mz);
    if (seen.size() > (1u << 14)) return false;
  }
  return true;
}

}  // namespace

static LiftResult lift_exists_exact(const Tower& src, const Tower& dst, const TowerMap& f, std::size_t horizon) {
  LiftResult out;
  out.certainty = Certainty::limited(horizon);
  const std::size_t n = dst.stages_up_to(horizon);
  const detail::TailFacts sf = detail::tail_facts(src, horizon);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t jmax = src.has_tail() ? std::max(i, src.prefix_length()) + horizon : src.last_stage();
    std::optional<std::size_t> found;
    for (std::size_t j = i; j <= jmax && !found; ++j)
      if (lifts(src, dst, f, i, j)) found = j;
    if (!found) {
      out.stage = i;
      if (!src.has_tail()) {
        out.kind = LiftKind::Obstructed;
        out.certainty = Certainty::by("finite-chain");
      } else if (sf.commute && obstructed_by_chain(src, dst, f, i)) {
        out.kind = LiftKind::Obstructed;
        out.certainty = Certainty::by("stationary-induction");
      }
      return out;
    }
    out.witnesses.push_back(*found);
  }
  out.kind = LiftKind::Liftable;
  if (!dst.has_tail()) {
    out.certainty = Certainty::by("finite-chain");
    return out;
  }
  // f_T∘s = s'∘f_T and b∘s = s∘b carry the witness at the first tail stage to every later stage
  const std::size_t t0 = dst.prefix_length();
  if (src.has_tail() && src.prefix_length() == t0 && f.tail_map && sf.commute) {
    const StageGroup& dg = *dst.tail()->group;
    const auto intertwines = detail::homs_equal(dg, compose(*f.tail_map, *src.thread_data().tail_step),
                                                compose(*dst.thread_data().tail_step, *f.tail_map), dst.budget());
    if (intertwines == true) {
      out.tail_offset = out.witnesses[t0] - t0;
      out.certainty = Certainty::by("stationary-induction");
    }
  }
  return out;
}

IndexSequence parse_indices(const std::string& text) {
  IndexSequence seq;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> void { throw ParseError(0, pos + 1, msg); };
  auto number = [&]() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected a stage index");
    const std::size_t v = std::stoul(text.substr(start, pos - start));
    while (pos < text.size() && text[pos] == ' ') ++pos;
    return v;
  };
  while (true) {
    const std::size_t v = number();
    const std::optional<std::size_t> prev =
        seq.explicit_indices.empty() ? std::nullopt : std::optional<std::size_t>(seq.explicit_indices.back());
    if (prev && v <= *prev) fail("indices must be strictly increasing");
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      const std::size_t step = number();
      if (step == 0) fail("progression step must be positive");
      if (pos != text.size()) fail("the progression must come last");
      seq.progression = std::make_pair(v, step);
      return seq;
    }
    seq.explicit_indices.push_back(v);
    if (pos == text.size()) return seq;
    if (text[pos] != ',') fail("expected ','");
    ++pos;
  }
}

namespace {

/// Prefix indices, and the first progression index at or past the tail start (infinite towers).
std::pair<std::vector<std::size_t>, std::optional<std::size_t>> layout(const Tower& t, const IndexSequence& seq) {
  std::vector<std::size_t> idx = seq.explicit_indices;
  if (!t.has_tail()) {
    if (seq.progression)
      for (std::size_t k = seq.progression->first; k <= t.last_stage(); k += seq.progression->second) idx.push_back(k);
    std::vector<std::size_t> kept;
    for (auto k : idx)
      if (k <= t.last_stage()) kept.push_back(k);
    if (kept.empty() || kept.back() != t.last_stage())
      throw NonCofinal("a finite tower restriction must keep the last stage " + std::to_string(t.last_stage()));
    return {kept, std::nullopt};
  }
  if (!seq.progression) throw NonCofinal("finitely many indices against an infinite tower");
  auto [a, d] = *seq.progression;
  const std::size_t t0 = t.prefix_length();
  while (a < t0) {
    idx.push_back(a);
    a += d;
  }
  return {idx, a};
}

}  // namespace

Tower restrict_cofinal(const Tower& t, const IndexSequence& seq) {
  const auto [idx, tail_at] = layout(t, seq);
  std::vector<GroupRef> groups;
  std::vector<GroupHom> bondings;
  Thread th;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    groups.push_back(t.group_ref(idx[k]));
    th.prefix.push_back(t.thread(idx[k]));
    if (k + 1 < idx.size()) bondings.push_back(t.bonding_composite(idx[k], idx[k + 1]));
  }
  std::optional<Tail> tail;
  if (tail_at) {
    const std::size_t d = seq.progression->second;
    if (!idx.empty()) bondings.push_back(t.bonding_composite(idx.back(), *tail_at));
    tail = Tail{t.tail()->group, hom_power(t.tail()->bonding, d), hom_power(*t.thread_data().tail_step, d)};
    th.tail_start = t.thread(*tail_at);
    th.tail_step = tail->step;
  }
  Tower out(std::move(groups), std::move(bondings), std::move(th), std::move(tail), t.budget());
  if (t.truncated()) out.mark_truncated(t.truncated_horizon());
  return out;
}

BaseModel restrict_base(const Tower& t, const BaseModel& m, const IndexSequence& seq) {
  const auto [idx, tail_at] = layout(t, seq);
  BaseModel out{m.group, {}, std::nullopt};
  for (auto k : idx) out.stage_maps.push_back(m.map(k));
  if (tail_at) out.tail_map = m.tail_map;
  return out;
}

LiftResult lift_exists(const Tower& src, const Tower& dst, const TowerMap& f, std::size_t horizon) {
  LiftResult r = lift_exists_exact(src, dst, f, horizon);
  detail::cap(src, r.certainty);
  detail::cap(dst, r.certainty);
  return r;
}

}  // namespace liftlim
