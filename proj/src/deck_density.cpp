#include "liftlim/errors.hpp"
#include "analysis_common.hpp"

namespace liftlim {

namespace {

std::optional<Word> normality_witness(const StageGroup& g, const Subgroup& h) {
  for (std::size_t x = 0; x < g.rank(); ++x) {
    const Word gx = Word::generator(g.alphabet, x);
    for (const auto& s : h.generators()) {
      for (int sign : {1, -1}) {
        const Word c = sign > 0 ? multiply(multiply(gx, s), invert(gx)) : multiply(multiply(invert(gx), s), gx);
        if (!detail::member(g, h, c)) return c;
      }
    }
  }
  return std::nullopt;
}

IntMatrix minor_without(const IntMatrix& a, std::size_t row, std::size_t col) {
  IntMatrix m(a.rows() - 1, a.cols() - 1);
  for (std::size_t r = 0, rr = 0; r < a.rows(); ++r) {
    if (r == row) continue;
    for (std::size_t c = 0, cc = 0; c < a.cols(); ++c) {
      if (c == col) continue;
      m(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return m;
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return a;
  if (n == 1) return IntMatrix::identity(1);
  const Integer det = determinant(a);  // ±1
  IntMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Integer cof = determinant(minor_without(a, c, r));
      if ((r + c) % 2) cof = -cof;
      inv(r, c) = cof * det;
    }
  return inv;
}

/// Quotient coordinates Z^n/G -> ⊕ Z/d_k: x ↦ (L x) restricted to the rows in `rows`,
/// `mods[k]` being d_k or 0 for a free coordinate.
struct QuotientCoords {
  IntMatrix left;
  std::vector<std::size_t> rows;
  std::vector<Integer> mods;
};

QuotientCoords quotient_coords(const Lattice& l) {
  QuotientCoords q;
  const std::size_t n = l.ambient();
  IntVector diag(n, Integer(0));
  if (l.rank() == 0) {
    q.left = IntMatrix::identity(n);
  } else {
    const HermiteSmith hs = hermite_smith(l.basis());
    q.left = hs.left;
    for (std::size_t k = 0; k < hs.snf.size(); ++k) diag[k] = hs.snf[k];
  }
  for (std::size_t k = 0; k < n; ++k)
    if (diag[k] != 1) {
      q.rows.push_back(k);
      q.mods.push_back(diag[k]);
    }
  return q;
}

std::string structure_of(const QuotientCoords& q) {
  if (q.rows.empty()) return "1";
  std::string s;
  for (const auto& d : q.mods) {
    if (!s.empty()) s += " x ";
    s += d == 0 ? std::string("Z") : "Z/" + d.get_str();
  }
  return s;
}

std::string induced_matrix(const QuotientCoords& lower, const QuotientCoords& upper, const GroupHom& bonding) {
  const IntMatrix m = lower.left * detail::hom_matrix(bonding).matrix() * unimodular_inverse(upper.left);
  std::string s = "[";
  for (std::size_t a = 0; a < lower.rows.size(); ++a) {
    if (a) s += ", ";
    s += "[";
    for (std::size_t b = 0; b < upper.rows.size(); ++b) {
      if (b) s += ", ";
      Integer e = m(lower.rows[a], upper.rows[b]);
      if (lower.mods[a] != 0) mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), lower.mods[a].get_mpz_t());
      s += e.get_str();
    }
    s += "]";
  }
  return s + "]";
}

std::string induced_images(const Tower& t, std::size_t i) {
  std::string s;
  const GroupHom& b = t.bonding(i - 1);
  for (std::size_t g = 0; g < b.images().size(); ++g) {
    if (g) s += ", ";
    s += t.group(i).alphabet.name(g) + " -> " + to_string(b.image(g));
  }
  return s;
}

}  // namespace

static DeckResult deck_tower_exact(const Tower& t, std::size_t horizon) {
  DeckResult out;
  const std::size_t n = t.stages_up_to(horizon);
  std::optional<QuotientCoords> prev;
  for (std::size_t i = 0; i < n; ++i) {
    const StageGroup& g = t.group(i);
    const Subgroup& h = t.thread(i);
    if (g.backend != Backend::Abelian)
      if (auto w = normality_witness(g, h)) throw NormalityViolation(i, to_string(*w));
    DeckStage st;
    st.stage = i;
    st.order = detail::index(g, h);
    if (g.backend == Backend::Abelian) {
      QuotientCoords q = quotient_coords(h.lattice());
      st.structure = structure_of(q);
      if (prev) st.bonding = induced_matrix(*prev, q, t.bonding(i - 1));
      prev = std::move(q);
    } else {
      if (st.order) {
        st.structure = "order " + st.order->get_str();
      } else if (h.generators().empty()) {
        st.structure = "F(";
        for (std::size_t k = 0; k < g.rank(); ++k) st.structure += (k ? "," : "") + g.alphabet.name(k);
        st.structure += ")";
      } else {
        st.structure = "infinite";
      }
      if (i > 0) st.bonding = induced_images(t, i);
    }
    out.stages.push_back(std::move(st));
  }
  if (!t.has_tail()) out.certainty = Certainty::by("finite-chain");
  else if (t.backend() == Backend::Abelian) out.certainty = Certainty::by("stationary-induction");
  else if (detail::tail_facts(t, horizon).period_start) out.certainty = Certainty::by("finite-chain");
  else out.certainty = Certainty::limited(horizon);
  return out;
}

namespace {

bool thread_entry_finite(const Tower& t, std::size_t i) {
  const StageGroup& g = t.group(i);
  const Subgroup& h = t.thread(i);
  if (h.generators().empty()) return true;
  if (g.backend != Backend::Fp) return false;
  try {
    todd_coxeter(g.presentation(), {}, t.budget());
    return true;
  } catch (const BudgetExceeded&) {
    return false;
  }
}

std::optional<bool> thread_inside(const Tower& t, std::size_t i, const std::vector<Word>& stab) {
  const StageGroup& g = t.group(i);
  try {
    return detail::contains(g, Subgroup(g, stab, t.budget()), t.thread(i));
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

/// Conjunction over stages: false once a stage fails, unknown once a stage is unknown.
struct AllStages {
  bool ok = true;
  bool known = true;
  void add(std::optional<bool> v) {
    if (!v) known = false;
    else if (!*v) ok = false;
  }
  bool holds() const { return ok && known; }
};

}  // namespace

static DensityResult density_exact(const Tower& t, const BaseModel& m, std::size_t horizon) {
  DensityResult out;
  out.certainty = Certainty::limited(horizon);
  const detail::TailFacts f = detail::tail_facts(t, horizon);
  const detail::TailImage ti = detail::tail_group_image(t, horizon);
  const std::size_t t0 = t.prefix_length();
  std::size_t n = t.stages_up_to(horizon);
  if (f.period_start) n = std::max(n, t0 + *f.period_start + f.period);

  const bool finite = !t.has_tail();
  const bool phi_onto =
      t.has_tail() && detail::hom_surjective(*m.tail_map, *m.group, *t.tail()->group, t.budget());
  const bool periodic = f.period_start.has_value();
  const auto p_gens = detail::full_generators(*m.group);

  AllStages stagewise, transfer, cor2, cor3, finite_groups, normal_finite;
  for (std::size_t i = 0; i < n; ++i) {
    const StageGroup& g = t.group(i);
    std::vector<Word> phi;
    for (const auto& w : p_gens) phi.push_back(apply_hom(m.map(i), w));
    const auto stable = detail::coset_stable_image(t, i, horizon, ti);
    const auto sw = detail::covers_stable(t, i, phi, stable);
    if (sw == false && stable.certified) {
      out.kind = DensityKind::NotDense;
      out.witness_stage = i;
      out.certainty = Certainty::by("stagewise");
      return out;
    }
    stagewise.add(sw == false ? std::nullopt : sw);
    const auto gs = detail::group_stable_image(t, i, horizon, ti);
    if (gs.certified) {
      transfer.add(detail::covers_group(t, i, phi, gs.generators));
      cor2.add(thread_inside(t, i, gs.generators));
      cor3.add(detail::covers_group(t, i, gs.generators, detail::full_generators(g)));
    } else {
      transfer.add(std::nullopt);
      cor2.add(std::nullopt);
      cor3.add(std::nullopt);
    }
    finite_groups.add(thread_entry_finite(t, i));
    const bool normal = g.backend == Backend::Abelian || !normality_witness(g, t.thread(i));
    normal_finite.add(normal && detail::index(g, t.thread(i)).has_value());
  }

  // extend each stagewise conclusion to the whole tail
  const bool tail_phi = finite || phi_onto || periodic;
  const bool tail_cor2 =
      finite || periodic ||
      (t.backend() == Backend::Abelian && f.commute && thread_inside(t, t0, ti.generators) == true);
  const bool tail_cor3 = finite || periodic;
  const bool tail_finite_groups = finite || thread_entry_finite(t, t0);
  const bool tail_normal = finite || periodic || (t.backend() == Backend::Abelian && f.finite_spaces);

  const bool dense_stagewise = stagewise.holds() && tail_phi;
  const bool dense_transfer = transfer.holds() && tail_phi;
  std::optional<bool> ml;
  {
    bool surj = !t.has_tail() || f.bonding_surjective;
    const std::size_t links = t.has_tail() ? t0 : t.last_stage();
    for (std::size_t i = 0; i < links && surj; ++i)
      surj = detail::hom_surjective(t.bonding(i), t.group(i + 1), t.group(i), t.budget());
    if (surj || finite) ml = true;
    else ml = ti.ml;
  }

  if (dense_stagewise) out.criteria.push_back("stagewise");
  if (ml == true && dense_transfer) out.criteria.push_back("cor-1");
  if (cor2.holds() && tail_cor2 && dense_transfer) out.criteria.push_back("cor-2");
  if (cor3.holds() && tail_cor3 && dense_transfer) out.criteria.push_back("cor-3");
  if ((finite_groups.holds() && tail_finite_groups && dense_transfer) ||
      (normal_finite.holds() && tail_normal && dense_stagewise))
    out.criteria.push_back("cor-4");
  if (!out.criteria.empty()) {
    out.kind = DensityKind::Dense;
    out.certainty = Certainty::by(out.criteria.front());
  }
  return out;
}

DeckResult deck_tower(const Tower& t, std::size_t horizon) {
  DeckResult r = deck_tower_exact(t, horizon);
  detail::cap(t, r.certainty);
  return r;
}

DensityResult density(const Tower& t, const BaseModel& m, std::size_t horizon) {
  DensityResult r = density_exact(t, m, horizon);
  detail::cap(t, r.certainty);
  return r;
}

}  // namespace liftlim
