#include "analysis_common.hpp"

#include "liftlim/errors.hpp"

namespace liftlim::detail {

namespace {

constexpr std::size_t kChainCap = 1u << 14;

Lattice lattice_of(const StageGroup& g, const std::vector<Word>& words) {
  std::vector<IntVector> cols;
  for (const auto& w : words) cols.push_back(abelianize(w));
  return Lattice::from_vectors(g.rank(), cols);
}

std::vector<Word> words_of(const StageGroup& g, const Lattice& l) {
  std::vector<Word> out;
  for (std::size_t j = 0; j < l.rank(); ++j) out.push_back(word_from_vector(g.alphabet, l.generator(j)));
  return out;
}

std::vector<Word> apply_all(const GroupHom& h, const std::vector<Word>& words) {
  std::vector<Word> out;
  for (const auto& w : words) out.push_back(apply_hom(h, w));
  return out;
}

}  // namespace

std::vector<Word> full_generators(const StageGroup& g) {
  std::vector<Word> out;
  for (std::size_t i = 0; i < g.rank(); ++i) out.push_back(Word::generator(g.alphabet, i));
  return out;
}

GroupHom composite(const Tower& t, std::size_t i, std::size_t j) { return t.bonding_composite(i, j); }

TailFacts tail_facts(const Tower& t, std::size_t horizon) {
  TailFacts f;
  if (!t.has_tail()) return f;
  const Tail& tail = *t.tail();
  const StageGroup& g = *tail.group;
  const GroupHom& s = tail.step;
  const auto& budget = t.budget();
  const auto commute = homs_equal(g, compose(tail.bonding, s), compose(s, tail.bonding), budget);
  f.commute = commute.value_or(false);
  f.step_injective = hom_injective(s, g, g, budget).value_or(false);
  f.bonding_surjective = hom_surjective(tail.bonding, g, g, budget);
  const std::size_t t0 = t.prefix_length();
  try {
    f.finite_spaces = f.step_injective && index(g, t.thread(t0)).has_value() &&
                      index(g, image(s, g, full_subgroup(g, budget), budget)).has_value();
  } catch (const BudgetExceeded&) {
    f.finite_spaces = false;
  }
  for (std::size_t k1 = 1; k1 <= horizon && !f.period_start; ++k1)
    for (std::size_t k0 = 0; k0 < k1; ++k0)
      if (t.thread(t0 + k0) == t.thread(t0 + k1)) {
        f.period_start = k0;
        f.period = k1 - k0;
        break;
      }
  return f;
}

TailImage tail_group_image(const Tower& t, std::size_t horizon) {
  TailImage out;
  if (!t.has_tail()) return out;
  const Tail& tail = *t.tail();
  const StageGroup& g = *tail.group;
  const auto& budget = t.budget();
  if (g.backend == Backend::Abelian) {
    const AbelianHom b = hom_matrix(tail.bonding);
    out.generators = words_of(g, divisible_core(b, Lattice::full(g.rank())));
    out.certified = true;
    const Lattice ln = image(AbelianHom(matrix_power(b.matrix(), g.rank())), Lattice::full(g.rank()));
    out.ml = image(b, ln) == ln;
    return out;
  }
  if (hom_surjective(tail.bonding, g, g, budget)) {
    out.generators = full_generators(g);
    out.certified = true;
    out.ml = true;
    return out;
  }
  std::vector<Word> cur = full_generators(g);
  if (g.backend == Backend::Free) {
    Subgroup cur_sub(g, cur, budget);
    for (std::size_t k = 0; k < horizon; ++k) {
      Subgroup next = image(tail.bonding, g, cur_sub, budget);
      if (next == cur_sub) {
        out.generators = cur_sub.generators();
        out.certified = true;
        out.ml = true;
        return out;
      }
      cur_sub = std::move(next);
    }
    out.generators = cur_sub.generators();
    return out;
  }
  for (std::size_t k = 0; k < horizon; ++k) cur = apply_all(tail.bonding, cur);
  out.generators = cur;
  return out;
}

CosetStable coset_stable_image(const Tower& t, std::size_t i, std::size_t horizon, const TailImage& ti) {
  CosetStable out;
  const StageGroup& g = t.group(i);
  const Subgroup& gi = t.thread(i);
  const auto& budget = t.budget();

  // generators of the subgroup whose cosets form the stable image, and whether that is exact
  std::vector<Word> words;
  bool exact = false;
  if (!t.has_tail()) {
    words = apply_all(composite(t, i, t.last_stage()), full_generators(t.group(t.last_stage())));
    exact = true;
  } else {
    const std::size_t r = std::max(i, t.prefix_length());
    const GroupHom u = composite(t, i, r);
    const StageGroup& tg = *t.tail()->group;
    if (g.backend == Backend::Abelian) {
      const QuotientInfo q = quotient_info(gi.lattice());
      if (q.finite) {
        // K_{k+1} = b K_k + mZ^n with mZ^n inside G_i after u; the chain repeats
        const Integer m = q.cyclic_factors.empty() ? Integer(1) : q.cyclic_factors.back();
        const AbelianHom b = hom_matrix(t.tail()->bonding);
        const Lattice mod = image(AbelianHom::scalar(tg.rank(), m), Lattice::full(tg.rank()));
        Lattice k = Lattice::full(tg.rank());
        for (std::size_t step = 0; step < kChainCap; ++step) {
          Lattice next = lattice_sum(image(b, k), mod);
          if (next == k) {
            exact = true;
            break;
          }
          k = std::move(next);
        }
        words = apply_all(u, words_of(tg, k));
      } else if (ti.ml == true || ti.ml == std::nullopt) {
        words = apply_all(u, ti.generators);
        exact = ti.ml == true;
      } else {
        const AbelianHom bh(matrix_power(hom_matrix(t.tail()->bonding).matrix(), horizon));
        words = apply_all(u, words_of(tg, image(bh, Lattice::full(tg.rank()))));
      }
    } else {
      words = apply_all(u, ti.generators);
      exact = ti.certified;
    }
  }

  out.certified = exact;
  if (g.backend == Backend::Abelian) {
    out.known = true;
    out.lattice = lattice_sum(lattice_of(g, words), gi.lattice());
    out.count = relative_index(*out.lattice, gi.lattice());
    return out;
  }
  out.action = coset_action_of(g, gi);
  if (out.action) {
    out.known = true;
    out.marks = base_orbit(g, *out.action, words);
    std::size_t n = 0;
    for (bool m : out.marks) n += m;
    out.count = Integer(static_cast<unsigned long>(n));
    return out;
  }
  if (g.backend == Backend::Free && gi.generators().empty()) {
    out.known = true;
    const Subgroup sub(g, words, budget);
    out.subgroup = sub.generators();
    if (sub.generators().empty()) out.count = Integer(1);
    return out;
  }
  out.certified = false;
  return out;
}

GroupStable group_stable_image(const Tower& t, std::size_t i, std::size_t, const TailImage& ti) {
  GroupStable out;
  if (!t.has_tail()) {
    out.generators = apply_all(composite(t, i, t.last_stage()), full_generators(t.group(t.last_stage())));
    out.known = out.certified = true;
    return out;
  }
  const std::size_t r = std::max(i, t.prefix_length());
  out.generators = apply_all(composite(t, i, r), ti.generators);
  out.known = true;
  // the image of an intersection is the intersection of the images once the chain is stationary
  out.certified = ti.certified && (i >= t.prefix_length() || ti.ml == true || t.backend() != Backend::Abelian);
  return out;
}

InjectivityAnswer stage_map_injective(const Tower& t, std::size_t i) {
  return coset_map_injective(t.bonding(i), t.group(i + 1), t.group(i), t.thread(i + 1), t.thread(i), t.budget());
}

std::optional<bool> covers_group(const Tower& t, std::size_t i, const std::vector<Word>& words,
                                 const std::vector<Word>& target) {
  const StageGroup& g = t.group(i);
  const Subgroup& gi = t.thread(i);
  if (g.backend == Backend::Abelian)
    return liftlim::contains(lattice_sum(lattice_of(g, words), gi.lattice()), lattice_of(g, target));
  if (auto a = coset_action_of(g, gi)) {
    const auto have = base_orbit(g, *a, words);
    const auto need = base_orbit(g, *a, target);
    for (std::size_t c = 0; c < have.size(); ++c)
      if (need[c] && !have[c]) return false;
    return true;
  }
  if (g.backend == Backend::Free) {
    const Subgroup w(g, words, t.budget());
    const Subgroup tg(g, target, t.budget());
    if (contains(g, w, tg)) return true;
    if (gi.generators().empty()) return false;
  }
  return std::nullopt;
}

std::optional<bool> covers_stable(const Tower& t, std::size_t i, const std::vector<Word>& words, const CosetStable& s) {
  if (!s.known) return std::nullopt;
  const StageGroup& g = t.group(i);
  if (s.lattice) return liftlim::contains(lattice_sum(lattice_of(g, words), t.thread(i).lattice()), *s.lattice);
  if (s.action) {
    const auto have = base_orbit(g, *s.action, words);
    for (std::size_t c = 0; c < have.size(); ++c)
      if (s.marks[c] && !have[c]) return false;
    return true;
  }
  if (s.subgroup) return contains(g, Subgroup(g, words, t.budget()), Subgroup(g, *s.subgroup, t.budget()));
  return std::nullopt;
}

}  // namespace liftlim::detail
