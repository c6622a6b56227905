#include "stage_ops.hpp"

#include <algorithm>

#include "liftlim/errors.hpp"

namespace liftlim::detail {

namespace {

constexpr unsigned long kMaxListedCosets = 1ul << 20;

IntVector vec(const Word& w) { return abelianize(w); }

}  // namespace

bool member(const StageGroup& g, const Subgroup& h, const Word& w) {
  switch (g.backend) {
    case Backend::Abelian: return liftlim::member(vec(w), h.lattice());
    case Backend::Free: return graph_member(h.graph(), w);
    case Backend::Fp: return coset_member(h.table(), w);
  }
  return false;
}

bool contains(const StageGroup& g, const Subgroup& outer, const Subgroup& inner) {
  if (g.backend == Backend::Abelian) return liftlim::contains(outer.lattice(), inner.lattice());
  return !escape_witness(g, outer, inner).has_value();
}

std::optional<Word> escape_witness(const StageGroup& g, const Subgroup& outer, const Subgroup& inner) {
  for (const auto& w : inner.generators())
    if (!member(g, outer, w)) return w;
  return std::nullopt;
}

Subgroup image(const GroupHom& h, const StageGroup& dst, const Subgroup& s, const EnumerationBudget& budget) {
  std::vector<Word> gens;
  for (const auto& w : s.generators()) gens.push_back(apply_hom(h, w));
  return Subgroup(dst, std::move(gens), budget);
}

Subgroup from_lattice(const StageGroup& g, const Lattice& l) {
  std::vector<Word> gens;
  for (std::size_t j = 0; j < l.rank(); ++j) gens.push_back(word_from_vector(g.alphabet, l.generator(j)));
  return Subgroup(g, std::move(gens));
}

Subgroup intersect(const StageGroup& g, const Subgroup& a, const Subgroup& b, const EnumerationBudget& budget) {
  switch (g.backend) {
    case Backend::Abelian: return from_lattice(g, liftlim::intersect(a.lattice(), b.lattice()));
    case Backend::Free: return Subgroup(g, graph_generators(graph_intersect(a.graph(), b.graph())), budget);
    case Backend::Fp: break;
  }
  throw UnsupportedBackend("intersection of coset-table subgroups");
}

std::optional<Integer> index(const StageGroup& g, const Subgroup& h) {
  switch (g.backend) {
    case Backend::Abelian: return quotient_info(h.lattice()).order;
    case Backend::Free: return graph_index(h.graph());
    case Backend::Fp: return Integer(static_cast<unsigned long>(h.table().size()));
  }
  return std::nullopt;
}

AbelianHom hom_matrix(const GroupHom& h) {
  std::vector<IntVector> cols;
  for (const auto& w : h.images()) cols.push_back(vec(w));
  return AbelianHom(h.source().size(), h.target().size(), IntMatrix::from_columns(h.target().size(), cols));
}

GroupHom hom_from_matrix(const StageGroup& src, const StageGroup& dst, const IntMatrix& m) {
  std::vector<Word> images;
  for (std::size_t j = 0; j < m.cols(); ++j) images.push_back(word_from_vector(dst.alphabet, m.column(j)));
  return GroupHom(src.alphabet, dst.alphabet, std::move(images));
}

bool hom_surjective(const GroupHom& h, const StageGroup& src, const StageGroup& dst, const EnumerationBudget& budget) {
  const Subgroup im = image(h, dst, full_subgroup(src, budget), budget);
  switch (dst.backend) {
    case Backend::Abelian: return im.lattice().is_full();
    case Backend::Free: return graph_index(im.graph()) == Integer(1);
    case Backend::Fp: return im.table().size() == 1;
  }
  return false;
}

std::optional<bool> hom_injective(const GroupHom& h, const StageGroup& src, const StageGroup& dst,
                                  const EnumerationBudget& budget) {
  switch (src.backend) {
    case Backend::Abelian: return integer_kernel(hom_matrix(h).matrix()).cols() == 0;
    case Backend::Free: {
      if (dst.backend != Backend::Free) return std::nullopt;
      // a free group maps onto its image; the map is injective iff the image has full rank
      return graph_rank(fold_graph(h.images(), dst.alphabet)) == src.rank();
    }
    case Backend::Fp: {
      if (dst.backend != Backend::Fp) return std::nullopt;
      try {
        const std::size_t src_order = todd_coxeter(src.presentation(), {}, budget).size();
        const std::size_t dst_order = todd_coxeter(dst.presentation(), {}, budget).size();
        const std::size_t image_index = todd_coxeter(dst.presentation(), h.images(), budget).size();
        return dst_order / image_index == src_order;
      } catch (const BudgetExceeded&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

std::optional<bool> words_equal(const StageGroup& g, const Word& u, const Word& v, const EnumerationBudget& budget) {
  switch (g.backend) {
    case Backend::Abelian: return vec(u) == vec(v);
    case Backend::Free: return u == v;
    case Backend::Fp: {
      if (u == v) return true;
      try {
        return coset_member(todd_coxeter(g.presentation(), {}, budget), multiply(u, invert(v)));
      } catch (const BudgetExceeded&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

std::optional<bool> homs_equal(const StageGroup& dst, const GroupHom& a, const GroupHom& b, const EnumerationBudget& budget) {
  bool unknown = false;
  for (std::size_t i = 0; i < a.images().size(); ++i) {
    const auto eq = words_equal(dst, a.image(i), b.image(i), budget);
    if (!eq) unknown = true;
    else if (!*eq) return false;
  }
  if (unknown) return std::nullopt;
  return true;
}

std::optional<FiniteAction> coset_action_of(const StageGroup& g, const Subgroup& h) {
  FiniteAction a;
  a.columns = 2 * g.rank();
  switch (g.backend) {
    case Backend::Fp:
      a.size = h.table().size();
      a.cells = h.table().cells();
      return a;
    case Backend::Free: {
      if (!graph_index(h.graph())) return std::nullopt;
      a.size = h.graph().vertex_count();
      for (auto c : h.graph().cells()) a.cells.push_back(static_cast<std::uint32_t>(c));
      return a;
    }
    case Backend::Abelian: {
      const auto order = quotient_info(h.lattice()).order;
      if (!order || *order > kMaxListedCosets) return std::nullopt;
      const IntMatrix& b = h.lattice().basis();  // lower triangular, positive diagonal
      const std::size_t n = g.rank();
      a.size = order->get_ui();
      auto encode = [&](IntVector v) {
        for (std::size_t i = 0; i < n; ++i) {
          Integer q;
          mpz_fdiv_q(q.get_mpz_t(), v[i].get_mpz_t(), b(i, i).get_mpz_t());
          for (std::size_t r = i; r < n; ++r) v[r] -= q * b(r, i);
        }
        std::size_t code = 0;
        for (std::size_t i = n; i-- > 0;) code = code * b(i, i).get_ui() + v[i].get_ui();
        return code;
      };
      a.cells.assign(a.size * a.columns, 0);
      for (std::size_t code = 0; code < a.size; ++code) {
        IntVector v(n);
        std::size_t rest = code;
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t d = b(i, i).get_ui();
          v[i] = static_cast<unsigned long>(rest % d);
          rest /= d;
        }
        for (std::size_t gen = 0; gen < n; ++gen)
          for (int s : {1, -1}) {
            IntVector w = v;
            w[gen] += s;
            a.cells[code * a.columns + 2 * gen + (s < 0 ? 1 : 0)] = static_cast<std::uint32_t>(encode(w));
          }
      }
      // the base coset must be code 0
      return a;
    }
  }
  return std::nullopt;
}

namespace {

std::size_t apply_word(const FiniteAction& a, const Word& w, std::size_t c) {
  for (const auto& s : w.syllables()) {
    const std::size_t col = 2 * s.gen + (s.exp < 0 ? 1 : 0);
    Integer steps = abs(s.exp);
    if (steps > static_cast<unsigned long>(a.size)) {
      std::size_t len = 1;
      for (std::size_t d = a.act(c, col); d != c; d = a.act(d, col)) ++len;
      steps %= static_cast<unsigned long>(len);
    }
    for (unsigned long k = steps.get_ui(); k > 0; --k) c = a.act(c, col);
  }
  return c;
}

}  // namespace

std::vector<bool> base_orbit(const StageGroup&, const FiniteAction& a, const std::vector<Word>& words) {
  std::vector<bool> seen(a.size, false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (const auto& w : words)
      for (const Word& x : {w, invert(w)}) {
        const std::size_t d = apply_word(a, x, queue[k]);
        if (!seen[d]) {
          seen[d] = true;
          queue.push_back(d);
        }
      }
  return seen;
}

std::size_t orbit_count(const StageGroup&, const FiniteAction& a, const std::vector<Word>& words,
                        const std::vector<bool>& marked) {
  std::vector<bool> seen(a.size, false);
  std::size_t orbits = 0;
  for (std::size_t start = 0; start < a.size; ++start) {
    if (!marked[start] || seen[start]) continue;
    ++orbits;
    std::vector<std::size_t> queue{start};
    seen[start] = true;
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (const auto& w : words) {
        const std::size_t d = apply_word(a, w, queue[k]);
        if (!seen[d]) {
          seen[d] = true;
          queue.push_back(d);
        }
      }
  }
  return orbits;
}

InjectivityAnswer coset_map_injective(const GroupHom& h, const StageGroup& src, const StageGroup& dst,
                                      const Subgroup& g_src, const Subgroup& g_dst, const EnumerationBudget& budget) {
  if (src.backend == Backend::Abelian) {
    const Lattice pre = preimage(hom_matrix(h), g_dst.lattice());
    if (pre == g_src.lattice()) return {true, ""};
    for (std::size_t j = 0; j < pre.rank(); ++j)
      if (!liftlim::member(pre.generator(j), g_src.lattice()))
        return {false, to_string(word_from_vector(src.alphabet, pre.generator(j)))};
    return {false, ""};
  }
  if (auto act = coset_action_of(dst, g_dst)) {
    // h⁻¹(G_dst) is the stabiliser of the base coset in the pulled-back action; its index is the orbit size
    std::vector<std::int64_t> id(act->size, -1);
    std::vector<std::size_t> orbit{0};
    id[0] = 0;
    std::vector<std::vector<std::int32_t>> rows;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
      std::vector<std::int32_t> row(2 * src.rank(), SubgroupGraph::kNone);
      for (std::size_t gen = 0; gen < src.rank(); ++gen)
        for (int s : {1, -1}) {
          const std::size_t d = apply_word(*act, power(h.image(gen), Integer(s)), orbit[k]);
          if (id[d] < 0) {
            id[d] = static_cast<std::int64_t>(orbit.size());
            orbit.push_back(d);
          }
          row[2 * gen + (s < 0 ? 1 : 0)] = static_cast<std::int32_t>(id[d]);
        }
      rows.push_back(std::move(row));
    }
    std::vector<std::int32_t> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    const SubgroupGraph pre(src.alphabet, std::move(flat));
    const auto src_index = index(src, g_src);
    if (src_index && *src_index == static_cast<unsigned long>(orbit.size())) return {true, ""};
    for (const auto& w : graph_generators(pre))
      if (!member(src, g_src, w)) return {false, to_string(w)};
    return {false, ""};
  }
  if (src.backend == Backend::Free && dst.backend == Backend::Free && g_src.graph().edge_count() == 0 &&
      g_dst.graph().edge_count() == 0) {
    const auto inj = hom_injective(h, src, dst, budget);
    if (!inj || *inj) return {inj, ""};
    for (std::size_t gen = 0; gen < src.rank(); ++gen)
      if (h.image(gen).is_identity()) return {false, src.alphabet.name(gen)};
    return {false, ""};
  }
  return {std::nullopt, ""};
}

}  // namespace liftlim::detail
