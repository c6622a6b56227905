#pragma once

// Backend primitives shared by the tower analyses.

#include <optional>
#include <string>
#include <vector>

#include "liftlim/tower.hpp"

namespace liftlim::detail {

bool member(const StageGroup& g, const Subgroup& h, const Word& w);
/// inner ≤ outer
bool contains(const StageGroup& g, const Subgroup& outer, const Subgroup& inner);
/// First generator of `inner` outside `outer`.
std::optional<Word> escape_witness(const StageGroup& g, const Subgroup& outer, const Subgroup& inner);
Subgroup image(const GroupHom& h, const StageGroup& dst, const Subgroup& s, const EnumerationBudget& budget);
Subgroup intersect(const StageGroup& g, const Subgroup& a, const Subgroup& b, const EnumerationBudget& budget);
Subgroup from_lattice(const StageGroup& g, const Lattice& l);
/// nullopt: infinite index
std::optional<Integer> index(const StageGroup& g, const Subgroup& h);

AbelianHom hom_matrix(const GroupHom& h);
GroupHom hom_from_matrix(const StageGroup& src, const StageGroup& dst, const IntMatrix& m);
bool hom_surjective(const GroupHom& h, const StageGroup& src, const StageGroup& dst, const EnumerationBudget& budget);
/// nullopt when undecidable for the backend
std::optional<bool> hom_injective(const GroupHom& h, const StageGroup& src, const StageGroup& dst,
                                  const EnumerationBudget& budget);
std::optional<bool> words_equal(const StageGroup& g, const Word& u, const Word& v, const EnumerationBudget& budget);
std::optional<bool> homs_equal(const StageGroup& dst, const GroupHom& a, const GroupHom& b, const EnumerationBudget& budget);

struct InjectivityAnswer {
  std::optional<bool> injective;
  std::string witness;  // element of h⁻¹(G_dst) outside G_src when not injective
};

/// Is the coset map src/G_src -> dst/G_dst induced by h injective, i.e. h⁻¹(G_dst) = G_src?
InjectivityAnswer coset_map_injective(const GroupHom& h, const StageGroup& src, const StageGroup& dst,
                                      const Subgroup& g_src, const Subgroup& g_dst, const EnumerationBudget& budget);

/// Permutation action of a stage group on the cosets of a finite-index subgroup,
/// column layout as in CosetTable.
struct FiniteAction {
  std::size_t size = 0;
  std::size_t columns = 0;
  std::vector<std::uint32_t> cells;
  std::size_t act(std::size_t c, std::size_t col) const { return cells[c * columns + col]; }
};

/// nullopt when the subgroup has infinite index or its quotient is too large to list.
std::optional<FiniteAction> coset_action_of(const StageGroup& g, const Subgroup& h);
/// The orbit of the base coset under the subgroup generated by `words`.
std::vector<bool> base_orbit(const StageGroup& g, const FiniteAction& a, const std::vector<Word>& words);
/// Number of orbits of ⟨words⟩ on the marked cosets.
std::size_t orbit_count(const StageGroup& g, const FiniteAction& a, const std::vector<Word>& words,
                        const std::vector<bool>& marked);

}  // namespace liftlim::detail
