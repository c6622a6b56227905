#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "liftlim/coset.hpp"
#include "liftlim/word.hpp"

namespace liftlim {

/// Folded core graph of a finitely generated subgroup of the free group on `alphabet`.
/// Vertex 0 is the base; vertices are numbered breadth-first from it.
class SubgroupGraph {
 public:
  static constexpr std::int32_t kNone = -1;

  SubgroupGraph(Alphabet alphabet, std::vector<std::int32_t> cells);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t vertex_count() const { return vertices_; }
  std::size_t edge_count() const;
  std::size_t columns() const { return 2 * alphabet_.size(); }
  /// Target of the edge leaving v along column 2g (g) or 2g+1 (g⁻¹), or kNone.
  std::int32_t follow(std::size_t v, std::size_t column) const { return cells_[v * columns() + column]; }
  const std::vector<std::int32_t>& cells() const { return cells_; }

  friend bool operator==(const SubgroupGraph&, const SubgroupGraph&) = default;

 private:
  Alphabet alphabet_;
  std::vector<std::int32_t> cells_;
  std::size_t vertices_;
};

SubgroupGraph fold_graph(const std::vector<Word>& generators, const Alphabet& alphabet);
bool graph_member(const SubgroupGraph& g, const Word& w);
SubgroupGraph graph_intersect(const SubgroupGraph& a, const SubgroupGraph& b);
/// Finite index, or nullopt for infinite index.
std::optional<Integer> graph_index(const SubgroupGraph& g);
/// Free basis read off a breadth-first spanning tree.
std::vector<Word> graph_generators(const SubgroupGraph& g);
std::size_t graph_rank(const SubgroupGraph& g);
/// inner ≤ outer
bool graph_contains(const SubgroupGraph& outer, const SubgroupGraph& inner);

enum class KernelTarget { Free, Abelian };

/// h(w) = 1 in the free group (Free) or the free abelian group (Abelian) on h's target alphabet.
bool in_kernel(const GroupHom& h, const Word& w, KernelTarget target = KernelTarget::Free);
/// h(w) = 1 in the finite group described by a table of the trivial subgroup.
bool in_kernel(const GroupHom& h, const Word& w, const CosetTable& target);
/// Presentation targets: decidable only without relators.
bool in_kernel(const GroupHom& h, const Word& w, const Presentation& target);

}  // namespace liftlim
