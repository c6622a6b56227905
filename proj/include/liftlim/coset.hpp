#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "liftlim/word.hpp"

namespace liftlim {

/// ⟨alphabet | relators⟩
class Presentation {
 public:
  explicit Presentation(Alphabet alphabet, std::vector<Word> relators = {});

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Word>& relators() const { return relators_; }

  friend bool operator==(const Presentation&, const Presentation&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Word> relators_;
};

struct EnumerationBudget {
  std::size_t max_cosets = 1u << 20;
  std::size_t max_deductions = 1u << 26;
};

/// Complete coset table for the right cosets H\G. Column 2g is the action of generator g,
/// column 2g+1 the action of its inverse. Rows are numbered in breadth-first order from
/// coset 0 (= H), scanning columns left to right, so equal subgroups give equal tables.
class CosetTable {
 public:
  CosetTable(Presentation presentation, std::vector<Word> subgroup_generators,
             std::vector<std::uint32_t> cells);

  const Presentation& presentation() const { return presentation_; }
  const Alphabet& alphabet() const { return presentation_.alphabet(); }
  const std::vector<Word>& subgroup_generators() const { return subgroup_generators_; }

  std::size_t size() const { return size_; }
  std::size_t columns() const { return 2 * alphabet().size(); }
  std::size_t act(std::size_t coset, std::size_t column) const { return cells_[coset * columns() + column]; }
  const std::vector<std::uint32_t>& cells() const { return cells_; }

  /// Same group and same coset action; generator lists may differ.
  friend bool operator==(const CosetTable& a, const CosetTable& b) {
    return a.presentation_ == b.presentation_ && a.cells_ == b.cells_;
  }

 private:
  Presentation presentation_;
  std::vector<Word> subgroup_generators_;
  std::vector<std::uint32_t> cells_;
  std::size_t size_;
};

/// HLT enumeration with lookahead. Throws BudgetExceeded when the budget runs out.
CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup_generators,
                        const EnumerationBudget& budget = {});

/// Coset reached by scanning w from `start`. Exponents are reduced modulo cycle lengths.
std::size_t coset_action(const CosetTable& t, const Word& w, std::size_t start = 0);
bool coset_member(const CosetTable& t, const Word& w);

/// Shortest-path (Schreier) representatives, one word per coset.
std::vector<Word> coset_transversal(const CosetTable& t);

/// Map on cosets induced by h, checked edge by edge; throws CoherenceViolation with a
/// witness pair when h does not carry src's subgroup into dst's.
std::vector<std::size_t> induced_coset_map(const GroupHom& h, const CosetTable& src, const CosetTable& dst);

bool normality_check(const CosetTable& t);

}  // namespace liftlim
