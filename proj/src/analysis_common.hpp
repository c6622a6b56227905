#pragma once

// Per-stage facts shared by the tower analyses.

#include <optional>
#include <string>
#include <vector>

#include "stage_ops.hpp"

namespace liftlim::detail {

struct TailFacts {
  bool commute = false;            // b∘s = s∘b
  bool step_injective = false;
  bool bonding_surjective = false;
  bool finite_spaces = false;      // every tail coset space is finite
  // G_{t+k} periodic: G_{t+period_start+period} = G_{t+period_start}
  std::optional<std::size_t> period_start;
  std::size_t period = 0;
};

TailFacts tail_facts(const Tower& t, std::size_t horizon);

/// Image of the group chain b^k(T) at the tail, as generators.
struct TailImage {
  std::vector<Word> generators;  // abelian: the divisible core of b; otherwise b^k(T) at repetition
  bool certified = false;
  std::optional<bool> ml;        // the chain b^k(T) reaches its intersection at a finite k
};

TailImage tail_group_image(const Tower& t, std::size_t horizon);

/// (π1(X_i)/G_i)^Stab
struct CosetStable {
  bool known = false;
  bool certified = false;
  std::optional<Lattice> lattice;        // abelian: the union of the stable cosets
  std::optional<FiniteAction> action;    // free/fp
  std::vector<bool> marks;               // free/fp: stable cosets
  std::optional<std::vector<Word>> subgroup;  // free, trivial G_i: stable cosets are the elements of this subgroup
  std::optional<Integer> count;          // nullopt: infinite or unknown
};

CosetStable coset_stable_image(const Tower& t, std::size_t i, std::size_t horizon, const TailImage& ti);

/// π1(X_i)^Stab
struct GroupStable {
  bool known = false;
  bool certified = false;
  std::vector<Word> generators;
};

GroupStable group_stable_image(const Tower& t, std::size_t i, std::size_t horizon, const TailImage& ti);

/// Injectivity of the coset map out of stage i+1.
InjectivityAnswer stage_map_injective(const Tower& t, std::size_t i);

/// Does ⟨words⟩·G_i cover the cosets of `target` (generators) / of the stable image?
std::optional<bool> covers_group(const Tower& t, std::size_t i, const std::vector<Word>& words,
                                 const std::vector<Word>& target);
std::optional<bool> covers_stable(const Tower& t, std::size_t i, const std::vector<Word>& words, const CosetStable& s);

/// Composite bonding from stage j to stage i, j >= i; tail composites are taken by repeated b.
GroupHom composite(const Tower& t, std::size_t i, std::size_t j);

std::vector<Word> full_generators(const StageGroup& g);

/// Certified verdicts about a truncated tower become HorizonLimited.
inline void cap(const Tower& t, Certainty& c) {
  if (t.truncated() && c.certified) c = Certainty::limited(t.truncated_horizon());
}

/// Tail facts, coset-map injectivity for maps 0 .. t+h-1 (all maps of a finite tower) and the classification.
struct TowerSurvey {
  TailFacts facts;
  TailImage image;
  std::vector<InjectivityAnswer> maps;
  Classification classification;
};

TowerSurvey survey(const Tower& t, std::size_t horizon);

}  // namespace liftlim::detail
