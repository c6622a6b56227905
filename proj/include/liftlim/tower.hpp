#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liftlim/coset.hpp"
#include "liftlim/lattice.hpp"
#include "liftlim/stallings.hpp"
#include "liftlim/word.hpp"

namespace liftlim {

enum class Backend { Abelian, Free, Fp };

std::string to_string(Backend b);

/// A stage group. Abelian stages are Z^n with one named basis vector per generator;
/// free stages have no relators; fp stages carry a presentation.
struct StageGroup {
  std::string name;
  Backend backend;
  Alphabet alphabet;
  std::vector<Word> relators;

  Presentation presentation() const { return Presentation(alphabet, relators); }
  std::size_t rank() const { return alphabet.size(); }
};

using GroupRef = std::shared_ptr<const StageGroup>;

GroupRef make_group(std::string name, Backend backend, std::vector<std::string> generators,
                    const std::vector<std::string>& relators = {});

/// A finitely generated subgroup with its backend representation: a lattice (abelian),
/// a folded graph (free) or a complete coset table (fp, finite index only).
class Subgroup {
 public:
  Subgroup(const StageGroup& group, std::vector<Word> generators, const EnumerationBudget& budget = {});

  Backend backend() const { return backend_; }
  const std::vector<Word>& generators() const { return generators_; }
  const Lattice& lattice() const { return *lattice_; }
  const SubgroupGraph& graph() const { return *graph_; }
  const CosetTable& table() const { return *table_; }
  bool has_table() const { return table_.has_value(); }

  /// Canonical equality of the represented subgroups.
  friend bool operator==(const Subgroup& a, const Subgroup& b);

 private:
  Backend backend_;
  std::vector<Word> generators_;
  std::optional<Lattice> lattice_;
  std::optional<SubgroupGraph> graph_;
  std::optional<CosetTable> table_;
};

Subgroup full_subgroup(const StageGroup& g, const EnumerationBudget& budget = {});
Subgroup trivial_subgroup(const StageGroup& g, const EnumerationBudget& budget = {});
std::string describe(const StageGroup& g, const Subgroup& h);

/// Stationary tail from stage `start` on: every stage is `group`, every bonding is `bonding`,
/// and the thread evolves by G_{start+k} = step^k(G_start).
struct Tail {
  GroupRef group;
  GroupHom bonding;
  GroupHom step;
};

/// The thread entries G_i of a tower.
struct Thread {
  std::vector<Subgroup> prefix;
  std::optional<Subgroup> tail_start;
  std::optional<GroupHom> tail_step;
};

/// Inverse sequence of groups with a coherent thread. Stage indices start at 0;
/// bonding(i) maps stage i+1 to stage i.
class Tower {
 public:
  Tower(std::vector<GroupRef> groups, std::vector<GroupHom> bondings, Thread thread,
        std::optional<Tail> tail = std::nullopt, EnumerationBudget budget = {});

  Backend backend() const { return backend_; }
  std::size_t prefix_length() const { return groups_.size(); }
  bool has_tail() const { return tail_.has_value(); }
  const std::optional<Tail>& tail() const { return tail_; }
  /// Index of the last stage of a finite tower.
  std::size_t last_stage() const { return groups_.size() - 1; }
  /// True when the tower was cut from an infinite one; its verdicts never certify the cut-off part.
  bool truncated() const { return truncated_; }
  void mark_truncated(std::size_t horizon) { truncated_ = true; truncated_horizon_ = horizon; }
  std::size_t truncated_horizon() const { return truncated_horizon_; }

  const StageGroup& group(std::size_t i) const;
  GroupRef group_ref(std::size_t i) const;
  const GroupHom& bonding(std::size_t i) const;
  /// G_i, computed by iterating the tail step when i is in the tail.
  const Subgroup& thread(std::size_t i) const;
  const Thread& thread_data() const { return thread_; }
  const EnumerationBudget& budget() const { return budget_; }
  /// Stages an analysis looks at: all of them for a finite tower; up to the horizon, and at least
  /// one tail stage, otherwise.
  std::size_t stages_up_to(std::size_t horizon) const;

  /// u_{ij}: stage j -> stage i, i <= j.
  GroupHom bonding_composite(std::size_t i, std::size_t j) const;

 private:
  Backend backend_;
  std::vector<GroupRef> groups_;
  std::vector<GroupHom> bondings_;
  Thread thread_;
  std::optional<Tail> tail_;
  EnumerationBudget budget_;
  bool truncated_ = false;
  std::size_t truncated_horizon_ = 0;
  struct Cache;
  std::shared_ptr<Cache> cache_;  // tail thread entries, filled on demand
};

/// φ_i: P -> stage i, one per prefix stage plus one constant map for the tail.
struct BaseModel {
  GroupRef group;
  std::vector<GroupHom> stage_maps;
  std::optional<GroupHom> tail_map;

  const GroupHom& map(std::size_t i) const;
};

/// Certified(rule) or HorizonLimited(horizon).
struct Certainty {
  bool certified = false;
  std::string rule;
  std::size_t horizon = 0;

  static Certainty by(std::string rule) { return {true, std::move(rule), 0}; }
  static Certainty limited(std::size_t horizon) { return {false, "", horizon}; }
};

std::string to_string(const Certainty& c);

struct CoherenceIssue {
  std::size_t stage;  // bonding(stage) fails: image of G_{stage+1} not inside G_stage
  std::string witness;
};

struct CoherenceResult {
  std::vector<CoherenceIssue> violations;
  /// which tail check certified the infinite part, empty for finite towers
  std::string tail_rule;
  Certainty certainty;
  bool ok() const { return violations.empty(); }
};

CoherenceResult check_coherence(const Tower& t, std::size_t horizon);
void check_base_model(const Tower& t, const BaseModel& m, std::size_t horizon);

enum class ClassKind { Covering, StrictLifting, Unknown };

struct Classification {
  ClassKind kind = ClassKind::Unknown;
  std::size_t stage = 0;  // Covering(stage)
  Certainty certainty;
  std::string witness;
};

std::string to_string(const Classification& c);

struct StageStability {
  std::size_t stage;
  std::optional<Integer> coset_count;  // nullopt: infinite
  std::optional<Integer> stable_count;
  bool stable_certified = false;
  std::optional<bool> map_injective;  // coset map from stage+1; nullopt past the last stage
};

struct StabilityResult {
  std::vector<StageStability> stages;
  bool mittag_leffler = false;
  std::optional<bool> ml_known;  // nullopt: unknown
  Certainty ml_certainty;
  bool eventually_injective = false;
  Classification classification;
};

StabilityResult stability_analysis(const Tower& t, std::size_t horizon);

enum class FiberKind { Finite, Uncountable, Unknown };

struct FiberResult {
  std::vector<std::optional<Integer>> counts;
  FiberKind limit = FiberKind::Unknown;
  Integer limit_count = 0;
  Certainty certainty;
};

FiberResult fiber_model(const Tower& t, std::size_t horizon);

struct Pi1Result {
  bool accepted = false;
  std::size_t rejected_stage = 0;
  Certainty certainty;
};

Pi1Result pi1_membership(const Tower& t, const BaseModel& m, const Word& w, std::size_t horizon);

enum class Pi0Kind { Trivial, Uncountable, CosetCount, Unknown };

struct Pi0Result {
  Pi0Kind kind = Pi0Kind::Unknown;
  Integer count = 0;
  Certainty certainty;
};

Pi0Result pi0_report(const Tower& t, const BaseModel& m, std::size_t horizon);

struct DeckStage {
  std::size_t stage;
  std::optional<Integer> order;  // nullopt: infinite
  std::string structure;         // "Z/8", "Z/2 x Z/4", "order 6", "F(a,b)"
  std::string bonding;           // induced map onto the previous stage, empty at stage 0
};

struct DeckResult {
  std::vector<DeckStage> stages;
  Certainty certainty;
};

DeckResult deck_tower(const Tower& t, std::size_t horizon);

enum class DensityKind { Dense, NotDense, Unknown };

struct DensityResult {
  DensityKind kind = DensityKind::Unknown;
  /// certified criteria: "stagewise", "cor-1" .. "cor-4"
  std::vector<std::string> criteria;
  std::size_t witness_stage = 0;
  Certainty certainty;
};

DensityResult density(const Tower& t, const BaseModel& m, std::size_t horizon);

Tower thread_meet(const Tower& a, const Tower& b, std::size_t horizon);
Tower thread_from_subgroup(const Tower& t, const BaseModel& m, const std::vector<Word>& generators);

/// f_i: src stage i -> dst stage i on the prefix, one constant map on the tail.
struct TowerMap {
  std::vector<GroupHom> stage_maps;
  std::optional<GroupHom> tail_map;
  const GroupHom& map(std::size_t i) const;
};

enum class LiftKind { Liftable, Obstructed, Unknown };

struct LiftResult {
  LiftKind kind = LiftKind::Unknown;
  std::vector<std::size_t> witnesses;    // j(i) for the stages checked
  std::optional<std::size_t> tail_offset;  // j(i) = i + offset on the tail
  std::size_t stage = 0;                 // Obstructed(stage) or first unresolved stage
  Certainty certainty;
};

LiftResult lift_exists(const Tower& src, const Tower& dst, const TowerMap& f, std::size_t horizon);

/// Cofinal index sequence: finitely many indices, optionally followed by the infinite
/// progression start, start+step, ...
struct IndexSequence {
  std::vector<std::size_t> explicit_indices;
  std::optional<std::pair<std::size_t, std::size_t>> progression;  // (start, step)
};

IndexSequence parse_indices(const std::string& text);
Tower restrict_cofinal(const Tower& t, const IndexSequence& indices);
BaseModel restrict_base(const Tower& t, const BaseModel& m, const IndexSequence& indices);

}  // namespace liftlim
