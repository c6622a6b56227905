#include "liftlim/tower.hpp"

#include <deque>
#include <mutex>

#include "liftlim/errors.hpp"
#include "stage_ops.hpp"

namespace liftlim {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::Abelian: return "abelian";
    case Backend::Free: return "free";
    case Backend::Fp: return "fp";
  }
  return "?";
}

GroupRef make_group(std::string name, Backend backend, std::vector<std::string> generators,
                    const std::vector<std::string>& relators) {
  auto g = std::make_shared<StageGroup>();
  g->name = std::move(name);
  g->backend = backend;
  g->alphabet = Alphabet(std::move(generators));
  for (const auto& r : relators) g->relators.push_back(parse_word(r, g->alphabet));
  if (backend != Backend::Fp && !g->relators.empty()) throw Error("only fp groups carry relators");
  return g;
}

Subgroup::Subgroup(const StageGroup& group, std::vector<Word> generators, const EnumerationBudget& budget)
    : backend_(group.backend) {
  for (const auto& w : generators) {
    if (!(w.alphabet() == group.alphabet)) throw AlphabetMismatch("subgroup generator over the wrong alphabet");
    if (!w.is_identity()) generators_.push_back(w);
  }
  switch (backend_) {
    case Backend::Abelian: {
      std::vector<IntVector> cols;
      for (const auto& w : generators_) cols.push_back(abelianize(w));
      lattice_ = Lattice::from_vectors(group.rank(), cols);
      // keep the canonical basis as generators, so equal lattices print alike
      generators_.clear();
      for (std::size_t j = 0; j < lattice_->rank(); ++j)
        generators_.push_back(word_from_vector(group.alphabet, lattice_->generator(j)));
      break;
    }
    case Backend::Free:
      graph_ = fold_graph(generators_, group.alphabet);
      break;
    case Backend::Fp:
      table_ = todd_coxeter(group.presentation(), generators_, budget);
      break;
  }
}

bool operator==(const Subgroup& a, const Subgroup& b) {
  if (a.backend_ != b.backend_) return false;
  switch (a.backend_) {
    case Backend::Abelian: return *a.lattice_ == *b.lattice_;
    case Backend::Free: return *a.graph_ == *b.graph_;
    case Backend::Fp: return *a.table_ == *b.table_;
  }
  return false;
}

Subgroup full_subgroup(const StageGroup& g, const EnumerationBudget& budget) {
  std::vector<Word> gens;
  for (std::size_t i = 0; i < g.rank(); ++i) gens.push_back(Word::generator(g.alphabet, i));
  return Subgroup(g, std::move(gens), budget);
}

Subgroup trivial_subgroup(const StageGroup& g, const EnumerationBudget& budget) { return Subgroup(g, {}, budget); }

std::string describe(const StageGroup&, const Subgroup& h) {
  if (h.generators().empty()) return "1";
  std::string s = "<";
  for (std::size_t i = 0; i < h.generators().size(); ++i) {
    if (i) s += ", ";
    s += to_string(h.generators()[i]);
  }
  return s + ">";
}

namespace {

void validate_hom(const GroupHom& h, const StageGroup& src, const StageGroup& dst, const std::string& what,
                  const EnumerationBudget& budget) {
  if (!(h.source() == src.alphabet) || !(h.target() == dst.alphabet))
    throw AlphabetMismatch(what + ": hom does not match the stage alphabets");
  const Word one(dst.alphabet);
  auto require_trivial = [&](const Word& image, const std::string& rel) {
    const auto eq = detail::words_equal(dst, image, one, budget);
    if (eq && !*eq) throw Error(what + ": relator " + rel + " does not map to the identity");
  };
  for (const auto& r : src.relators) require_trivial(apply_hom(h, r), to_string(r));
  if (src.backend == Backend::Abelian && dst.backend != Backend::Abelian)
    for (std::size_t i = 0; i < src.rank(); ++i)
      for (std::size_t j = i + 1; j < src.rank(); ++j)
        require_trivial(commutator(h.image(i), h.image(j)),
                        "[" + src.alphabet.name(i) + "," + src.alphabet.name(j) + "]");
}

}  // namespace

struct Tower::Cache {
  std::mutex lock;
  std::deque<Subgroup> entries;
};

Tower::Tower(std::vector<GroupRef> groups, std::vector<GroupHom> bondings, Thread thread, std::optional<Tail> tail,
             EnumerationBudget budget)
    : groups_(std::move(groups)),
      bondings_(std::move(bondings)),
      thread_(std::move(thread)),
      tail_(std::move(tail)),
      budget_(budget),
      cache_(std::make_shared<Cache>()) {
  if (groups_.empty() && !tail_) throw Error("a tower needs at least one stage");
  backend_ = groups_.empty() ? tail_->group->backend : groups_[0]->backend;
  for (const auto& g : groups_)
    if (g->backend != backend_) throw UnsupportedBackend("stages of one tower must share a backend");
  if (tail_ && tail_->group->backend != backend_) throw UnsupportedBackend("stages of one tower must share a backend");

  const std::size_t expected = groups_.empty() ? 0 : groups_.size() - 1 + (tail_ ? 1 : 0);
  if (bondings_.size() != expected)
    throw Error("tower needs " + std::to_string(expected) + " bondings, got " + std::to_string(bondings_.size()));
  if (thread_.prefix.size() != groups_.size()) throw Error("thread needs one subgroup per listed stage");
  if (tail_ && (!thread_.tail_start || !thread_.tail_step)) throw Error("a stationary tail needs thread0 and thread_step");
  if (!tail_ && (thread_.tail_start || thread_.tail_step)) throw Error("thread tail data without a stationary tail");

  for (std::size_t i = 0; i < bondings_.size(); ++i)
    validate_hom(bondings_[i], group(i + 1), group(i), "bonding " + std::to_string(i), budget_);
  if (tail_) {
    validate_hom(tail_->bonding, *tail_->group, *tail_->group, "tail bonding", budget_);
    validate_hom(tail_->step, *tail_->group, *tail_->group, "thread step", budget_);
    if (thread_.tail_start->backend() != backend_) throw Error("thread0 backend mismatch");
  }
}

const StageGroup& Tower::group(std::size_t i) const { return *group_ref(i); }

GroupRef Tower::group_ref(std::size_t i) const {
  if (i < groups_.size()) return groups_[i];
  if (!tail_) throw Error("stage " + std::to_string(i) + " beyond the last stage");
  return tail_->group;
}

const GroupHom& Tower::bonding(std::size_t i) const {
  if (i < bondings_.size()) return bondings_[i];
  if (!tail_) throw Error("no bonding out of stage " + std::to_string(i + 1));
  return tail_->bonding;
}

const Subgroup& Tower::thread(std::size_t i) const {
  if (i < groups_.size()) return thread_.prefix[i];
  if (!tail_) throw Error("stage " + std::to_string(i) + " beyond the last stage");
  const std::size_t k = i - groups_.size();
  std::lock_guard<std::mutex> guard(cache_->lock);
  auto& entries = cache_->entries;
  if (entries.empty()) entries.push_back(*thread_.tail_start);
  while (entries.size() <= k)
    entries.push_back(detail::image(*thread_.tail_step, *tail_->group, entries.back(), budget_));
  return entries[k];
}

std::size_t Tower::stages_up_to(std::size_t horizon) const {
  if (tail_) return std::max(horizon + 1, groups_.size() + 1);
  return groups_.size();
}

GroupHom Tower::bonding_composite(std::size_t i, std::size_t j) const {
  if (j < i) throw Error("bonding_composite needs i <= j");
  GroupHom h = GroupHom::identity(group(j).alphabet);
  for (std::size_t k = j; k > i; --k) h = compose(bonding(k - 1), h);
  return h;
}

const GroupHom& BaseModel::map(std::size_t i) const {
  if (i < stage_maps.size()) return stage_maps[i];
  if (!tail_map) throw Error("base model has no map for stage " + std::to_string(i));
  return *tail_map;
}

const GroupHom& TowerMap::map(std::size_t i) const {
  if (i < stage_maps.size()) return stage_maps[i];
  if (!tail_map) throw Error("tower map has no component at stage " + std::to_string(i));
  return *tail_map;
}

std::string to_string(const Certainty& c) {
  if (c.certified) return "Certified";
  return "HorizonLimited(" + std::to_string(c.horizon) + ")";
}

std::string to_string(const Classification& c) {
  switch (c.kind) {
    case ClassKind::Covering: return "Covering(" + std::to_string(c.stage) + ")";
    case ClassKind::StrictLifting: return "StrictLifting";
    case ClassKind::Unknown: return "Unknown";
  }
  return "?";
}

CoherenceResult check_coherence(const Tower& t, std::size_t horizon) {
  CoherenceResult out;
  auto check_pair = [&](std::size_t i) {
    const Subgroup img = detail::image(t.bonding(i), t.group(i), t.thread(i + 1), t.budget());
    if (auto w = detail::escape_witness(t.group(i), t.thread(i), img)) out.violations.push_back({i, to_string(*w)});
  };
  const std::size_t listed = t.prefix_length();
  for (std::size_t i = 0; i + 1 < listed; ++i) check_pair(i);
  if (!t.has_tail()) {
    out.certainty = Certainty::by("finite-chain");
    return out;
  }
  if (listed > 0) check_pair(listed - 1);
  const Tail& tail = *t.tail();
  const StageGroup& tg = *tail.group;
  const auto& step = *t.thread_data().tail_step;
  const auto commute = detail::homs_equal(tg, compose(tail.bonding, step), compose(step, tail.bonding), t.budget());
  if (commute && *commute) {
    check_pair(listed);  // b(s(G_t)) ⊆ G_t; the rest follows by induction
    out.tail_rule = "stationary-induction";
    out.certainty = Certainty::by("stationary-induction");
    return out;
  }
  for (std::size_t i = listed; i < std::max(horizon, listed + 1); ++i) check_pair(i);
  out.tail_rule = "horizon";
  out.certainty = Certainty::limited(horizon);
  return out;
}

void check_base_model(const Tower& t, const BaseModel& m, std::size_t) {
  const StageGroup& p = *m.group;
  if (m.stage_maps.size() != t.prefix_length()) throw Error("base model needs one map per listed stage");
  if (t.has_tail() != m.tail_map.has_value()) throw Error("base model tail map must match the tower tail");
  const std::size_t checked = t.prefix_length() + (t.has_tail() ? 1 : 0);
  for (std::size_t i = 0; i < checked; ++i)
    validate_hom(m.map(i), p, t.group(i), "base map " + std::to_string(i), t.budget());
  auto require = [&](const GroupHom& lhs, const GroupHom& rhs, std::size_t stage, const std::string& what) {
    const auto eq = detail::homs_equal(t.group(stage), lhs, rhs, t.budget());
    if (eq && !*eq) {
      for (std::size_t g = 0; g < lhs.images().size(); ++g)
        if (!(lhs.image(g) == rhs.image(g)))
          throw CoherenceViolation(to_string(lhs.image(g)), to_string(rhs.image(g)), what);
      throw CoherenceViolation("", "", what);
    }
  };
  for (std::size_t i = 0; i + 1 < checked; ++i)
    require(compose(t.bonding(i), m.map(i + 1)), m.map(i), i,
            "base model maps do not commute with bonding " + std::to_string(i));
  if (t.has_tail())
    require(compose(t.tail()->bonding, *m.tail_map), *m.tail_map, t.prefix_length(),
            "tail base map is not fixed by the tail bonding");
}

}  // namespace liftlim
