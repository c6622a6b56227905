#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "liftlim/coset.hpp"
#include "liftlim/errors.hpp"
#include "oracles.hpp"

using namespace liftlim;
using namespace liftlim::oracle;

namespace {

void check_table_invariants(const CosetTable& t) {
  const std::size_t n = t.size();
  for (std::size_t x = 0; x < t.columns(); ++x) {
    std::set<std::size_t> image;
    for (std::size_t c = 0; c < n; ++c) {
      REQUIRE(t.act(c, x) < n);
      image.insert(t.act(c, x));
      CHECK(t.act(t.act(c, x), x ^ 1u) == c);
    }
    CHECK(image.size() == n);
  }
  for (const auto& r : t.presentation().relators())
    for (std::size_t c = 0; c < n; ++c) CHECK(coset_action(t, r, c) == c);
  for (const auto& s : t.subgroup_generators()) CHECK(coset_action(t, s, 0) == 0);
  CHECK(coset_transversal(t).size() == n);
}

}  // namespace

TEST_CASE("index matches brute-force coset counts") {
  for (const auto& c : corpus()) {
    CAPTURE(c.name);
    const Alphabet alpha(c.gens);
    std::vector<Word> rels;
    for (const auto& r : c.relators) rels.push_back(parse_word(r, alpha));
    // the permutation model satisfies the relators
    for (const auto& r : rels) CHECK(evaluate(r, c.perms) == evaluate(Word(alpha), c.perms));
    const Presentation p(alpha, rels);
    const std::size_t order = closure_order(c.perms, c.perms[0].size());
    for (const auto& sub : c.subgroups) {
      std::vector<Word> subgens;
      std::vector<Perm> subperms;
      for (const auto& s : sub) {
        subgens.push_back(parse_word(s, alpha));
        subperms.push_back(evaluate(subgens.back(), c.perms));
      }
      const std::size_t sub_order = subperms.empty() ? 1 : closure_order(subperms, c.perms[0].size());
      const CosetTable t = todd_coxeter(p, subgens);
      CHECK(t.size() == order / sub_order);
      check_table_invariants(t);
    }
  }
}

TEST_CASE("examples") {
  const Alphabet ab({"a", "b"});
  const Presentation s3(ab, {parse_word("a^2", ab), parse_word("b^2", ab), parse_word("(a*b)^3", ab)});
  const CosetTable t = todd_coxeter(s3, {parse_word("a", ab)});
  CHECK(t.size() == 3);
  CHECK(coset_action(t, parse_word("a", ab)) == 0);
  CHECK(coset_action(t, parse_word("b", ab)) != 0);
  CHECK(coset_action(t, Word(ab)) == 0);
  CHECK_FALSE(normality_check(t));
  CHECK(normality_check(todd_coxeter(s3, {})));

  const Alphabet a({"a"});
  const Presentation z5(a, {parse_word("a^5", a)});
  CHECK(todd_coxeter(z5, {}).size() == 5);
  CHECK(normality_check(todd_coxeter(z5, {parse_word("a^2", a)})));
  CHECK(coset_action(todd_coxeter(z5, {}), parse_word("a^1000000000000000000000003", a)) ==
        coset_action(todd_coxeter(z5, {}), parse_word("a^3", a)));

  CHECK_THROWS_AS(todd_coxeter(Presentation(ab), {}, {1000, 100000}), BudgetExceeded);
  try {
    todd_coxeter(Presentation(ab), {}, {500, 100000});
  } catch (const BudgetExceeded& e) {
    CHECK(e.partial_cosets() > 0);
  }
  const Presentation z(a);
  CHECK(todd_coxeter(z, {parse_word("a^2", a)}).size() == 2);
  CHECK(todd_coxeter(Presentation(Alphabet()), {}).size() == 1);
}

TEST_CASE("induced coset maps") {
  const Alphabet a({"a"});
  const Presentation z(a);
  const auto z4 = todd_coxeter(z, {parse_word("a^4", a)});
  const auto z2 = todd_coxeter(z, {parse_word("a^2", a)});
  const auto z3 = todd_coxeter(z, {parse_word("a^3", a)});
  const GroupHom id = GroupHom::identity(a);
  const auto m = induced_coset_map(id, z4, z2);
  std::map<std::size_t, int> fiber;
  for (auto x : m) ++fiber[x];
  CHECK(fiber.size() == 2);
  CHECK(fiber[0] == 2);
  CHECK(fiber[1] == 2);
  try {
    induced_coset_map(id, z2, z3);
    FAIL("expected a coherence violation");
  } catch (const CoherenceViolation& e) {
    CHECK(e.first() == "a^2");
    CHECK(e.second() == "1");
  }
  const auto same = induced_coset_map(id, z4, z4);
  for (std::size_t i = 0; i < same.size(); ++i) CHECK(same[i] == i);
}

TEST_CASE("action properties") {
  const Alphabet ab({"a", "b"});
  const Presentation s4(ab, {parse_word("a^2", ab), parse_word("b^3", ab), parse_word("(a*b)^4", ab)});
  const auto full = todd_coxeter(s4, {});
  const auto sub = todd_coxeter(s4, {parse_word("a", ab), parse_word("b*a*b^-1", ab)});
  const GroupHom id = GroupHom::identity(ab);
  const auto m = induced_coset_map(id, full, sub);
  std::mt19937 rng(1);
  for (int t = 0; t < 300; ++t) {
    std::vector<Letter> ls;
    for (int k = static_cast<int>(rng() % 12); k > 0; --k) ls.push_back({static_cast<std::uint32_t>(rng() % 2), rng() % 2 ? 1 : -1});
    const Word u(ab, ls);
    ls.clear();
    for (int k = static_cast<int>(rng() % 12); k > 0; --k) ls.push_back({static_cast<std::uint32_t>(rng() % 2), rng() % 2 ? 1 : -1});
    const Word v(ab, ls);
    CHECK(coset_action(full, multiply(u, v)) == coset_action(full, v, coset_action(full, u)));
    CHECK(m[coset_action(full, u)] == coset_action(sub, apply_hom(id, u)));
  }
}
