#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "liftlim/errors.hpp"
#include "liftlim/gallery.hpp"
#include "liftlim/kernels.hpp"

using namespace liftlim;

namespace {

std::vector<Word> random_words(const Alphabet& a, std::size_t count, std::size_t max_len, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> len(0, max_len), gen(0, a.size() - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<Word> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Letter> letters;
    for (std::size_t i = len(rng); i > 0; --i) letters.push_back({static_cast<std::uint32_t>(gen(rng)), sign(rng) ? 1 : -1});
    out.emplace_back(a, letters);
  }
  return out;
}

bool same(const std::vector<Pi1Result>& a, const std::vector<Pi1Result>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].accepted != b[i].accepted || a[i].rejected_stage != b[i].rejected_stage ||
        to_string(a[i].certainty) != to_string(b[i].certainty) || a[i].certainty.rule != b[i].certainty.rule)
      return false;
  return true;
}

}  // namespace

TEST_CASE("batch pi1 matches the serial reference") {
  for (const char* name : {"p-solenoid", "hawaiian", "product-tower", "constant-cover"}) {
    const GalleryEntry e = make_gallery(name);
    const auto words = random_words(e.base.group->alphabet, 300, 12, 17);
    CAPTURE(name);
    CHECK(same(batch_pi1(e.tower, e.base, words, 12), batch_pi1_serial(e.tower, e.base, words, 12)));
  }
}

TEST_CASE("batch pi1 on dyadic powers: rejection at v2(k)+1") {
  const GalleryEntry e = make_gallery("p-solenoid");
  std::vector<Word> words;
  for (long k = 1; k <= 256; ++k) words.push_back(Word::generator(e.base.group->alphabet, 0, Integer(k)));
  const auto r = batch_pi1(e.tower, e.base, words, 20);
  for (long k = 1; k <= 256; ++k) {
    const std::size_t v = static_cast<std::size_t>(__builtin_ctzl(static_cast<unsigned long>(k)));
    CHECK_FALSE(r[k - 1].accepted);
    CHECK(r[k - 1].rejected_stage == v + 1);
  }
}

TEST_CASE("batch membership matches the serial reference") {
  const GroupRef f = make_group("F", Backend::Free, {"a", "b"});
  const Subgroup h(*f, {parse_word("a^2", f->alphabet), parse_word("b*a*b^-1", f->alphabet), parse_word("b^3", f->alphabet)});
  const auto words = random_words(f->alphabet, 1000, 10, 5);
  const auto par = batch_member(*f, h, words);
  CHECK(par == batch_member_serial(*f, h, words));
  CHECK(std::count(par.begin(), par.end(), true) > 0);

  const GroupRef z = make_group("Z2", Backend::Abelian, {"x", "y"});
  const Subgroup l(*z, {parse_word("x^2*y", z->alphabet), parse_word("y^3", z->alphabet)});
  const auto zw = random_words(z->alphabet, 1000, 10, 6);
  CHECK(batch_member(*z, l, zw) == batch_member_serial(*z, l, zw));
}

TEST_CASE("stage indices match the serial reference") {
  for (const auto& name : gallery_names()) {
    const GalleryEntry e = make_gallery(name);
    CAPTURE(name);
    CHECK(stage_indices(e.tower, 12) == stage_indices_serial(e.tower, 12));
  }
  const auto d = stage_indices(make_gallery("p-solenoid").tower, 10);
  REQUIRE(d.size() == 11);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == Integer(1) << static_cast<unsigned>(i));
}

TEST_CASE("kernel exceptions propagate") {
  const GalleryEntry e = make_gallery("p-solenoid");
  const GroupRef other = make_group("Y", Backend::Abelian, {"y"});
  std::vector<Word> words = {Word::generator(e.base.group->alphabet, 0), Word::generator(other->alphabet, 0)};
  CHECK_THROWS_AS(batch_pi1(e.tower, e.base, words, 4), AlphabetMismatch);
}
