#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftlim/integer.hpp"

namespace liftlim {

/// Ordered list of distinct generator names. Copies share storage; two alphabets are
/// equal when their name lists are equal.
class Alphabet {
 public:
  Alphabet();
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_->size(); }
  bool empty() const { return names_->empty(); }
  const std::string& name(std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const { return *names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// A maximal run g^e of one generator, e != 0.
struct Syllable {
  std::uint32_t gen;
  Integer exp;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

/// One letter g^{+1} or g^{-1}.
struct Letter {
  std::uint32_t gen;
  int sign;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Freely reduced word, stored as syllables.
///
/// Invariant: adjacent syllables have different generators and every exponent is
/// nonzero. Construction always reduces, so every Word in the program is reduced.
class Word {
 public:
  explicit Word(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  Word(Alphabet alphabet, std::span<const Syllable> syllables);
  Word(Alphabet alphabet, std::span<const Letter> letters);

  static Word generator(const Alphabet& alphabet, std::size_t gen, Integer exp = 1);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Syllable>& syllables() const { return syllables_; }
  bool is_identity() const { return syllables_.empty(); }

  /// Number of letters, sum of |exponents|.
  Integer length() const;

  /// Flat letter sequence. Throws if the word is longer than `limit` letters.
  std::vector<Letter> letters(std::size_t limit = 1u << 24) const;

  friend bool operator==(const Word& a, const Word& b) {
    return a.alphabet_ == b.alphabet_ && a.syllables_ == b.syllables_;
  }

 private:
  void push(std::uint32_t gen, const Integer& exp);
  friend Word multiply(const Word&, const Word&);
  friend Word invert(const Word&);
  friend Word power(const Word&, const Integer&);

  Alphabet alphabet_;
  std::vector<Syllable> syllables_;
};

Word multiply(const Word& u, const Word& v);
Word invert(const Word& w);
/// w^n for any integer n, computed through the cyclic reduction of w so that
/// huge n stay cheap when w is conjugate to a generator power.
Word power(const Word& w, const Integer& n);
Word commutator(const Word& u, const Word& v);

/// Parses the word grammar: identifiers, `*`, `^` with a signed decimal exponent,
/// parentheses and the literal `1`. Columns in ParseError are 1-based.
Word parse_word(std::string_view text, const Alphabet& alphabet);

/// Prints in the grammar accepted by parse_word: `a^2*b^-1`, identity as `1`.
std::string to_string(const Word& w);

/// Summed exponent per generator, in alphabet order.
IntVector abelianize(const Word& w);

/// Word with the given exponent vector, generators in alphabet order.
Word word_from_vector(const Alphabet& alphabet, std::span<const Integer> v);

/// A homomorphism given by one image word per source generator.
class GroupHom {
 public:
  GroupHom(Alphabet source, Alphabet target, std::vector<Word> images);

  static GroupHom identity(const Alphabet& alphabet);

  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(std::size_t gen) const { return images_[gen]; }

  friend bool operator==(const GroupHom&, const GroupHom&) = default;

 private:
  Alphabet source_;
  Alphabet target_;
  std::vector<Word> images_;
};

Word apply_hom(const GroupHom& h, const Word& w);

/// (outer ∘ inner): first inner, then outer.
GroupHom compose(const GroupHom& outer, const GroupHom& inner);

}  // namespace liftlim
