#include "liftlim/word.hpp"

#include <cctype>
#include <unordered_set>

#include "liftlim/errors.hpp"

namespace liftlim {

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

constexpr std::size_t kMaxPowerSyllables = std::size_t{1} << 24;

}  // namespace

Alphabet::Alphabet() : names_(std::make_shared<const std::vector<std::string>>()) {}

Alphabet::Alphabet(std::vector<std::string> names) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!is_identifier(n)) throw Error("invalid generator name '" + n + "'");
    if (!seen.insert(n).second) throw Error("duplicate generator name '" + n + "'");
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

std::optional<std::size_t> Alphabet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_->size(); ++i)
    if ((*names_)[i] == name) return i;
  return std::nullopt;
}

Word::Word(Alphabet alphabet, std::span<const Syllable> syllables) : alphabet_(std::move(alphabet)) {
  for (const auto& s : syllables) {
    if (s.gen >= alphabet_.size()) throw Error("generator index out of range");
    push(s.gen, s.exp);
  }
}

Word::Word(Alphabet alphabet, std::span<const Letter> letters) : alphabet_(std::move(alphabet)) {
  for (const auto& l : letters) {
    if (l.gen >= alphabet_.size()) throw Error("generator index out of range");
    push(l.gen, Integer(l.sign));
  }
}

Word Word::generator(const Alphabet& alphabet, std::size_t gen, Integer exp) {
  Word w(alphabet);
  if (gen >= alphabet.size()) throw Error("generator index out of range");
  w.push(static_cast<std::uint32_t>(gen), exp);
  return w;
}

void Word::push(std::uint32_t gen, const Integer& exp) {
  if (exp == 0) return;
  if (!syllables_.empty() && syllables_.back().gen == gen) {
    syllables_.back().exp += exp;
    if (syllables_.back().exp == 0) syllables_.pop_back();
    return;
  }
  syllables_.push_back({gen, exp});
}

Integer Word::length() const {
  Integer n = 0;
  for (const auto& s : syllables_) n += abs(s.exp);
  return n;
}

std::vector<Letter> Word::letters(std::size_t limit) const {
  if (length() > limit) throw Error("word too long to expand into letters");
  std::vector<Letter> out;
  for (const auto& s : syllables_) {
    const int sign = sgn(s.exp);
    const unsigned long n = mpz_class(abs(s.exp)).get_ui();
    for (unsigned long k = 0; k < n; ++k) out.push_back({s.gen, sign});
  }
  return out;
}

Word multiply(const Word& u, const Word& v) {
  if (!(u.alphabet() == v.alphabet())) throw AlphabetMismatch();
  Word w = u;
  for (const auto& s : v.syllables_) w.push(s.gen, s.exp);
  return w;
}

Word invert(const Word& w) {
  Word r(w.alphabet());
  for (auto it = w.syllables_.rbegin(); it != w.syllables_.rend(); ++it) r.push(it->gen, -it->exp);
  return r;
}

Word power(const Word& w, const Integer& n) {
  if (n == 0 || w.is_identity()) return Word(w.alphabet());
  if (n < 0) return power(invert(w), -n);

  // w = u * core * u^-1 with core cyclically reduced.
  const auto& syl = w.syllables();
  std::size_t lo = 0, hi = syl.size();
  Word u(w.alphabet());
  Word core(w.alphabet());
  while (true) {
    if (hi - lo == 1) {
      core.push(syl[lo].gen, syl[lo].exp);
      break;
    }
    if (syl[lo].gen != syl[hi - 1].gen) {
      for (std::size_t i = lo; i < hi; ++i) core.push(syl[i].gen, syl[i].exp);
      break;
    }
    const Integer sum = syl[lo].exp + syl[hi - 1].exp;
    u.push(syl[lo].gen, syl[lo].exp);
    if (sum == 0) {
      ++lo;
      --hi;
      continue;
    }
    // core = middle * g^sum
    for (std::size_t i = lo + 1; i + 1 < hi; ++i) core.push(syl[i].gen, syl[i].exp);
    core.push(syl[lo].gen, sum);
    break;
  }

  Word body(w.alphabet());
  if (core.syllables().size() == 1) {
    body.push(core.syllables()[0].gen, core.syllables()[0].exp * n);
  } else {
    if (n * core.syllables().size() > kMaxPowerSyllables) throw Error("word power too large to expand");
    const unsigned long times = n.get_ui();
    for (unsigned long k = 0; k < times; ++k)
      for (const auto& s : core.syllables()) body.push(s.gen, s.exp);
  }
  return multiply(multiply(u, body), invert(u));
}

Word commutator(const Word& u, const Word& v) {
  return multiply(multiply(u, v), multiply(invert(u), invert(v)));
}

namespace {

class WordParser {
 public:
  WordParser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

  Word parse() {
    skip_space();
    if (pos_ == text_.size()) fail("empty word");
    Word w = expr();
    skip_space();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(0, pos_ + 1, msg); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Word expr() {
    Word w = term();
    skip_space();
    while (pos_ < text_.size() && text_[pos_] == '*') {
      ++pos_;
      w = multiply(w, term());
      skip_space();
    }
    return w;
  }

  Word term() {
    Word a = atom();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      a = power(a, exponent());
    }
    return a;
  }

  Integer exponent() {
    skip_space();
    std::string digits;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) digits += text_[pos_++];
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits += text_[pos_++];
    if (pos_ == start) fail("expected integer exponent");
    if (digits[0] == '+') digits.erase(0, 1);
    return Integer(digits);
  }

  Word atom() {
    skip_space();
    if (pos_ == text_.size()) fail("unexpected end of word");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Word w = expr();
      skip_space();
      if (pos_ == text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return w;
    }
    if (c == '1') {
      ++pos_;
      if (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
        --pos_;
        fail("malformed identity literal");
      }
      return Word(alphabet_);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      const auto idx = alphabet_.index_of(name);
      if (!idx) {
        pos_ = start;
        fail("unknown generator '" + std::string(name) + "'");
      }
      return Word::generator(alphabet_, *idx);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

}  // namespace

Word parse_word(std::string_view text, const Alphabet& alphabet) {
  return WordParser(text, alphabet).parse();
}

std::string to_string(const Word& w) {
  if (w.is_identity()) return "1";
  std::string out;
  for (const auto& s : w.syllables()) {
    if (!out.empty()) out += '*';
    out += w.alphabet().name(s.gen);
    if (s.exp != 1) out += "^" + s.exp.get_str();
  }
  return out;
}

IntVector abelianize(const Word& w) {
  IntVector v(w.alphabet().size(), Integer(0));
  for (const auto& s : w.syllables()) v[s.gen] += s.exp;
  return v;
}

Word word_from_vector(const Alphabet& alphabet, std::span<const Integer> v) {
  if (v.size() != alphabet.size()) throw DimensionMismatch("vector length vs alphabet size");
  std::vector<Syllable> syl;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) syl.push_back({static_cast<std::uint32_t>(i), v[i]});
  return Word(alphabet, syl);
}

GroupHom::GroupHom(Alphabet source, Alphabet target, std::vector<Word> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_.size()) throw DimensionMismatch("hom needs one image per source generator");
  for (const auto& w : images_)
    if (!(w.alphabet() == target_)) throw AlphabetMismatch("hom image over the wrong alphabet");
}

GroupHom GroupHom::identity(const Alphabet& alphabet) {
  std::vector<Word> images;
  for (std::size_t i = 0; i < alphabet.size(); ++i) images.push_back(Word::generator(alphabet, i));
  return GroupHom(alphabet, alphabet, std::move(images));
}

Word apply_hom(const GroupHom& h, const Word& w) {
  if (!(w.alphabet() == h.source())) throw AlphabetMismatch("word is not over the hom's source alphabet");
  Word out(h.target());
  for (const auto& s : w.syllables()) out = multiply(out, power(h.image(s.gen), s.exp));
  return out;
}

GroupHom compose(const GroupHom& outer, const GroupHom& inner) {
  if (!(inner.target() == outer.source())) throw AlphabetMismatch("cannot compose homs");
  std::vector<Word> images;
  for (const auto& w : inner.images()) images.push_back(apply_hom(outer, w));
  return GroupHom(inner.source(), outer.target(), std::move(images));
}

}  // namespace liftlim
