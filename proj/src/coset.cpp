#include "liftlim/coset.hpp"

#include <deque>
#include <numeric>

#include "liftlim/errors.hpp"

namespace liftlim {

Presentation::Presentation(Alphabet alphabet, std::vector<Word> relators)
    : alphabet_(std::move(alphabet)), relators_(std::move(relators)) {
  for (const auto& r : relators_) {
    if (!(r.alphabet() == alphabet_)) throw AlphabetMismatch("relator over the wrong alphabet");
    if (r.is_identity()) throw Error("relators must be nonempty words");
  }
}

CosetTable::CosetTable(Presentation presentation, std::vector<Word> subgroup_generators,
                       std::vector<std::uint32_t> cells)
    : presentation_(std::move(presentation)),
      subgroup_generators_(std::move(subgroup_generators)),
      cells_(std::move(cells)) {
  const std::size_t c = columns();
  size_ = c == 0 ? 1 : cells_.size() / c;
  if (c != 0 && cells_.size() % c != 0) throw Error("coset table has a ragged row");
}

namespace {

constexpr int kUndefined = -1;
constexpr std::size_t kMaxScanLetters = 1u << 22;

std::vector<std::size_t> to_columns(const Word& w) {
  std::vector<std::size_t> cols;
  for (const auto& l : w.letters(kMaxScanLetters)) cols.push_back(2 * l.gen + (l.sign < 0 ? 1 : 0));
  return cols;
}

class Enumerator {
 public:
  Enumerator(const Presentation& p, const EnumerationBudget& budget)
      : cols_(2 * p.alphabet().size()), budget_(budget) {
    for (const auto& r : p.relators()) relators_.push_back(to_columns(r));
    new_row();
  }

  void run(const std::vector<Word>& subgens) {
    for (const auto& w : subgens) scan(0, to_columns(w), true);
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      for (const auto& r : relators_) {
        if (!live(c)) break;
        scan(c, r, true);
      }
      for (std::size_t x = 0; x < cols_ && live(c); ++x)
        if (cell(c, x) == kUndefined) define(c, x);
    }
  }

  // Live rows renumbered breadth-first from coset 0.
  std::vector<std::uint32_t> standardized() {
    std::vector<int> order(parent_.size(), -1);
    std::vector<std::size_t> queue{0};
    order[0] = 0;
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (std::size_t x = 0; x < cols_; ++x) {
        const std::size_t d = static_cast<std::size_t>(cell(queue[k], x));
        if (order[d] < 0) {
          order[d] = static_cast<int>(queue.size());
          queue.push_back(d);
        }
      }
    std::vector<std::uint32_t> out(queue.size() * cols_);
    for (std::size_t k = 0; k < queue.size(); ++k)
      for (std::size_t x = 0; x < cols_; ++x)
        out[k * cols_ + x] = static_cast<std::uint32_t>(order[static_cast<std::size_t>(cell(queue[k], x))]);
    return out;
  }

 private:
  int& cell(std::size_t c, std::size_t x) { return table_[c * cols_ + x]; }
  bool live(std::size_t c) const { return parent_[c] == c; }
  static std::size_t inv(std::size_t x) { return x ^ 1u; }

  std::size_t new_row() {
    const std::size_t n = parent_.size();
    parent_.push_back(n);
    table_.resize(table_.size() + cols_, kUndefined);
    ++live_count_;
    return n;
  }

  void set(std::size_t c, std::size_t x, std::size_t d) {
    cell(c, x) = static_cast<int>(d);
    cell(d, inv(x)) = static_cast<int>(c);
    if (++deductions_ > budget_.max_deductions) throw BudgetExceeded(live_count_);
  }

  void define(std::size_t c, std::size_t x) {
    if (live_count_ >= budget_.max_cosets) {
      lookahead();
      if (!live(c)) return;
      if (cell(c, x) != kUndefined) return;
      if (live_count_ >= budget_.max_cosets) throw BudgetExceeded(live_count_);
    }
    set(c, x, new_row());
  }

  void lookahead() {
    for (std::size_t c = 0; c < parent_.size(); ++c)
      for (const auto& r : relators_) {
        if (!live(c)) break;
        scan(c, r, false);
      }
  }

  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      const std::size_t next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }

  void merge(std::size_t a, std::size_t b, std::deque<std::size_t>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    --live_count_;
    queue.push_back(b);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::deque<std::size_t> queue;
    merge(a, b, queue);
    while (!queue.empty()) {
      const std::size_t e = queue.front();
      queue.pop_front();
      for (std::size_t x = 0; x < cols_; ++x) {
        const int fi = cell(e, x);
        if (fi == kUndefined) continue;
        const std::size_t f = static_cast<std::size_t>(fi);
        cell(f, inv(x)) = kUndefined;
        const std::size_t e1 = rep(e), f1 = rep(f);
        if (cell(e1, x) != kUndefined) {
          merge(f1, static_cast<std::size_t>(cell(e1, x)), queue);
        } else if (cell(f1, inv(x)) != kUndefined) {
          merge(e1, static_cast<std::size_t>(cell(f1, inv(x))), queue);
        } else {
          cell(e1, x) = static_cast<int>(f1);
          cell(f1, inv(x)) = static_cast<int>(e1);
        }
      }
    }
  }

  // Scan w from c; with `fill`, define new cosets to complete the scan.
  void scan(std::size_t c, const std::vector<std::size_t>& w, bool fill) {
    if (w.empty()) return;
    std::size_t f = c, b = c;
    std::size_t i = 0, j = w.size();  // unscanned letters are w[i, j)
    while (true) {
      while (i < j && cell(f, w[i]) != kUndefined) f = static_cast<std::size_t>(cell(f, w[i++]));
      if (i == j) {
        if (f != c) coincidence(f, c);
        return;
      }
      while (j > i && cell(b, inv(w[j - 1])) != kUndefined) b = static_cast<std::size_t>(cell(b, inv(w[--j])));
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        set(f, w[i], b);
        return;
      }
      if (!fill) return;
      define(f, w[i]);
      if (!live(c)) return;
      if (!live(f) || !live(b)) {  // a lookahead collapse ran; rescan from the start
        f = b = c;
        i = 0;
        j = w.size();
      }
    }
  }

  std::size_t cols_;
  EnumerationBudget budget_;
  std::vector<std::vector<std::size_t>> relators_;
  std::vector<int> table_;
  std::vector<std::size_t> parent_;
  std::size_t live_count_ = 0;
  std::size_t deductions_ = 0;
};

}  // namespace

CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup_generators,
                        const EnumerationBudget& budget) {
  for (const auto& w : subgroup_generators)
    if (!(w.alphabet() == p.alphabet())) throw AlphabetMismatch("subgroup generator over the wrong alphabet");
  if (budget.max_cosets == 0 || budget.max_deductions == 0) throw Error("enumeration budget must be positive");
  Enumerator e(p, budget);
  e.run(subgroup_generators);
  return CosetTable(p, subgroup_generators, e.standardized());
}

std::size_t coset_action(const CosetTable& t, const Word& w, std::size_t start) {
  if (!(w.alphabet() == t.alphabet())) throw AlphabetMismatch("word is not over the table's alphabet");
  std::size_t c = start;
  const Integer n = Integer(static_cast<unsigned long>(t.size()));
  for (const auto& s : w.syllables()) {
    const std::size_t col = 2 * s.gen + (s.exp < 0 ? 1 : 0);
    Integer steps = abs(s.exp);
    if (steps > n) {
      std::size_t len = 1;
      for (std::size_t d = t.act(c, col); d != c; d = t.act(d, col)) ++len;
      steps %= static_cast<unsigned long>(len);
    }
    for (unsigned long k = steps.get_ui(); k > 0; --k) c = t.act(c, col);
  }
  return c;
}

bool coset_member(const CosetTable& t, const Word& w) { return coset_action(t, w) == 0; }

std::vector<Word> coset_transversal(const CosetTable& t) {
  std::vector<std::optional<Word>> rep(t.size());
  rep[0] = Word(t.alphabet());
  std::vector<std::size_t> queue{0};
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (std::size_t x = 0; x < t.columns(); ++x) {
      const std::size_t d = t.act(queue[k], x);
      if (rep[d]) continue;
      rep[d] = multiply(*rep[queue[k]], Word::generator(t.alphabet(), x / 2, (x & 1) ? -1 : 1));
      queue.push_back(d);
    }
  std::vector<Word> out;
  for (auto& r : rep) out.push_back(std::move(*r));
  return out;
}

std::vector<std::size_t> induced_coset_map(const GroupHom& h, const CosetTable& src, const CosetTable& dst) {
  if (!(h.source() == src.alphabet()) || !(h.target() == dst.alphabet()))
    throw AlphabetMismatch("hom does not match the coset tables");
  const auto reps = coset_transversal(src);
  std::vector<std::size_t> map(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) map[i] = coset_action(dst, apply_hom(h, reps[i]));
  for (std::size_t i = 0; i < src.size(); ++i)
    for (std::size_t g = 0; g < src.alphabet().size(); ++g) {  // inverse columns follow
      const Word letter = Word::generator(src.alphabet(), g);
      const std::size_t j = src.act(i, 2 * g);
      if (coset_action(dst, apply_hom(h, letter), map[i]) != map[j])
        throw CoherenceViolation(to_string(multiply(multiply(reps[i], letter), invert(reps[j]))), "1",
                                 "a subgroup element and the identity map to different target cosets");
    }
  return map;
}

bool normality_check(const CosetTable& t) {
  for (std::size_t g = 0; g < t.alphabet().size(); ++g) {
    const Word x = Word::generator(t.alphabet(), g);
    for (const auto& s : t.subgroup_generators())
      if (!coset_member(t, multiply(multiply(x, s), invert(x)))) return false;
  }
  return true;
}

}  // namespace liftlim
