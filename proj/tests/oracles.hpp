#pragma once

// Brute-force references shared by the unit tests and the acceptance run.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "liftlim/coset.hpp"
#include "liftlim/lattice.hpp"
#include "liftlim/word.hpp"

namespace liftlim::oracle {

// Finite groups as permutation groups.

using Perm = std::vector<int>;

inline Perm compose(const Perm& p, const Perm& q) {  // first p, then q
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

inline Perm inverse(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

inline Perm evaluate(const Word& w, const std::vector<Perm>& gens) {
  Perm r(gens[0].size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<int>(i);
  for (const auto& l : w.letters()) r = compose(r, l.sign > 0 ? gens[l.gen] : inverse(gens[l.gen]));
  return r;
}

inline std::size_t closure_order(const std::vector<Perm>& gens, std::size_t degree) {
  Perm id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<int>(i);
  std::set<Perm> seen{id};
  std::vector<Perm> queue{id};
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (const auto& g : gens) {
      Perm n = compose(queue[k], g);
      if (seen.insert(n).second) queue.push_back(n);
    }
  return seen.size();
}

struct Case {
  std::string name;
  std::vector<std::string> gens;
  std::vector<std::string> relators;
  std::vector<Perm> perms;
  std::vector<std::vector<std::string>> subgroups;
};

// right-regular permutations of Q8 = {±1, ±i, ±j, ±k}; element 2*u + s is (-1)^s * unit u
inline std::vector<Perm> quaternion_perms() {
  // unit products: table[u][v] = (sign, unit)
  const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  auto mul = [&](int x, int y) {
    const int u = x / 2, v = y / 2;
    return 2 * unit[u][v] + ((x % 2) ^ (y % 2) ^ sign[u][v]);
  };
  std::vector<Perm> out;
  for (int g : {2, 4}) {  // i, j
    Perm p(8);
    for (int x = 0; x < 8; ++x) p[x] = mul(x, g);
    out.push_back(p);
  }
  return out;
}

inline std::vector<Case> corpus() {
  return {
      {"S3", {"a", "b"}, {"a^2", "b^2", "(a*b)^3"}, {{1, 0, 2}, {0, 2, 1}}, {{}, {"a"}, {"a*b"}}},
      {"Z5", {"a"}, {"a^5"}, {{1, 2, 3, 4, 0}}, {{}, {"a"}}},
      {"Q8", {"a", "b"}, {"a^4", "a^2*b^-2", "b^-1*a*b*a"}, quaternion_perms(), {{}, {"a"}, {"a^2"}, {"b"}}},
      {"D4", {"r", "s"}, {"r^4", "s^2", "(s*r)^2"}, {{1, 2, 3, 0}, {0, 3, 2, 1}}, {{}, {"s"}, {"r"}, {"r^2", "s"}}},
      {"A4", {"a", "b"}, {"a^2", "b^3", "(a*b)^3"}, {{1, 0, 3, 2}, {0, 2, 3, 1}}, {{}, {"a"}, {"b"}}},
      {"S4", {"a", "b"}, {"a^2", "b^3", "(a*b)^4"}, {{1, 0, 2, 3}, {0, 2, 3, 1}}, {{}, {"a"}, {"b"}, {"a*b"}}},
      {"V4", {"a", "b"}, {"a^2", "b^2", "a*b*a^-1*b^-1"}, {{1, 0, 3, 2}, {2, 3, 0, 1}}, {{}, {"a"}}},
      {"Z6", {"a", "b"}, {"a^2", "b^3", "a*b*a^-1*b^-1"}, {{1, 0, 2, 3, 4}, {0, 1, 3, 4, 2}}, {{}, {"b"}, {"a"}}},
  };
}

// Free-group words and subgroup elements by enumeration.

inline Word random_word(const Alphabet& alpha, std::mt19937& rng, std::size_t min_len, std::size_t max_len) {
  std::vector<Letter> ls;
  const std::size_t n = min_len + rng() % (max_len - min_len + 1);
  while (ls.size() < n) {
    const Letter l{static_cast<std::uint32_t>(rng() % alpha.size()), rng() % 2 ? 1 : -1};
    if (!ls.empty() && ls.back().gen == l.gen && ls.back().sign != l.sign) continue;
    ls.push_back(l);
  }
  return Word(alpha, ls);
}

inline std::set<std::string> products(const std::vector<Word>& gens, const Alphabet& alpha, int depth) {
  std::vector<Word> letters;
  for (const auto& g : gens) {
    letters.push_back(g);
    letters.push_back(invert(g));
  }
  std::set<std::string> seen{to_string(Word(alpha))};
  std::vector<Word> frontier{Word(alpha)};
  for (int d = 0; d < depth; ++d) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (const auto& l : letters) {
        Word x = multiply(w, l);
        if (seen.insert(to_string(x)).second) next.push_back(std::move(x));
      }
    frontier = std::move(next);
  }
  return seen;
}

inline std::set<std::string> bounded_closure(const std::vector<Word>& gens, const Alphabet& alpha, std::size_t max_len) {
  std::vector<Word> letters;
  for (const auto& g : gens) {
    letters.push_back(g);
    letters.push_back(invert(g));
  }
  std::set<std::string> seen{to_string(Word(alpha))};
  std::vector<Word> queue{Word(alpha)};
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (const auto& l : letters) {
      Word x = multiply(queue[k], l);
      if (x.length() > max_len) continue;
      if (seen.insert(to_string(x)).second) queue.push_back(std::move(x));
    }
  return seen;
}

inline std::vector<Word> all_words(const Alphabet& alpha, std::size_t max_len) {
  std::vector<Word> out{Word(alpha)};
  std::vector<Word> frontier{Word(alpha)};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (std::uint32_t g = 0; g < alpha.size(); ++g)
        for (int s : {1, -1}) {
          Word x = multiply(w, Word::generator(alpha, g, s));
          if (x.length() == len) next.push_back(x);
        }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}
// ∩_k m^k(Z^2) for a 2x2 integer matrix, read off its eigenstructure. The core is m-invariant
// with m acting bijectively on it, so it is Z^2 (|det| = 1), m(Z^2) when det = 0 and m acts
// on its image as ±1, the line of a ±1-eigenvector otherwise, or zero.
inline Lattice core_2x2(const IntMatrix& m) {
  const Integer a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const Integer det = a * d - b * c, tr = a + d;
  if (abs(det) == 1) return Lattice::full(2);
  if (det == 0) {
    // m^2 = tr * m
    if (m.is_zero() || abs(tr) != 1) return Lattice::zero(2);
    return Lattice(2, m);
  }
  for (int e : {1, -1}) {
    if (1 - e * tr + det != 0) continue;  // e is not a root of the characteristic polynomial
    Integer p = a - e, q = b;
    if (p == 0 && q == 0) {
      p = c;
      q = d - e;
    }
    const Integer g = gcd(p, q);
    return Lattice::from_vectors(2, {{Integer(q / g), Integer(-p / g)}});
  }
  return Lattice::zero(2);
}

/// Random 2x2 matrix with 1 <= |det| <= max_det or det = 0, entries in [-bound, bound].
inline IntMatrix random_small_det(std::mt19937& rng, long bound, long max_det) {
  std::uniform_int_distribution<long> entry(-bound, bound);
  while (true) {
    IntMatrix m(2, 2);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) m(r, c) = entry(rng);
    if (abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) <= max_det) return m;
  }
}

}  // namespace liftlim::oracle
