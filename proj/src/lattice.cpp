#include "liftlim/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "liftlim/errors.hpp"

namespace liftlim {

// ---------------------------------------------------------------- IntMatrix

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(std::span<const Integer> d) {
  IntMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows[0].size();
  IntMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<IntVector>& cols) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw DimensionMismatch("column length");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::column_block(std::size_t first, std::size_t count) const {
  IntMatrix b(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) b(i, j) = (*this)(i, first + j);
  return b;
}

IntMatrix IntMatrix::row_block(std::size_t first, std::size_t count) const {
  IntMatrix b(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) b(i, j) = (*this)(first + i, j);
  return b;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& other) const {
  if (other.rows_ != rows_) throw DimensionMismatch("hconcat row counts");
  IntMatrix m(rows_, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < other.cols_; ++j) m(i, cols_ + j) = other(i, j);
  }
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntVector operator*(const IntMatrix& a, std::span<const Integer> v) {
  if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector product");
  IntVector r(a.rows(), Integer(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum");
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

IntMatrix scaled(const IntMatrix& a, const Integer& s) {
  IntMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

IntMatrix matrix_power(const IntMatrix& a, std::size_t k) {
  if (a.rows() != a.cols()) throw DimensionMismatch("power of a non-square matrix");
  IntMatrix result = IntMatrix::identity(a.rows());
  IntMatrix base = a;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ", ";
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      os << m(i, j).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------- normal forms

namespace {

// floor division
Integer fdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void gcdext(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

// col_p <- s col_p + t col_q ; col_q <- u col_p + v col_q (old values)
void combine_columns(IntMatrix& m, std::size_t p, std::size_t q, const Integer& s, const Integer& t,
                     const Integer& u, const Integer& v) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer x = m(i, p), y = m(i, q);
    m(i, p) = s * x + t * y;
    m(i, q) = u * x + v * y;
  }
}

void add_column_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& k) {
  if (k == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += k * m(i, src);
}

void swap_columns(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void negate_column(IntMatrix& m, std::size_t c) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, c) = -m(i, c);
}

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void add_row_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& k) {
  if (k == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += k * m(src, j);
}

void negate_row(IntMatrix& m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

}  // namespace

IntMatrix column_hnf(const IntMatrix& input, IntMatrix* transform) {
  IntMatrix h = input;
  const std::size_t n = h.rows(), k = h.cols();
  IntMatrix v = IntMatrix::identity(k);
  std::size_t p = 0;
  std::vector<std::size_t> pivot_row;
  for (std::size_t i = 0; i < n && p < k; ++i) {
    for (std::size_t q = p + 1; q < k; ++q) {
      if (h(i, q) == 0) continue;
      const Integer a = h(i, p), b = h(i, q);
      Integer g, s, t;
      gcdext(a, b, g, s, t);
      const Integer u = -b / g, w = a / g;
      combine_columns(h, p, q, s, t, u, w);
      if (transform) combine_columns(v, p, q, s, t, u, w);
    }
    if (h(i, p) == 0) continue;
    if (h(i, p) < 0) {
      negate_column(h, p);
      if (transform) negate_column(v, p);
    }
    for (std::size_t j = 0; j < p; ++j) {
      const Integer c = fdiv(h(i, j), h(i, p));
      add_column_multiple(h, j, p, -c);
      if (transform) add_column_multiple(v, j, p, -c);
    }
    pivot_row.push_back(i);
    ++p;
  }
  if (transform) *transform = std::move(v);
  return h.column_block(0, p);
}

IntMatrix integer_kernel(const IntMatrix& m) {
  IntMatrix v;
  const IntMatrix h = column_hnf(m, &v);
  return v.column_block(h.cols(), m.cols() - h.cols());
}

namespace {

// Smith form by elementary operations with pivoting on the entry of least absolute value.
void smith_in_place(IntMatrix& a, IntMatrix* left, IntMatrix* right) {
  const std::size_t r = a.rows(), c = a.cols();
  const std::size_t steps = std::min(r, c);
  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (a(i, j) != 0 && (pi == r || abs(a(i, j)) < abs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == r) return;
      if (pi != t) {
        swap_rows(a, t, pi);
        if (left) swap_rows(*left, t, pi);
      }
      if (pj != t) {
        swap_columns(a, t, pj);
        if (right) swap_columns(*right, t, pj);
      }
      bool dirty = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (a(i, t) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        add_row_multiple(a, i, t, -q);
        if (left) add_row_multiple(*left, i, t, -q);
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (a(t, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        add_column_multiple(a, j, t, -q);
        if (right) add_column_multiple(*right, j, t, -q);
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) continue;
      std::size_t bad = r;
      for (std::size_t i = t + 1; i < r && bad == r; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == r) break;
      add_row_multiple(a, t, bad, Integer(1));
      if (left) add_row_multiple(*left, t, bad, Integer(1));
    }
    if (a(t, t) < 0) {
      negate_row(a, t);
      if (left) negate_row(*left, t);
    }
  }
}

}  // namespace

HermiteSmith hermite_smith(const IntMatrix& m) {
  HermiteSmith out;
  out.hnf = column_hnf(m);
  IntMatrix a = m;
  out.left = IntMatrix::identity(m.rows());
  out.right = IntMatrix::identity(m.cols());
  smith_in_place(a, &out.left, &out.right);
  const std::size_t steps = std::min(m.rows(), m.cols());
  for (std::size_t i = 0; i < steps; ++i) out.snf.push_back(a(i, i));
  return out;
}

IntVector smith_diagonal(const IntMatrix& m) {
  IntMatrix a = m;
  smith_in_place(a, nullptr, nullptr);
  IntVector d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) d.push_back(a(i, i));
  return d;
}

// ---------------------------------------------------------------- homs and lattices

AbelianHom::AbelianHom(std::size_t source_rank, std::size_t target_rank, IntMatrix matrix)
    : matrix_(std::move(matrix)) {
  if (matrix_.cols() != source_rank || matrix_.rows() != target_rank)
    throw DimensionMismatch("abelian hom matrix shape");
}

AbelianHom AbelianHom::scalar(std::size_t n, const Integer& s) {
  return AbelianHom(scaled(IntMatrix::identity(n), s));
}

AbelianHom compose(const AbelianHom& outer, const AbelianHom& inner) {
  if (inner.target_rank() != outer.source_rank()) throw DimensionMismatch("hom composition");
  return AbelianHom(outer.matrix() * inner.matrix());
}

Lattice::Lattice(std::size_t ambient, const IntMatrix& generators)
    : ambient_(ambient), basis_(ambient, 0) {
  if (generators.rows() != ambient) throw DimensionMismatch("lattice generators vs ambient rank");
  basis_ = column_hnf(generators);
}

Lattice Lattice::full(std::size_t n) { return Lattice(n, IntMatrix::identity(n)); }
Lattice Lattice::zero(std::size_t n) { return Lattice(n, IntMatrix(n, 0)); }

Lattice Lattice::from_vectors(std::size_t ambient, const std::vector<IntVector>& generators) {
  return Lattice(ambient, IntMatrix::from_columns(ambient, generators));
}

bool Lattice::is_full() const {
  if (rank() != ambient_) return false;
  for (std::size_t i = 0; i < ambient_; ++i)
    if (basis_(i, i) != 1) return false;
  return true;
}

std::string to_string(const Lattice& l) {
  std::string s = "<";
  for (std::size_t j = 0; j < l.rank(); ++j) {
    if (j) s += ", ";
    s += "(";
    for (std::size_t i = 0; i < l.ambient(); ++i) {
      if (i) s += ",";
      s += l.basis()(i, j).get_str();
    }
    s += ")";
  }
  return s + ">";
}

Lattice image(const AbelianHom& h, const Lattice& l) {
  if (l.ambient() != h.source_rank()) throw DimensionMismatch("image: lattice vs hom source");
  return Lattice(h.target_rank(), h.matrix() * l.basis());
}

Lattice preimage(const AbelianHom& h, const Lattice& l) {
  if (l.ambient() != h.target_rank()) throw DimensionMismatch("preimage: lattice vs hom target");
  const std::size_t m = h.source_rank();
  const IntMatrix stacked = h.matrix().hconcat(scaled(l.basis(), Integer(-1)));
  const IntMatrix k = integer_kernel(stacked);
  return Lattice(m, k.row_block(0, m));
}

Lattice intersect(const Lattice& a, const Lattice& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("intersect: ambient ranks");
  const IntMatrix stacked = a.basis().hconcat(scaled(b.basis(), Integer(-1)));
  const IntMatrix k = integer_kernel(stacked);
  return Lattice(a.ambient(), a.basis() * k.row_block(0, a.rank()));
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("sum: ambient ranks");
  return Lattice(a.ambient(), a.basis().hconcat(b.basis()));
}

bool member(std::span<const Integer> v, const Lattice& l) {
  if (v.size() != l.ambient()) throw DimensionMismatch("member: vector length");
  IntVector r(v.begin(), v.end());
  const IntMatrix& b = l.basis();
  std::size_t row = 0;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    while (b(row, j) == 0) {
      if (r[row] != 0) return false;
      ++row;
    }
    if (r[row] % b(row, j) != 0) return false;
    const Integer c = r[row] / b(row, j);
    for (std::size_t i = row; i < l.ambient(); ++i) r[i] -= c * b(i, j);
    ++row;
  }
  return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
}

bool contains(const Lattice& outer, const Lattice& inner) {
  if (outer.ambient() != inner.ambient()) throw DimensionMismatch("contains: ambient ranks");
  for (std::size_t j = 0; j < inner.rank(); ++j)
    if (!member(inner.generator(j), outer)) return false;
  return true;
}

Lattice saturate(const Lattice& l) {
  const std::size_t n = l.ambient();
  if (l.rank() == 0) return l;
  const IntMatrix orth = integer_kernel(l.basis().transpose());
  return Lattice(n, integer_kernel(orth.transpose()));
}

QuotientInfo quotient_info(const Lattice& l) {
  QuotientInfo q{false, std::nullopt, {}, l.ambient() - l.rank()};
  Integer order = 1;
  for (const auto& d : smith_diagonal(l.basis())) {
    if (d > 1) q.cyclic_factors.push_back(d);
    order *= d;
  }
  if (l.rank() == l.ambient()) {
    q.finite = true;
    q.order = order;
  }
  return q;
}

std::optional<Integer> relative_index(const Lattice& outer, const Lattice& inner) {
  if (outer.rank() != inner.rank()) return std::nullopt;
  if (inner.rank() == 0) return Integer(1);
  // express inner's basis in outer's basis: both full rank in the same space.
  const IntMatrix stacked = outer.basis().hconcat(scaled(inner.basis(), Integer(-1)));
  const IntMatrix k = integer_kernel(stacked);
  // k = [c; d] with outer*c = inner*d; the kernel has rank = inner.rank() and d is unimodular.
  const IntMatrix c = k.row_block(0, outer.rank());
  const IntMatrix d = k.row_block(outer.rank(), inner.rank());
  Integer dc = determinant(c), dd = determinant(d);
  Integer q = abs(dc) / abs(dd);
  return q;
}

// ---------------------------------------------------------------- unit part and divisible core

IntVector characteristic_polynomial(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  IntVector c(n + 1, Integer(0));
  c[n] = 1;
  IntMatrix m(n, n);
  const IntMatrix id = IntMatrix::identity(n);
  // Faddeev–LeVerrier: every division is exact.
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + scaled(id, c[n - k + 1]);
    const IntMatrix am = a * m;
    Integer tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    Integer q = -tr;
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), k);
    c[n - k] = q;
  }
  return c;
}

namespace {

using Poly = IntVector;  // low to high

Integer poly_eval(const Poly& p, const Integer& x) {
  Integer r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
  return r;
}

std::size_t degree(const Poly& p) { return p.size() - 1; }

// Exact division by a monic polynomial; nullopt when the remainder is nonzero.
std::optional<Poly> divide_monic(const Poly& num, const Poly& den) {
  if (den.size() > num.size()) return std::nullopt;
  Poly r = num;
  Poly q(num.size() - den.size() + 1, Integer(0));
  for (std::size_t i = q.size(); i-- > 0;) {
    const Integer coef = r[i + degree(den)];
    q[i] = coef;
    for (std::size_t j = 0; j < den.size(); ++j) r[i + j] -= coef * den[j];
  }
  for (std::size_t j = 0; j + 1 < den.size(); ++j)
    if (r[j] != 0) return std::nullopt;
  return q;
}

std::vector<Integer> signed_divisors(const Integer& v) {
  Integer a = abs(v);
  std::vector<Integer> d;
  for (Integer k = 1; k * k <= a; ++k) {
    if (a % k == 0) {
      d.push_back(k);
      if (k * k != a) d.push_back(a / k);
    }
  }
  std::vector<Integer> out;
  for (const auto& x : d) {
    out.push_back(x);
    out.push_back(-x);
  }
  return out;
}

// Monic polynomial of degree d with given values at d distinct integer points, if integral.
std::optional<Poly> interpolate_monic(const std::vector<Integer>& xs, const std::vector<Integer>& ys) {
  const std::size_t d = xs.size();
  // q(x) = h(x) - x^d has degree < d; Lagrange over the rationals.
  std::vector<mpq_class> coef(d, mpq_class(0));
  for (std::size_t i = 0; i < d; ++i) {
    Integer xd = 1;
    for (std::size_t k = 0; k < d; ++k) xd *= xs[i];
    const mpq_class yi(ys[i] - xd);
    std::vector<mpq_class> basis{mpq_class(1)};
    mpq_class denom(1);
    for (std::size_t j = 0; j < d; ++j) {
      if (j == i) continue;
      std::vector<mpq_class> next(basis.size() + 1, mpq_class(0));
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] += basis[k];
        next[k] -= basis[k] * mpq_class(xs[j]);
      }
      basis = std::move(next);
      denom *= mpq_class(xs[i] - xs[j]);
    }
    for (std::size_t k = 0; k < basis.size(); ++k) coef[k] += yi * basis[k] / denom;
  }
  Poly h(d + 1, Integer(0));
  for (std::size_t k = 0; k < d; ++k) {
    coef[k].canonicalize();
    if (coef[k].get_den() != 1) return std::nullopt;
    h[k] = coef[k].get_num();
  }
  h[d] = 1;
  return h;
}

constexpr std::size_t kMaxKroneckerCandidates = 4'000'000;

// Some monic divisor of p of degree d with constant term ±1 (Kronecker's method).
std::optional<Poly> unit_divisor_of_degree(const Poly& p, std::size_t d) {
  std::vector<Integer> xs{Integer(0)};
  std::vector<std::vector<Integer>> choices{{Integer(1), Integer(-1)}};
  // remaining d-1 points: small nonzero integers where p does not vanish, fewest divisors first
  std::vector<std::pair<std::size_t, Integer>> candidates;
  for (long x = 1; x <= 12; ++x)
    for (long s : {x, -x}) {
      const Integer v = poly_eval(p, Integer(s));
      if (v == 0) continue;
      candidates.emplace_back(signed_divisors(v).size(), Integer(s));
    }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && a.second < b.second); });
  if (candidates.size() + 1 < d) throw UnsupportedBackend("too many roots for unit-part search");
  std::size_t combos = 2;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    xs.push_back(candidates[i].second);
    choices.push_back(signed_divisors(poly_eval(p, candidates[i].second)));
    combos *= choices.back().size();
    if (combos > kMaxKroneckerCandidates) throw UnsupportedBackend("characteristic polynomial too large for the unit-part search");
  }
  std::vector<std::size_t> idx(d, 0);
  std::vector<Integer> ys(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) ys[i] = choices[i][idx[i]];
    if (auto h = interpolate_monic(xs, ys))
      if (divide_monic(p, *h)) return h;
    std::size_t k = 0;
    while (k < d && ++idx[k] == choices[k].size()) idx[k++] = 0;
    if (k == d) return std::nullopt;
  }
}

// Largest monic divisor of p (p(0) != 0) whose constant term is ±1.
Poly unit_factor(Poly p) {
  Poly g{Integer(1)};
  while (degree(p) > 0) {
    if (abs(p[0]) == 1) {
      Poly prod(degree(g) + degree(p) + 1, Integer(0));
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) prod[i + j] += g[i] * p[j];
      return prod;
    }
    std::optional<Poly> found;
    for (std::size_t d = 1; d < degree(p) && !found; ++d) found = unit_divisor_of_degree(p, d);
    if (!found) break;
    Poly prod(degree(g) + degree(*found) + 1, Integer(0));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < found->size(); ++j) prod[i + j] += g[i] * (*found)[j];
    g = std::move(prod);
    p = *divide_monic(p, *found);
  }
  return g;
}

IntMatrix eval_matrix_poly(const Poly& p, const IntMatrix& a) {
  const std::size_t n = a.rows();
  IntMatrix r(n, n);
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * a + scaled(IntMatrix::identity(n), *it);
  return r;
}

}  // namespace

Lattice unit_part(const AbelianHom& m) {
  const std::size_t n = m.source_rank();
  if (n != m.target_rank()) throw DimensionMismatch("unit part needs an endomorphism");
  if (n == 0) return Lattice::zero(0);
  Poly chi = characteristic_polynomial(m.matrix());
  std::size_t low = 0;
  while (low < chi.size() && chi[low] == 0) ++low;
  Poly reduced(chi.begin() + static_cast<std::ptrdiff_t>(low), chi.end());
  const Poly g = unit_factor(reduced);
  return Lattice(n, integer_kernel(eval_matrix_poly(g, m.matrix())));
}

constexpr std::size_t kMaxOrbit = 200'000;

Lattice divisible_core(const AbelianHom& m, const Lattice& l) {
  const std::size_t n = m.source_rank();
  if (n != m.target_rank()) throw DimensionMismatch("divisible core needs an endomorphism");
  if (l.ambient() != n) throw DimensionMismatch("divisible core: lattice ambient rank");
  if (n == 0) return l;

  // The first n images are intersected directly; from m^n(L) on the lattices live in the
  // eventual image where m is injective.
  Lattice head = l;
  Lattice cur = l;
  for (std::size_t k = 1; k < n; ++k) {
    cur = image(m, cur);
    head = intersect(head, cur);
  }
  cur = image(m, cur);  // m^n(L)

  const Lattice units = unit_part(m);
  const Lattice p = intersect(cur, units);
  const Lattice span = saturate(p);

  // largest m-invariant subspace of span(p)
  Lattice q = span;
  while (true) {
    Lattice next = intersect(span, saturate(image(m, q)));
    if (next == q) break;
    q = std::move(next);
  }

  // m permutes the finite-index sublattices of units ∩ q, so the orbit of p ∩ q is periodic.
  const Lattice start = intersect(p, q);
  Lattice acc = start;
  Lattice orbit = image(m, start);
  std::size_t steps = 0;
  while (!(orbit == start)) {
    acc = intersect(acc, orbit);
    orbit = image(m, orbit);
    if (++steps > kMaxOrbit) throw UnsupportedBackend("divisible core orbit too long");
  }
  return intersect(acc, head);
}

}  // namespace liftlim
