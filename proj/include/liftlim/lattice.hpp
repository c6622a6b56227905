#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liftlim/integer.hpp"

namespace liftlim {

/// Dense integer matrix, row-major, exact entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(std::span<const Integer> d);
  static IntMatrix from_rows(const std::vector<IntVector>& rows);
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector column(std::size_t c) const;
  IntVector row(std::size_t r) const;
  IntMatrix transpose() const;
  /// Columns [first, first + count).
  IntMatrix column_block(std::size_t first, std::size_t count) const;
  /// [this | other], same row count.
  IntMatrix hconcat(const IntMatrix& other) const;
  IntMatrix row_block(std::size_t first, std::size_t count) const;

  bool is_zero() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, std::span<const Integer> v);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix scaled(const IntMatrix& a, const Integer& s);
IntMatrix matrix_power(const IntMatrix& a, std::size_t k);

/// Exact determinant (Bareiss fraction-free elimination).
Integer determinant(const IntMatrix& a);

std::string to_string(const IntMatrix& m);

struct HermiteSmith {
  /// Column Hermite normal form of the input, zero columns dropped.
  IntMatrix hnf;
  /// Smith diagonal, length min(rows, cols); nonnegative, each entry divides the next.
  IntVector snf;
  /// Unimodular left and right transforms: left * input * right = diag(snf).
  IntMatrix left;
  IntMatrix right;
};

HermiteSmith hermite_smith(const IntMatrix& m);

/// Column HNF of `m` (zero columns dropped). With `transform`, also returns the unimodular
/// V with m * V = [hnf | 0].
IntMatrix column_hnf(const IntMatrix& m, IntMatrix* transform = nullptr);

/// Saturated basis (as columns) of the integer kernel {x : m x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);

/// Smith diagonal only.
IntVector smith_diagonal(const IntMatrix& m);

/// Homomorphism Z^source -> Z^target given by a target x source matrix.
class AbelianHom {
 public:
  AbelianHom(std::size_t source_rank, std::size_t target_rank, IntMatrix matrix);
  explicit AbelianHom(IntMatrix matrix) : AbelianHom(matrix.cols(), matrix.rows(), std::move(matrix)) {}

  static AbelianHom identity(std::size_t n) { return AbelianHom(IntMatrix::identity(n)); }
  static AbelianHom scalar(std::size_t n, const Integer& s);

  std::size_t source_rank() const { return matrix_.cols(); }
  std::size_t target_rank() const { return matrix_.rows(); }
  const IntMatrix& matrix() const { return matrix_; }
  IntVector operator()(std::span<const Integer> v) const { return matrix_ * v; }

  friend bool operator==(const AbelianHom&, const AbelianHom&) = default;

 private:
  IntMatrix matrix_;
};

/// (outer ∘ inner)
AbelianHom compose(const AbelianHom& outer, const AbelianHom& inner);

/// A sublattice of Z^n, stored as its canonical column HNF basis.
class Lattice {
 public:
  /// The lattice generated by the columns of `generators` (n rows).
  Lattice(std::size_t ambient, const IntMatrix& generators);
  static Lattice full(std::size_t n);
  static Lattice zero(std::size_t n);
  static Lattice from_vectors(std::size_t ambient, const std::vector<IntVector>& generators);

  std::size_t ambient() const { return ambient_; }
  std::size_t rank() const { return basis_.cols(); }
  const IntMatrix& basis() const { return basis_; }
  IntVector generator(std::size_t j) const { return basis_.column(j); }
  bool is_full() const;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  std::size_t ambient_;
  IntMatrix basis_;
};

std::string to_string(const Lattice& l);

Lattice image(const AbelianHom& h, const Lattice& l);
Lattice preimage(const AbelianHom& h, const Lattice& l);
Lattice intersect(const Lattice& a, const Lattice& b);
/// a + b
Lattice lattice_sum(const Lattice& a, const Lattice& b);
bool member(std::span<const Integer> v, const Lattice& l);
bool contains(const Lattice& outer, const Lattice& inner);
/// Z^n ∩ (rational span of l)
Lattice saturate(const Lattice& l);

struct QuotientInfo {
  bool finite;
  /// order when finite
  std::optional<Integer> order;
  /// invariant factors > 1 of the torsion part
  IntVector cyclic_factors;
  std::size_t free_rank;
};

QuotientInfo quotient_info(const Lattice& l);

/// [outer : inner] when finite; nullopt when the ranks differ. Requires inner ⊆ outer.
std::optional<Integer> relative_index(const Lattice& outer, const Lattice& inner);

/// ∩_{k>=0} m^k(L) for an endomorphism m of Z^n, computed exactly.
Lattice divisible_core(const AbelianHom& m, const Lattice& l);

/// Z^n ∩ W, W the largest m-invariant subspace on which m restricts to a lattice
/// automorphism; equal to ∩_k m^k(Z^n).
Lattice unit_part(const AbelianHom& m);

/// Characteristic polynomial det(xI - a), coefficients low to high.
IntVector characteristic_polynomial(const IntMatrix& a);

}  // namespace liftlim
