#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "cachecalc/gf.hpp"

namespace cachecalc::linalg {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InsufficientDimension : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense matrix over F_p, row-major, immutable in spirit: operations return
/// new matrices. Entries are stored reduced.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  Matrix(std::initializer_list<std::initializer_list<std::uint64_t>> init);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  gf::Fe at(std::size_t i, std::size_t j) const {
    return gf::Fe::from_raw(a_[i * cols_ + j]);
  }
  void set(std::size_t i, std::size_t j, gf::Fe v) { a_[i * cols_ + j] = v.value(); }

  std::span<const std::uint64_t> row(std::size_t i) const {
    return {a_.data() + i * cols_, cols_};
  }
  std::span<std::uint64_t> row(std::size_t i) {
    return {a_.data() + i * cols_, cols_};
  }

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  bool operator==(const Matrix& rhs) const = default;

  /// Rows of `top` followed by rows of `bottom`; column counts must agree.
  static Matrix vstack(const Matrix& top, const Matrix& bottom);

  /// Keeps rows [first, first+count).
  Matrix take_rows(std::size_t first, std::size_t count) const;

 private:
  std::size_t rows_, cols_;
  std::vector<std::uint64_t> a_;
};

/// Incremental row-space accumulator kept in reduced row echelon form.
/// insert() returns whether the rank grew; contains() tests membership.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

  bool insert(std::span<const std::uint64_t> row_values);
  void insert_all(const Matrix& m);
  bool contains(std::span<const std::uint64_t> row_values) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  /// Canonical basis matrix (rows sorted by pivot column).
  Matrix basis_matrix() const;

 private:
  std::size_t cols_;
  std::vector<std::vector<std::uint64_t>> rows_;  // mutually reduced
  std::vector<std::size_t> pivots_;               // ascending pivot columns
};

std::size_t rank(const Matrix& m);

/// Reduced row echelon form of the full matrix (zero rows kept at bottom).
Matrix rref(const Matrix& m);

/// A linear subspace of F_p^ambient, held as a canonical RREF basis so that
/// equality of spans is equality of the basis matrices.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim)
      : ambient_(ambient_dim), basis_(0, ambient_dim) {}

  static Subspace span_of_rows(const Matrix& rows);
  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }

  bool contains(std::span<const std::uint64_t> row_values) const;
  bool operator==(const Subspace& rhs) const = default;

 private:
  Subspace(std::size_t ambient_dim, Matrix canonical_basis)
      : ambient_(ambient_dim), basis_(std::move(canonical_basis)) {}

  std::size_t ambient_;
  Matrix basis_;  // RREF, no zero rows
};

/// Span of the union of two subspaces' bases.
Subspace sum_space(const Subspace& u, const Subspace& v);

/// U intersect V via the Zassenhaus stacked-block elimination.
Subspace intersect(const Subspace& u, const Subspace& v);

/// `want` rows lying in `whole`, jointly independent of `part`'s basis.
/// Available dimension is dim(whole) - dim(whole ∩ part); throws
/// InsufficientDimension if `want` exceeds it. Deterministic greedy scan
/// over `whole`'s canonical basis rows.
Matrix complement_basis(const Subspace& whole, const Subspace& part,
                        std::size_t want);

/// true iff every row of `target` lies in the row span of `generators`.
bool in_rowspan(const Matrix& target, const Matrix& generators);

}  // namespace cachecalc::linalg
