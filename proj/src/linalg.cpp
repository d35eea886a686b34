#include "cachecalc/linalg.hpp"

#include <algorithm>

namespace cachecalc::linalg {

using gf::add_raw;
using gf::inv_raw;
using gf::mul_raw;
using gf::sub_raw;

Matrix::Matrix(std::initializer_list<std::initializer_list<std::uint64_t>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
  a_.reserve(rows_ * cols_);
  const std::uint64_t p = gf::prime();
  for (const auto& r : init) {
    if (r.size() != cols_) throw DimensionMismatch("ragged initializer rows");
    for (std::uint64_t v : r) a_.push_back(v % p);
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.a_[j * rows_ + i] = a_[i * cols_ + j];
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw DimensionMismatch("matrix product shape mismatch");
  const std::uint64_t p = gf::prime();
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint64_t f = a_[i * cols_ + k];
      if (f == 0) continue;
      const std::uint64_t* src = rhs.a_.data() + k * rhs.cols_;
      std::uint64_t* dst = out.a_.data() + i * rhs.cols_;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        dst[j] = add_raw(dst[j], mul_raw(f, src[j], p), p);
    }
  }
  return out;
}

Matrix Matrix::vstack(const Matrix& top, const Matrix& bottom) {
  if (top.empty()) return bottom;
  if (bottom.empty()) return top;
  if (top.cols_ != bottom.cols_) throw DimensionMismatch("vstack column mismatch");
  Matrix out(top.rows_ + bottom.rows_, top.cols_);
  std::copy(top.a_.begin(), top.a_.end(), out.a_.begin());
  std::copy(bottom.a_.begin(), bottom.a_.end(),
            out.a_.begin() + static_cast<std::ptrdiff_t>(top.a_.size()));
  return out;
}

Matrix Matrix::take_rows(std::size_t first, std::size_t count) const {
  Matrix out(count, cols_);
  std::copy(a_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
            a_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_),
            out.a_.begin());
  return out;
}

bool EchelonBasis::insert(std::span<const std::uint64_t> row_values) {
  if (row_values.size() != cols_)
    throw DimensionMismatch("row length does not match accumulator width");
  const std::uint64_t p = gf::prime();
  std::vector<std::uint64_t> r(row_values.begin(), row_values.end());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::uint64_t f = r[pivots_[k]];
    if (f == 0) continue;
    const auto& piv = rows_[k];
    for (std::size_t j = pivots_[k]; j < cols_; ++j)
      r[j] = sub_raw(r[j], mul_raw(f, piv[j], p), p);
  }
  std::size_t lead = cols_;
  for (std::size_t j = 0; j < cols_; ++j)
    if (r[j] != 0) {
      lead = j;
      break;
    }
  if (lead == cols_) return false;
  const std::uint64_t inv = inv_raw(r[lead], p);
  for (std::size_t j = lead; j < cols_; ++j) r[j] = mul_raw(r[j], inv, p);
  // clear this column in the existing rows to keep the reduced form
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::uint64_t f = rows_[k][lead];
    if (f == 0) continue;
    auto& row = rows_[k];
    for (std::size_t j = lead; j < cols_; ++j)
      row[j] = sub_raw(row[j], mul_raw(f, r[j], p), p);
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead);
  const auto idx = static_cast<std::size_t>(pos - pivots_.begin());
  pivots_.insert(pos, lead);
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), std::move(r));
  return true;
}

void EchelonBasis::insert_all(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) insert(m.row(i));
}

bool EchelonBasis::contains(std::span<const std::uint64_t> row_values) const {
  if (row_values.size() != cols_)
    throw DimensionMismatch("row length does not match accumulator width");
  const std::uint64_t p = gf::prime();
  std::vector<std::uint64_t> r(row_values.begin(), row_values.end());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::uint64_t f = r[pivots_[k]];
    if (f == 0) continue;
    const auto& piv = rows_[k];
    for (std::size_t j = pivots_[k]; j < cols_; ++j)
      r[j] = sub_raw(r[j], mul_raw(f, piv[j], p), p);
  }
  return std::all_of(r.begin(), r.end(), [](std::uint64_t v) { return v == 0; });
}

Matrix EchelonBasis::basis_matrix() const {
  Matrix out(rows_.size(), cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    std::copy(rows_[i].begin(), rows_[i].end(), out.row(i).begin());
  return out;
}

std::size_t rank(const Matrix& m) {
  EchelonBasis acc(m.cols());
  acc.insert_all(m);
  return acc.rank();
}

Matrix rref(const Matrix& m) {
  EchelonBasis acc(m.cols());
  acc.insert_all(m);
  Matrix out(m.rows(), m.cols());
  const Matrix top = acc.basis_matrix();
  for (std::size_t i = 0; i < top.rows(); ++i)
    std::copy(top.row(i).begin(), top.row(i).end(), out.row(i).begin());
  return out;
}

Subspace Subspace::span_of_rows(const Matrix& rows) {
  EchelonBasis acc(rows.cols());
  acc.insert_all(rows);
  return Subspace(rows.cols(), acc.basis_matrix());
}

Subspace Subspace::full(std::size_t ambient_dim) {
  return Subspace(ambient_dim, Matrix::identity(ambient_dim));
}

bool Subspace::contains(std::span<const std::uint64_t> row_values) const {
  EchelonBasis acc(ambient_);
  acc.insert_all(basis_);
  return acc.contains(row_values);
}

Subspace sum_space(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw DimensionMismatch("sum of subspaces from different ambient spaces");
  return Subspace::span_of_rows(Matrix::vstack(u.basis(), v.basis()));
}

Subspace intersect(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw DimensionMismatch("intersection of subspaces from different ambient spaces");
  const std::size_t n = u.ambient_dim();
  const std::size_t du = u.dim(), dv = v.dim();
  if (du == 0 || dv == 0) return Subspace(n);
  // Zassenhaus block [[U U];[V 0]]: after elimination, rows whose left half
  // vanished carry a basis of the intersection in their right half.
  Matrix block(du + dv, 2 * n);
  for (std::size_t i = 0; i < du; ++i) {
    auto src = u.basis().row(i);
    auto dst = block.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
    std::copy(src.begin(), src.end(), dst.begin() + static_cast<std::ptrdiff_t>(n));
  }
  for (std::size_t i = 0; i < dv; ++i) {
    auto src = v.basis().row(i);
    std::copy(src.begin(), src.end(), block.row(du + i).begin());
  }
  EchelonBasis acc(2 * n);
  acc.insert_all(block);
  const Matrix e = acc.basis_matrix();
  Matrix inter(0, n);
  for (std::size_t i = 0; i < e.rows(); ++i) {
    auto r = e.row(i);
    const bool left_zero = std::all_of(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n),
                                       [](std::uint64_t x) { return x == 0; });
    if (!left_zero) continue;
    Matrix one(1, n);
    std::copy(r.begin() + static_cast<std::ptrdiff_t>(n), r.end(), one.row(0).begin());
    inter = Matrix::vstack(inter, one);
  }
  return Subspace::span_of_rows(inter);
}

Matrix complement_basis(const Subspace& whole, const Subspace& part,
                        std::size_t want) {
  if (whole.ambient_dim() != part.ambient_dim())
    throw DimensionMismatch("complement across different ambient spaces");
  Matrix picked(0, whole.ambient_dim());
  if (want == 0) return picked;
  EchelonBasis acc(whole.ambient_dim());
  acc.insert_all(part.basis());
  for (std::size_t i = 0; i < whole.dim() && picked.rows() < want; ++i) {
    auto r = whole.basis().row(i);
    if (acc.insert(r)) {
      Matrix one(1, whole.ambient_dim());
      std::copy(r.begin(), r.end(), one.row(0).begin());
      picked = Matrix::vstack(picked, one);
    }
  }
  if (picked.rows() < want)
    throw InsufficientDimension("complement narrower than requested");
  return picked;
}

bool in_rowspan(const Matrix& target, const Matrix& generators) {
  if (target.rows() == 0) return true;
  if (target.cols() != generators.cols())
    throw DimensionMismatch("row span test column mismatch");
  EchelonBasis acc(generators.cols());
  acc.insert_all(generators);
  for (std::size_t i = 0; i < target.rows(); ++i)
    if (!acc.contains(target.row(i))) return false;
  return true;
}

}  // namespace cachecalc::linalg
