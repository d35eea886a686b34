#include "cachecalc/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "cachecalc/sim.hpp"
#include "doctest.h"

using namespace cachecalc;
using linalg::Matrix;
using linalg::Subspace;

namespace {

Matrix random_matrix(sim::Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rng.field_element());
  return m;
}

// Independent oracle: plain forward elimination with a shuffled row order,
// no reduced form, no shared code with EchelonBasis.
std::size_t rank_oracle(const Matrix& m, sim::Rng& rng) {
  std::vector<std::vector<std::uint64_t>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i)
    rows.emplace_back(m.row(i).begin(), m.row(i).end());
  for (std::size_t i = rows.size(); i > 1; --i)
    std::swap(rows[i - 1], rows[rng.below(i)]);
  const std::uint64_t p = gf::prime();
  std::size_t rank = 0;
  std::size_t col = 0;
  while (col < m.cols() && rank < rows.size()) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) {
      ++col;
      continue;
    }
    std::swap(rows[rank], rows[piv]);
    const std::uint64_t inv = gf::inv_raw(rows[rank][col], p);
    for (std::size_t j = col; j < m.cols(); ++j)
      rows[rank][j] = gf::mul_raw(rows[rank][j], inv, p);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      const std::uint64_t f = rows[i][col];
      if (f == 0) continue;
      for (std::size_t j = col; j < m.cols(); ++j)
        rows[i][j] = gf::sub_raw(rows[i][j], gf::mul_raw(f, rows[rank][j], p), p);
    }
    ++rank;
    ++col;
  }
  return rank;
}

Subspace random_subspace(sim::Rng& rng, std::size_t dim, std::size_t ambient) {
  for (;;) {
    const Matrix m = random_matrix(rng, dim, ambient);
    if (linalg::rank(m) == dim) return Subspace::span_of_rows(m);
  }
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("rank basics") {
    CHECK(linalg::rank(Matrix::identity(4)) == 4);
    CHECK(linalg::rank(Matrix(3, 5)) == 0);
    CHECK(linalg::rank(Matrix()) == 0);
  }

  TEST_CASE("rank of random tall matrices matches an independent elimination") {
    sim::Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      const Matrix m = random_matrix(rng, 20, 8);
      CHECK(linalg::rank(m) == 8);
      CHECK(linalg::rank(m) == rank_oracle(m, rng));
    }
    // rank-deficient inputs agree with the oracle too
    for (int t = 0; t < 20; ++t) {
      Matrix a = random_matrix(rng, 6, 10);
      Matrix stacked = Matrix::vstack(a, a);
      CHECK(linalg::rank(stacked) == rank_oracle(stacked, rng));
      CHECK(linalg::rank(stacked) == linalg::rank(a));
    }
  }

  TEST_CASE("sum_space identities") {
    sim::Rng rng(11);
    const Subspace u = random_subspace(rng, 5, 12);
    CHECK(linalg::sum_space(u, u) == u);
    CHECK(linalg::sum_space(u, Subspace(12)) == u);
    CHECK_THROWS_AS(linalg::sum_space(u, Subspace(11)), linalg::DimensionMismatch);
  }

  TEST_CASE("intersection identities") {
    sim::Rng rng(13);
    const Subspace u = random_subspace(rng, 4, 10);
    CHECK(linalg::intersect(u, Subspace::full(10)) == u);
    CHECK(linalg::intersect(u, Subspace(10)).dim() == 0);
  }

  TEST_CASE("dimension formula on random pairs") {
    sim::Rng rng(17);
    for (int t = 0; t < 60; ++t) {
      const std::size_t amb = 2 + rng.below(30);
      const Subspace u = random_subspace(rng, rng.below(amb + 1), amb);
      const Subspace v = random_subspace(rng, rng.below(amb + 1), amb);
      CHECK(u.dim() + v.dim() ==
            linalg::sum_space(u, v).dim() + linalg::intersect(u, v).dim());
    }
  }

  TEST_CASE("two random 0.6B-dimensional subspaces meet in 2*0.6B - B dimensions") {
    int hits = 0;
    for (std::uint64_t s = 0; s < 25; ++s) {
      sim::Rng rng(1000 + s);
      const Subspace u = random_subspace(rng, 36, 60);
      const Subspace v = random_subspace(rng, 36, 60);
      if (linalg::intersect(u, v).dim() == 12) ++hits;
    }
    CHECK(hits == 25);
  }

  TEST_CASE("complement_basis") {
    const Subspace whole = Subspace::full(3);
    const Subspace part = Subspace::span_of_rows(Matrix{{1, 0, 0}});
    const Matrix c = linalg::complement_basis(whole, part, 2);
    CHECK(c.rows() == 2);
    Matrix all = Matrix::vstack(part.basis(), c);
    CHECK(linalg::rank(all) == 3);

    CHECK(linalg::complement_basis(whole, part, 0).rows() == 0);
    CHECK_THROWS_AS(linalg::complement_basis(part, part, 1),
                    linalg::InsufficientDimension);
  }

  TEST_CASE("complement_basis accepts parts that stick out of the whole") {
    // availability is dim(whole) - dim(whole ∩ part)
    sim::Rng rng(23);
    const Subspace whole = random_subspace(rng, 6, 16);
    const Subspace part = random_subspace(rng, 9, 16);  // generic: disjoint
    const Matrix c = linalg::complement_basis(whole, part, 6);
    CHECK(c.rows() == 6);
    CHECK(linalg::rank(Matrix::vstack(part.basis(), c)) == 15);
    CHECK(linalg::in_rowspan(c, whole.basis()));
  }

  TEST_CASE("in_rowspan") {
    sim::Rng rng(29);
    const Matrix gens = random_matrix(rng, 5, 9);
    CHECK(linalg::in_rowspan(gens.take_rows(2, 1), gens));
    CHECK(linalg::in_rowspan(Matrix(0, 9), gens));
    const Matrix fresh = random_matrix(rng, 1, 9);
    CHECK_FALSE(linalg::in_rowspan(fresh, gens));
  }

  TEST_CASE("canonical bases make span equality a byte comparison") {
    sim::Rng rng(31);
    for (int t = 0; t < 10; ++t) {
      const Subspace u = random_subspace(rng, 5, 11);
      // re-express through a random invertible mixing of the basis
      Matrix mix;
      do {
        mix = random_matrix(rng, 5, 5);
      } while (linalg::rank(mix) != 5);
      const Subspace v = Subspace::span_of_rows(mix * u.basis());
      CHECK(u == v);
      CHECK(u.basis() == v.basis());
    }
  }

  TEST_CASE("rank concentration of i.i.d. uniform block matrices") {
    // rank(E) = min(nB, mB) for E in F^{nB x mB}, B = 20, n, m <= 3
    sim::Rng rng(101);
    const std::size_t B = 20;
    int ok = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      const std::size_t n = 1 + rng.below(3), m = 1 + rng.below(3);
      const Matrix e = random_matrix(rng, n * B, m * B);
      if (linalg::rank(e) == std::min(n, m) * B) ++ok;
    }
    CHECK(ok >= trials * 99 / 100);
  }
}
