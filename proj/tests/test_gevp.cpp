#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "t2g/gevp.hpp"

using namespace t2g;

namespace {

SparseSymMatrix identity(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseSymMatrix::from_triplets(n, t);
}

// 1-D Dirichlet Laplacian stencil: eigenvalues 2 - 2 cos(k pi / (n+1)).
SparseSymMatrix dirichlet_tridiag(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i + 1 < n) t.push_back({i + 1, i, -1.0});
  }
  return SparseSymMatrix::from_triplets(n, t);
}

// Random SPD matrix with off-diagonal sparsity, diagonally dominant.
SparseSymMatrix random_spd(int n) {
  std::vector<Triplet> t;
  std::vector<double> diag(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) {
      const int j = t2g_test::uniform_int(0, n - 1);
      if (j == i) continue;
      const double v = t2g_test::uniform(-0.4, 0.4);
      t.push_back({std::max(i, j), std::min(i, j), v});
      diag[i] += std::abs(v);
      diag[j] += std::abs(v);
    }
  for (int i = 0; i < n; ++i) t.push_back({i, i, diag[i]});
  return SparseSymMatrix::from_triplets(n, t);
}

}  // namespace

TEST_SUITE("gevp") {

TEST_CASE("from_triplets sums duplicates and mirrors the upper triangle") {
  const std::vector<Triplet> t{{0, 0, 1.0}, {0, 0, 2.0}, {0, 1, 5.0}, {2, 1, -1.0}};
  const auto A = SparseSymMatrix::from_triplets(3, t);
  const Eigen::MatrixXd D = Eigen::MatrixXd(A.to_eigen_full());
  Eigen::MatrixXd expect(3, 3);
  expect << 3, 5, 0, 5, 0, -1, 0, -1, 0;
  CHECK((D - expect).norm() == 0.0);
  CHECK(A.stored_entries() == 3);  // (0,0), (1,0), (2,1)
}

TEST_CASE("quadratic form and multiply agree with the dense expansion") {
  const int n = 40;
  const auto A = random_spd(n);
  const Eigen::MatrixXd D = Eigen::MatrixXd(A.to_eigen_full());
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = t2g_test::uniform(-1, 1);
    CHECK(A.quadratic_form(u) == doctest::Approx(u.dot(D * u)).epsilon(1e-12));
    CHECK((A.multiply(u) - D * u).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("sparse_sum merges patterns entrywise") {
  const std::vector<Triplet> ta{{0, 0, 1.0}, {1, 0, 2.0}};
  const std::vector<Triplet> tb{{1, 1, 4.0}, {1, 0, -2.0}, {2, 0, 0.5}};
  const auto S = sparse_sum(SparseSymMatrix::from_triplets(3, ta),
                            SparseSymMatrix::from_triplets(3, tb));
  Eigen::MatrixXd expect(3, 3);
  expect << 1, 0, 0.5, 0, 4, 0, 0.5, 0, 0;
  CHECK((Eigen::MatrixXd(S.to_eigen_full()) - expect).norm() == 0.0);
  CHECK_THROWS_AS(sparse_sum(identity(2), identity(3)), NumericsError);
}

TEST_CASE("dense path reproduces the Dirichlet chain spectrum") {
  const int n = 10;
  const auto res = solve_gevp(dirichlet_tridiag(n), identity(n), 4, 1e-10);
  for (int k = 1; k <= 4; ++k) {
    const double exact = 2.0 - 2.0 * std::cos(k * M_PI / (n + 1));
    CHECK(res.eigenvalues[k - 1] == doctest::Approx(exact).epsilon(1e-12));
  }
  for (int i = 0; i < 4; ++i) CHECK(res.residuals[i] <= 1e-10);
}

TEST_CASE("iterative path agrees with the dense path on a 150-dof problem") {
  const int n = 150;
  const auto A = random_spd(n);
  const auto M = identity(n);
  const auto dense = solve_gevp(A, M, 6, 1e-10);
  GevpOptions opts;
  opts.force_iterative = true;
  const auto iter = solve_gevp(A, M, 6, 1e-10, opts);
  REQUIRE(iter.eigenvalues.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(iter.eigenvalues[i] ==
          doctest::Approx(dense.eigenvalues[i]).epsilon(1e-8));
    CHECK(iter.residuals[i] <= 1e-8);
  }
  CHECK(iter.iterations > 0);
}

TEST_CASE("eigenvectors come back M-orthonormal") {
  const int n = 60;
  const auto A = dirichlet_tridiag(n);
  // lumped mass-like SPD M
  std::vector<Triplet> tm;
  for (int i = 0; i < n; ++i) tm.push_back({i, i, 1.0 + 0.01 * i});
  const auto M = SparseSymMatrix::from_triplets(n, tm);
  const auto res = solve_gevp(A, M, 5, 1e-10);
  const Eigen::MatrixXd Md = Eigen::MatrixXd(M.to_eigen_full());
  const Eigen::MatrixXd G = res.eigenvectors.transpose() * Md * res.eigenvectors;
  CHECK((G - Eigen::MatrixXd::Identity(5, 5)).norm() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("results are bitwise deterministic across runs") {
  const int n = 220;  // above the dense cutoff -> exercises the Lanczos path
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0 + 0.001 * i});
    if (i + 1 < n) t.push_back({i + 1, i, -1.0});
  }
  const auto A = SparseSymMatrix::from_triplets(n, t);
  const auto M = identity(n);
  const auto r1 = solve_gevp(A, M, 3, 1e-9);
  const auto r2 = solve_gevp(A, M, 3, 1e-9);
  for (int i = 0; i < 3; ++i) {
    CHECK(r1.eigenvalues[i] == r2.eigenvalues[i]);  // bit-for-bit
    CHECK(r1.residuals[i] == r2.residuals[i]);
  }
  CHECK((r1.eigenvectors - r2.eigenvectors).norm() == 0.0);
}

TEST_CASE("asking for more pairs than the dimension throws") {
  CHECK_THROWS_AS(solve_gevp(identity(3), identity(3), 4), NumericsError);
}

}  // TEST_SUITE
