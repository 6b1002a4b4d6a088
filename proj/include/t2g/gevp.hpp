#pragma once

// Sparse symmetric matrices (lower-triangle CSR) and the generalized
// symmetric eigenvalue solver used by both the 1-D graph FEM and the 2-D
// thin-domain FEM: shift-invert Lanczos at sigma = -1 with a sparse LDL^T
// factorization and full reorthogonalization in the M-inner product.

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "t2g/errors.hpp"

namespace t2g {

struct Triplet {
  int row, col;
  double value;
};

struct SparseSymMatrix {
  int n = 0;
  // Lower triangle (col <= row) in compressed row storage.
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<double> values;

  // Duplicate entries are summed; upper-triangle triplets are mirrored down.
  static SparseSymMatrix from_triplets(int n, const std::vector<Triplet>& triplets);

  double quadratic_form(const Eigen::VectorXd& u) const;  // u' A u
  Eigen::VectorXd multiply(const Eigen::VectorXd& u) const;
  Eigen::SparseMatrix<double> to_eigen_full() const;  // symmetric expansion
  int stored_entries() const { return static_cast<int>(values.size()); }
};

// Entrywise A + B for matrices of equal dimension (pattern union).
SparseSymMatrix sparse_sum(const SparseSymMatrix& A, const SparseSymMatrix& B);

struct EigenResult {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, M-orthonormal
  Eigen::VectorXd residuals;     // ||A v - lambda M v||_2 per pair
  int iterations = 0;
};

struct GevpOptions {
  double shift = -1.0;
  int max_iterations = 0;     // 0: automatic
  bool force_iterative = false;  // skip the small-problem dense path (tests)
};

// m smallest eigenpairs of A v = lambda M v for symmetric A and SPD M.
// Residuals are checked explicitly; failure to converge throws SolverError
// carrying the achieved residuals.
EigenResult solve_gevp(const SparseSymMatrix& A, const SparseSymMatrix& M, int m,
                       double tol = 1e-8, const GevpOptions& opts = {});

}  // namespace t2g
