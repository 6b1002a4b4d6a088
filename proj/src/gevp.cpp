#include "t2g/gevp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/SparseCholesky>

namespace t2g {

SparseSymMatrix SparseSymMatrix::from_triplets(int n, const std::vector<Triplet>& triplets) {
  if (n <= 0) throw NumericsError("matrix dimension must be positive");
  // Bucket lower-triangle entries per row, then sort and merge duplicates.
  std::vector<std::vector<std::pair<int, double>>> rows(n);
  for (const Triplet& t : triplets) {
    int r = t.row, c = t.col;
    if (r < 0 || c < 0 || r >= n || c >= n) throw NumericsError("triplet index out of range");
    if (c > r) std::swap(r, c);
    rows[r].emplace_back(c, t.value);
  }
  SparseSymMatrix A;
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  for (int r = 0; r < n; ++r) {
    auto& row = rows[r];
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    int kept = 0;
    for (size_t i = 0; i < row.size();) {
      int c = row[i].first;
      double v = 0.0;
      while (i < row.size() && row[i].first == c) v += row[i++].second;
      row[kept++] = {c, v};
    }
    row.resize(kept);
    A.row_ptr[r + 1] = A.row_ptr[r] + kept;
  }
  A.col_idx.reserve(A.row_ptr[n]);
  A.values.reserve(A.row_ptr[n]);
  for (int r = 0; r < n; ++r)
    for (const auto& [c, v] : rows[r]) {
      A.col_idx.push_back(c);
      A.values.push_back(v);
    }
  return A;
}

double SparseSymMatrix::quadratic_form(const Eigen::VectorXd& u) const {
  if (u.size() != n) throw NumericsError("vector size does not match matrix dimension");
  double acc = 0.0;
  for (int r = 0; r < n; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const int c = col_idx[k];
      const double v = values[k];
      acc += (c == r) ? v * u[r] * u[r] : 2.0 * v * u[r] * u[c];
    }
  return acc;
}

Eigen::VectorXd SparseSymMatrix::multiply(const Eigen::VectorXd& u) const {
  if (u.size() != n) throw NumericsError("vector size does not match matrix dimension");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < n; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const int c = col_idx[k];
      const double v = values[k];
      y[r] += v * u[c];
      if (c != r) y[c] += v * u[r];
    }
  return y;
}

Eigen::SparseMatrix<double> SparseSymMatrix::to_eigen_full() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * values.size());
  for (int r = 0; r < n; ++r)
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const int c = col_idx[k];
      trips.emplace_back(r, c, values[k]);
      if (c != r) trips.emplace_back(c, r, values[k]);
    }
  Eigen::SparseMatrix<double> S(n, n);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

SparseSymMatrix sparse_sum(const SparseSymMatrix& A, const SparseSymMatrix& B) {
  if (A.n != B.n) throw NumericsError("sparse_sum: dimension mismatch");
  std::vector<Triplet> trips;
  trips.reserve(A.values.size() + B.values.size());
  for (const SparseSymMatrix* S : {&A, &B})
    for (int r = 0; r < S->n; ++r)
      for (int k = S->row_ptr[r]; k < S->row_ptr[r + 1]; ++k)
        trips.push_back({r, S->col_idx[k], S->values[k]});
  return SparseSymMatrix::from_triplets(A.n, trips);
}

namespace {

EigenResult finish(const SparseSymMatrix& A, const SparseSymMatrix& M, Eigen::VectorXd lambda,
                   Eigen::MatrixXd V, int iters) {
  EigenResult out;
  out.eigenvalues = std::move(lambda);
  out.eigenvectors = std::move(V);
  out.iterations = iters;
  const int m = static_cast<int>(out.eigenvalues.size());
  out.residuals.resize(m);
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd v = out.eigenvectors.col(i);
    out.residuals[i] = (A.multiply(v) - out.eigenvalues[i] * M.multiply(v)).norm();
  }
  return out;
}

EigenResult solve_dense(const SparseSymMatrix& A, const SparseSymMatrix& M, int m) {
  Eigen::MatrixXd Ad = Eigen::MatrixXd(A.to_eigen_full());
  Eigen::MatrixXd Md = Eigen::MatrixXd(M.to_eigen_full());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad, Md);
  if (es.info() != Eigen::Success) throw SolverError("dense generalized eigensolver failed");
  Eigen::VectorXd lambda = es.eigenvalues().head(m);
  Eigen::MatrixXd V = es.eigenvectors().leftCols(m);
  return finish(A, M, std::move(lambda), std::move(V), 0);
}

}  // namespace

EigenResult solve_gevp(const SparseSymMatrix& A, const SparseSymMatrix& M, int m, double tol,
                       const GevpOptions& opts) {
  const int n = A.n;
  if (M.n != n) throw NumericsError("A and M dimensions differ");
  if (m < 1 || m > n) throw NumericsError("requested eigenpair count out of range");

  if (n <= 200 && !opts.force_iterative) return solve_dense(A, M, m);

  // Shift-invert Lanczos on S = A - sigma M (sigma < 0 keeps S positive
  // definite for our forms, lambda >= 0), in the M-inner product:
  //   S w = M q  =>  theta = 1 / (lambda - sigma), largest theta first.
  const double sigma = opts.shift;
  Eigen::SparseMatrix<double> S = A.to_eigen_full();
  if (sigma != 0.0) S -= (sigma * M.to_eigen_full()).eval();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  if (ldlt.info() != Eigen::Success)
    throw SolverError("LDL^T factorization of the shifted operator failed");

  const int max_iter =
      opts.max_iterations > 0 ? opts.max_iterations : std::min(n, std::max(8 * m + 40, 120));

  // Fixed-seed start vector: deterministic across runs and platforms.
  std::mt19937 rng(0x74326721u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = unit(rng);

  Eigen::MatrixXd Q(n, max_iter + 1);   // M-orthonormal Lanczos vectors
  Eigen::MatrixXd MQ(n, max_iter + 1);  // M * Q columns (reorthogonalization)
  std::vector<double> alpha, beta;

  Eigen::VectorXd Mq = M.multiply(q);
  double nrm = std::sqrt(q.dot(Mq));
  if (!(nrm > 0.0)) throw SolverError("start vector has zero M-norm");
  q /= nrm;
  Mq /= nrm;
  Q.col(0) = q;
  MQ.col(0) = Mq;

  int k = 0;
  EigenResult best;
  for (; k < max_iter; ++k) {
    Eigen::VectorXd w = ldlt.solve(MQ.col(k));
    // Two passes of classical Gram-Schmidt against all stored vectors; the
    // first pass's diagonal coefficient is the Lanczos alpha.
    {
      Eigen::VectorXd coef = MQ.leftCols(k + 1).transpose() * w;
      w -= Q.leftCols(k + 1) * coef;
      alpha.push_back(coef[k]);
      coef = MQ.leftCols(k + 1).transpose() * w;
      w -= Q.leftCols(k + 1) * coef;
      alpha.back() += coef[k];
    }
    Eigen::VectorXd Mw = M.multiply(w);
    double b = std::sqrt(std::max(0.0, w.dot(Mw)));
    if (b < 1e-14) {
      // Invariant subspace reached: restart with a fresh orthogonal vector.
      for (int i = 0; i < n; ++i) w[i] = unit(rng);
      Eigen::VectorXd coef = MQ.leftCols(k + 1).transpose() * w;
      w -= Q.leftCols(k + 1) * coef;
      coef = MQ.leftCols(k + 1).transpose() * w;
      w -= Q.leftCols(k + 1) * coef;
      Mw = M.multiply(w);
      b = std::sqrt(std::max(0.0, w.dot(Mw)));
      if (b < 1e-14) break;  // space exhausted
      beta.push_back(0.0);
    } else {
      beta.push_back(b);
    }
    Q.col(k + 1) = w / b;
    MQ.col(k + 1) = Mw / b;

    const int dim = k + 1;
    if (dim < m + 2 && dim < n) continue;
    if ((k + 1) % 4 != 0 && dim + 1 < max_iter && dim < n) continue;

    // Rayleigh-Ritz on the tridiagonal matrix.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < dim) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(T);
    if (tes.info() != Eigen::Success) throw SolverError("tridiagonal eigensolver failed");
    // theta descending <-> lambda ascending; take the m largest theta.
    const int take = std::min(m, dim);
    Eigen::VectorXd lambda(take);
    Eigen::MatrixXd V(n, take);
    for (int i = 0; i < take; ++i) {
      const int col = dim - 1 - i;  // largest theta last in ascending order
      const double theta = tes.eigenvalues()[col];
      if (!(theta > 0.0)) {
        lambda[i] = sigma;  // placeholder; residual check will reject
        V.col(i).setZero();
        continue;
      }
      lambda[i] = sigma + 1.0 / theta;
      V.col(i) = Q.leftCols(dim) * tes.eigenvectors().col(col);
    }
    // Sort the extracted pairs ascending by lambda.
    std::vector<int> order(take);
    for (int i = 0; i < take; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lambda[a] < lambda[b]; });
    Eigen::VectorXd ls(take);
    Eigen::MatrixXd Vs(n, take);
    for (int i = 0; i < take; ++i) {
      ls[i] = lambda[order[i]];
      Vs.col(i) = V.col(order[i]);
    }
    best = finish(A, M, std::move(ls), std::move(Vs), k + 1);
    if (take == m) {
      double scale = std::max(1.0, best.eigenvalues.cwiseAbs().maxCoeff());
      if ((best.residuals.array() <= tol * scale).all()) return best;
    }
    if (dim >= n) break;
  }

  if (best.eigenvalues.size() == m) {
    double scale = std::max(1.0, best.eigenvalues.cwiseAbs().maxCoeff());
    if ((best.residuals.array() <= tol * scale).all()) return best;
    std::string msg = "eigensolver did not reach tolerance; achieved residuals:";
    for (int i = 0; i < m; ++i) msg += " " + std::to_string(best.residuals[i]);
    throw SolverError(msg);
  }
  throw SolverError("eigensolver failed to extract the requested eigenpairs");
}

}  // namespace t2g
