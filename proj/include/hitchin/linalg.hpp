#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <vector>

namespace hitchin {

using SparseMatrixR = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// LU factorization with partial pivoting of a banded matrix. Bandwidths are read
/// from the sparsity pattern. Throws NumericalError on a zero pivot.
class BandedLU {
 public:
  explicit BandedLU(const SparseMatrixR& a);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

 private:
  double& at(Eigen::Index i, Eigen::Index c) { return band_[static_cast<std::size_t>(i * width_ + c - i + kl_)]; }
  double at(Eigen::Index i, Eigen::Index c) const {
    return band_[static_cast<std::size_t>(i * width_ + c - i + kl_)];
  }

  Eigen::Index n_ = 0;
  int kl_ = 0, ku_ = 0;
  Eigen::Index width_ = 0;  // kl + (ku + kl) + 1 columns per row
  std::vector<double> band_;
  std::vector<Eigen::Index> pivot_;
};

struct KrylovResult {
  Eigen::VectorXd x;
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0.0;
};

using Preconditioner = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Restarted GMRES with right preconditioning, started from x = 0.
KrylovResult gmres(const SparseMatrixR& a, const Eigen::VectorXd& b, const Preconditioner& m_inv,
                   double rel_tol, int restart, int max_iterations);

/// Block-diagonal preconditioner over interleaved fields: keeps the entries of `a` that
/// couple unknown j to unknown j (stride `fields`) and factorizes each block.
class FieldBlockPreconditioner {
 public:
  FieldBlockPreconditioner(const SparseMatrixR& a, int fields);
  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;

 private:
  int fields_;
  Eigen::Index nodes_;
  std::vector<std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>>> lu_;
};

}  // namespace hitchin
