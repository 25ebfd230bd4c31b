#include "hitchin/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "hitchin/error.hpp"

namespace hitchin {

BandedLU::BandedLU(const SparseMatrixR& a) : n_(a.rows()) {
  if (a.rows() != a.cols()) throw InvalidArgument("banded LU needs a square matrix");
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrixR::InnerIterator it(a, i); it; ++it) {
      const auto d = it.col() - i;
      if (d > 0) ku_ = std::max<int>(ku_, static_cast<int>(d));
      if (d < 0) kl_ = std::max<int>(kl_, static_cast<int>(-d));
    }
  }
  width_ = 2 * kl_ + ku_ + 1;
  band_.assign(static_cast<std::size_t>(n_ * width_), 0.0);
  pivot_.resize(static_cast<std::size_t>(n_));
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrixR::InnerIterator it(a, i); it; ++it) at(i, it.col()) += it.value();
  }

  double scale = 0.0;
  for (double v : band_) scale = std::max(scale, std::abs(v));
  const double tiny = scale * 1e-300;

  for (Eigen::Index k = 0; k < n_; ++k) {
    const Eigen::Index last_row = std::min<Eigen::Index>(n_ - 1, k + kl_);
    const Eigen::Index last_col = std::min<Eigen::Index>(n_ - 1, k + kl_ + ku_);
    Eigen::Index p = k;
    double best = std::abs(at(k, k));
    for (Eigen::Index i = k + 1; i <= last_row; ++i) {
      if (std::abs(at(i, k)) > best) {
        best = std::abs(at(i, k));
        p = i;
      }
    }
    if (!(best > tiny)) {
      throw NumericalError("zero pivot in banded LU at row " + std::to_string(k));
    }
    pivot_[static_cast<std::size_t>(k)] = p;
    if (p != k) {
      for (Eigen::Index c = k; c <= last_col; ++c) std::swap(at(k, c), at(p, c));
    }
    const double piv = at(k, k);
    for (Eigen::Index i = k + 1; i <= last_row; ++i) {
      const double l = at(i, k) / piv;
      at(i, k) = l;
      if (l == 0.0) continue;
      for (Eigen::Index c = k + 1; c <= last_col; ++c) at(i, c) -= l * at(k, c);
    }
  }
}

Eigen::VectorXd BandedLU::solve(const Eigen::VectorXd& b) const {
  if (b.size() != n_) throw InvalidArgument("right-hand side has the wrong length");
  Eigen::VectorXd x = b;
  for (Eigen::Index k = 0; k < n_; ++k) {
    const Eigen::Index p = pivot_[static_cast<std::size_t>(k)];
    if (p != k) std::swap(x[k], x[p]);
    const Eigen::Index last_row = std::min<Eigen::Index>(n_ - 1, k + kl_);
    for (Eigen::Index i = k + 1; i <= last_row; ++i) x[i] -= at(i, k) * x[k];
  }
  for (Eigen::Index k = n_ - 1; k >= 0; --k) {
    const Eigen::Index last_col = std::min<Eigen::Index>(n_ - 1, k + kl_ + ku_);
    double s = x[k];
    for (Eigen::Index c = k + 1; c <= last_col; ++c) s -= at(k, c) * x[c];
    x[k] = s / at(k, k);
  }
  return x;
}

// ---------------------------------------------------------------------------

KrylovResult gmres(const SparseMatrixR& a, const Eigen::VectorXd& b, const Preconditioner& m_inv,
                   double rel_tol, int restart, int max_iterations) {
  const Eigen::Index n = b.size();
  KrylovResult res;
  res.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  restart = std::max(1, restart);
  Eigen::MatrixXd V(n, restart + 1);
  Eigen::MatrixXd Z(n, restart);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
  Eigen::VectorXd cs(restart), sn(restart), g(restart + 1);

  Eigen::VectorXd r = b;
  double beta = bnorm;
  while (res.iterations < max_iterations) {
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    H.setZero();
    int j = 0;
    for (; j < restart && res.iterations < max_iterations; ++j) {
      ++res.iterations;
      Z.col(j) = m_inv ? m_inv(V.col(j)) : Eigen::VectorXd(V.col(j));
      Eigen::VectorXd w = a * Z.col(j);
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        H(i, j) = w.dot(V.col(i));
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) > 0.0) V.col(j + 1) = w / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double d = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = d == 0.0 ? 1.0 : H(j, j) / d;
      sn[j] = d == 0.0 ? 0.0 : H(j + 1, j) / d;
      H(j, j) = d;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      res.relative_residual = std::abs(g[j + 1]) / bnorm;
      if (res.relative_residual <= rel_tol || d == 0.0) {
        ++j;
        break;
      }
    }
    Eigen::VectorXd y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    res.x += Z.leftCols(j) * y;
    r = b - a * res.x;
    beta = r.norm();
    res.relative_residual = beta / bnorm;
    if (!std::isfinite(beta)) return res;
    if (res.relative_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

FieldBlockPreconditioner::FieldBlockPreconditioner(const SparseMatrixR& a, int fields)
    : fields_(fields), nodes_(a.rows() / fields) {
  if (fields < 1 || a.rows() % fields != 0) throw InvalidArgument("bad field count");
  for (int j = 0; j < fields; ++j) {
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index node = 0; node < nodes_; ++node) {
      const Eigen::Index row = node * fields + j;
      for (SparseMatrixR::InnerIterator it(a, row); it; ++it) {
        if (it.col() % fields == j) {
          trip.emplace_back(static_cast<int>(node), static_cast<int>(it.col() / fields), it.value());
        }
      }
    }
    Eigen::SparseMatrix<double> block(nodes_, nodes_);
    block.setFromTriplets(trip.begin(), trip.end());
    block.makeCompressed();
    auto lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu->compute(block);
    if (lu->info() != Eigen::Success) {
      throw NumericalError("preconditioner block " + std::to_string(j) + " is singular");
    }
    lu_.push_back(std::move(lu));
  }
}

Eigen::VectorXd FieldBlockPreconditioner::apply(const Eigen::VectorXd& r) const {
  Eigen::VectorXd out(r.size());
  Eigen::VectorXd piece(nodes_);
  for (int j = 0; j < fields_; ++j) {
    for (Eigen::Index i = 0; i < nodes_; ++i) piece[i] = r[i * fields_ + j];
    const Eigen::VectorXd s = lu_[static_cast<std::size_t>(j)]->solve(piece);
    for (Eigen::Index i = 0; i < nodes_; ++i) out[i * fields_ + j] = s[i];
  }
  return out;
}

}  // namespace hitchin
