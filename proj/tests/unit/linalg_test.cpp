#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "hitchin/error.hpp"
#include "hitchin/linalg.hpp"

using namespace hitchin;

namespace {

SparseMatrixR random_banded(int n, int kl, int ku, std::mt19937_64& rng, bool dominant) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
      double v = u(rng);
      if (dominant && i == j) v += kl + ku + 2.0;
      t.emplace_back(i, j, v);
    }
  }
  SparseMatrixR a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("banded LU agrees with dense LU") {
    std::mt19937_64 rng(1);
    for (auto [kl, ku] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{4, 1}}) {
      const auto a = random_banded(40, kl, ku, rng, false);
      Eigen::VectorXd b = Eigen::VectorXd::Random(40);
      const BandedLU lu(a);
      CHECK(lu.lower_bandwidth() == kl);
      CHECK(lu.upper_bandwidth() == ku);
      const Eigen::VectorXd x = lu.solve(b);
      const Eigen::VectorXd ref = Eigen::MatrixXd(a).fullPivLu().solve(b);
      CHECK((x - ref).norm() <= 1e-10 * ref.norm());
    }
  }

  TEST_CASE("banded LU reports a singular matrix") {
    SparseMatrixR a(3, 3);
    a.insert(0, 0) = 1.0;
    a.insert(1, 1) = 0.0;
    a.insert(2, 2) = 1.0;
    CHECK_THROWS_AS(BandedLU{a}, NumericalError);
  }

  TEST_CASE("GMRES converges to the dense solution") {
    std::mt19937_64 rng(2);
    const auto a = random_banded(200, 3, 3, rng, true);
    const Eigen::VectorXd b = Eigen::VectorXd::Random(200);
    const auto r = gmres(a, b, [](const Eigen::VectorXd& v) { return v; }, 1e-12, 30, 2000);
    CHECK(r.converged);
    const Eigen::VectorXd ref = Eigen::MatrixXd(a).fullPivLu().solve(b);
    CHECK((r.x - ref).norm() <= 1e-9 * ref.norm());
    CHECK(r.relative_residual <= 1e-12);
  }

  TEST_CASE("field block preconditioner inverts a block-diagonal matrix") {
    std::mt19937_64 rng(3);
    const int fields = 2, nodes = 30;
    const auto blk = random_banded(nodes, 1, 1, rng, true);
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 0; k < blk.outerSize(); ++k) {
      for (SparseMatrixR::InnerIterator it(blk, k); it; ++it) {
        for (int f = 0; f < fields; ++f) t.emplace_back(it.row() * fields + f, it.col() * fields + f, it.value() * (f + 1));
      }
    }
    SparseMatrixR a(nodes * fields, nodes * fields);
    a.setFromTriplets(t.begin(), t.end());
    const FieldBlockPreconditioner p(a, fields);
    const Eigen::VectorXd b = Eigen::VectorXd::Random(nodes * fields);
    CHECK((a * p.apply(b) - b).norm() < 1e-12 * b.norm());
  }
}
