#include <doctest.h>

#include <map>

#include "support.hpp"
#include "tpca/oracle.hpp"
#include "tpca/admm.hpp"
#include "tpca/projection.hpp"

using namespace tpca;
using namespace tpca::testing;

namespace {

Eigen::MatrixXd random_symmetric(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd M(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) M(i, j) = g(rng);
  return 0.5 * (M + M.transpose());
}

// Dense least squares min ||X - Z|| s.t. tr X = 1 and X constant on the
// partial-symmetry orbits of ((i,j),(k,l)), solved through the KKT system.
Eigen::MatrixXd partial_kkt(const Eigen::MatrixXd& Z, int n, int m) {
  const int N = n * m;
  std::map<std::array<int, 4>, int> first;
  std::vector<std::pair<int, int>> equal;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < m; ++l) {
          std::array<int, 4> key{i, j, k, l};
          for (auto alt : {std::array<int, 4>{k, j, i, l}, std::array<int, 4>{i, l, k, j}, std::array<int, 4>{k, l, i, j}})
            key = std::min(key, alt);
          const int flat = (i * m + j) * N + (k * m + l);
          auto [it, fresh] = first.emplace(key, flat);
          if (!fresh) equal.emplace_back(it->second, flat);
        }
  const int rows = static_cast<int>(equal.size()) + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, N * N);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (int r = 0; r < rows - 1; ++r) {
    A(r, equal[static_cast<std::size_t>(r)].first) = 1.0;
    A(r, equal[static_cast<std::size_t>(r)].second) = -1.0;
  }
  for (int i = 0; i < N; ++i) A(rows - 1, i * N + i) = 1.0;
  b[rows - 1] = 1.0;
  Eigen::VectorXd z(N * N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) z[r * N + c] = Z(r, c);
  const Eigen::MatrixXd AAt = A * A.transpose();
  const Eigen::VectorXd nu = AAt.completeOrthogonalDecomposition().solve(A * z - b);
  const Eigen::VectorXd x = z - A.transpose() * nu;
  Eigen::MatrixXd X(N, N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) X(r, c) = x[r * N + c];
  return X;
}

double sym_violation(const SymmetricMatrix& X, int n, int d) {
  return is_super_symmetric(matr_inv(X, n, d), 0.0).max_violation;
}

}  // namespace

TEST_SUITE("projection") {
  TEST_CASE("alpha values") {
    const std::vector<int> e1{1, 0, 0};
    CHECK(alpha(e1, 1) == doctest::Approx(1.0));
    const std::vector<int> k20{2, 0}, k11{1, 1};
    CHECK(alpha(k20, 2) == doctest::Approx(1.0));
    CHECK(alpha(k11, 2) == doctest::Approx(1.0 / 3.0));
    const std::vector<int> bad{1, 0};
    CHECK_THROWS_AS(alpha(bad, 2), DomainError);
  }

  TEST_CASE("alpha is diagonal count over class size") {
    for (int n = 2; n <= 3; ++n)
      for (int d = 1; d <= 3; ++d) {
        const int N = static_cast<int>(int_pow(n, d));
        // Count, for every even signature, how many matrix diagonal entries
        // and how many tensor entries carry it.
        std::map<Signature, std::pair<int, int>> counts;
        const GeneralTensor probe = GeneralTensor::cubic(n, 2 * d);
        Index idx(static_cast<std::size_t>(2 * d));
        for (std::size_t flat = 0; flat < probe.size(); ++flat) {
          probe.unravel(flat, idx);
          auto& c = counts[signature_of(idx, n)];
          ++c.second;
          bool diag = true;
          for (int k = 0; k < d; ++k) diag = diag && idx[static_cast<std::size_t>(k)] == idx[static_cast<std::size_t>(k + d)];
          if (diag) ++c.first;
        }
        int seen = 0;
        for (const auto& [sig, c] : counts) {
          if (c.first == 0) continue;
          std::vector<int> half(sig.size());
          for (std::size_t j = 0; j < sig.size(); ++j) half[j] = sig[j] / 2;
          CHECK(alpha(half, d) == doctest::Approx(static_cast<double>(c.first) / c.second));
          seen += c.first;
        }
        CHECK(seen == N);
      }
  }

  TEST_CASE("hand-derived case with lambda -3/4") {
    const Vector e1 = vec({1.0, 0.0});
    const SymmetricMatrix Z = 2.0 * matr(rank_one(1.0, e1, 4));
    const auto res = project_C(Z, 2, 2);
    CHECK(res.lambda == doctest::Approx(-0.75).epsilon(1e-14));
    const auto T = matr_inv(res.X, 2, 2);
    CHECK(T({0, 0, 0, 0}) == doctest::Approx(13.0 / 8));
    CHECK(T({0, 0, 1, 1}) == doctest::Approx(-1.0 / 8));
    CHECK(T({0, 1, 0, 1}) == doctest::Approx(-1.0 / 8));
    CHECK(T({1, 1, 1, 1}) == doctest::Approx(-3.0 / 8));
    CHECK(T({0, 0, 0, 1}) == 0.0);
    CHECK(T({0, 1, 1, 1}) == 0.0);
    CHECK((res.X - kkt_project(Z, 2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("fixed points") {
    std::mt19937_64 rng(1);
    for (int n = 2; n <= 4; ++n) {
      const Vector x = random_unit(n, rng);
      const SymmetricMatrix Z = matr(rank_one(1.0, x, 4));
      CHECK((project_C(Z, n, 2).X - Z).cwiseAbs().maxCoeff() < 1e-14);
    }
  }

  TEST_CASE("project_C agrees with the dense KKT solve") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + trial % 2;
      const SymmetricMatrix Z = random_symmetric(n * n, rng);
      const auto res = project_C(Z, n, 2);
      CHECK((res.X - kkt_project(Z, n, 2)).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(std::abs(res.X.trace() - 1.0) < 1e-14);
      CHECK(sym_violation(res.X, n, 2) < 1e-12);
    }
    // Also an order-six case.
    const SymmetricMatrix Z = random_symmetric(8, rng);
    CHECK((project_C(Z, 2, 3).X - kkt_project(Z, 2, 3)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK_THROWS_AS(project_C(random_symmetric(5, rng), 2, 2), ShapeError);
  }

  TEST_CASE("project_C is idempotent, non-expansive and beats feasible perturbations") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const SymmetricMatrix Z1 = random_symmetric(9, rng), Z2 = random_symmetric(9, rng);
      const SymmetricMatrix P1 = project_C(Z1, 3, 2).X, P2 = project_C(Z2, 3, 2).X;
      CHECK((project_C(P1, 3, 2).X - P1).norm() < 1e-12);
      CHECK((P1 - P2).norm() <= (Z1 - Z2).norm() + 1e-10);
      // Feasible directions: differences of two feasible points.
      const double base = (P1 - Z1).norm();
      for (int k = 0; k < 100; ++k) {
        const SymmetricMatrix D = project_C(random_symmetric(9, rng), 3, 2).X - P2;
        CHECK((P1 + 1e-3 * D - Z1).norm() >= base - 1e-12);
      }
    }
  }

  TEST_CASE("partial projector matches its dense KKT solve") {
    std::mt19937_64 rng(4);
    for (auto [n, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
      const auto P = TraceOneProjector::partial_symmetric(n, m);
      CHECK(P->size() == static_cast<std::size_t>(n * m));
      for (int trial = 0; trial < 5; ++trial) {
        const SymmetricMatrix Z = random_symmetric(n * m, rng);
        const SymmetricMatrix X = P->project(Z);
        CHECK((X - partial_kkt(Z, n, m)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(P->class_violation(X) < 1e-14);
        CHECK(PartialSymmetricTensor::from_dense(matr_partial_inv(X, n, m)).max_violation() < 1e-12);
      }
    }
  }

  TEST_CASE("super-symmetric multiplier is twice the trace shift") {
    std::mt19937_64 rng(5);
    const auto P = TraceOneProjector::super_symmetric(3, 2);
    const SymmetricMatrix Z = random_symmetric(9, rng);
    SymmetricMatrix X;
    const double t = P->project(Z, X);
    CHECK(2.0 * t == doctest::Approx(project_C(Z, 3, 2).lambda));
  }

  TEST_CASE("nuclear shrinkage") {
    Eigen::MatrixXd D = Eigen::Vector2d(3.0, 1.0).asDiagonal();
    Eigen::MatrixXd expect = Eigen::Vector2d(1.0, 0.0).asDiagonal();
    CHECK((shrink_nuclear(D, 2.0) - expect).norm() < 1e-14);

    std::mt19937_64 rng(6);
    const SymmetricMatrix M = random_symmetric(6, rng);
    CHECK((shrink_nuclear(M, 0.0) - M).norm() < 1e-12);

    // Reference through a general SVD.
    const double tau = 0.5;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd s = (svd.singularValues().array() - tau).max(0.0);
    const Eigen::MatrixXd ref = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    const SymmetricMatrix Y = shrink_nuclear(M, tau);
    CHECK((Y - ref).norm() < 1e-10);

    auto obj = [&](const Eigen::MatrixXd& A) { return tau * nuclear_norm(A) + 0.5 * (A - M).squaredNorm(); };
    const double base = obj(Y);
    for (int k = 0; k < 100; ++k) CHECK(base <= obj(Y + 1e-4 * random_symmetric(6, rng)) + 1e-14);
  }

  TEST_CASE("psd projection") {
    Eigen::MatrixXd D = Eigen::Vector2d(2.0, -1.0).asDiagonal();
    Eigen::MatrixXd expect = Eigen::Vector2d(2.0, 0.0).asDiagonal();
    CHECK((project_psd(D) - expect).norm() == 0.0);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const SymmetricMatrix M = random_symmetric(7, rng);
      const SymmetricMatrix P = project_psd(M);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
      CHECK(std::abs((M - P).cwiseProduct(P).sum()) < 1e-8);
      CHECK((project_psd(P) - P).norm() < 1e-10);
    }
  }

  TEST_CASE("shrinkage and psd projection commute with rotations") {
    std::mt19937_64 rng(8);
    const SymmetricMatrix M = random_symmetric(5, rng);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_symmetric(5, rng)).householderQ();
    CHECK((shrink_nuclear(Q * M * Q.transpose(), 0.7) - Q * shrink_nuclear(M, 0.7) * Q.transpose()).norm() < 1e-10);
    CHECK((project_psd(Q * M * Q.transpose()) - Q * project_psd(M) * Q.transpose()).norm() < 1e-10);
  }
}
