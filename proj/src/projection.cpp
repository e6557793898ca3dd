#include "tpca/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace tpca {

double alpha(std::span<const int> k, int d) {
  const double w = static_cast<double>(multinomial(d, k));
  Signature doubled(k.begin(), k.end());
  for (int& v : doubled) v *= 2;
  return w / static_cast<double>(multinomial(2 * d, doubled));
}

TraceOneProjector::TraceOneProjector(std::size_t N, std::vector<std::uint32_t> class_of, std::size_t num_classes)
    : N_(N), class_of_(std::move(class_of)), class_size_(num_classes, 0.0) {
  if (class_of_.size() != N_ * N_) throw ShapeError("class map must cover every matrix entry");
  for (auto c : class_of_) class_size_[c] += 1.0;
  std::map<std::uint32_t, double> diag;
  for (std::size_t i = 0; i < N_; ++i) diag[class_of_[i * N_ + i]] += 1.0;
  for (const auto& [c, w] : diag) {
    diag_classes_.push_back(c);
    diag_weight_.push_back(w);
    weight_norm_ += w * w / class_size_[c];
  }
}

std::shared_ptr<const TraceOneProjector> TraceOneProjector::super_symmetric(int n, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const TraceOneProjector>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, d}];
  if (!slot) {
    const auto map = matricization_map(n, d);
    slot = std::make_shared<const TraceOneProjector>(
        map->size(), std::vector<std::uint32_t>(map->class_of().begin(), map->class_of().end()), map->layout().size());
  }
  return slot;
}

std::shared_ptr<const TraceOneProjector> TraceOneProjector::partial_symmetric(int n, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const TraceOneProjector>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, m}];
  if (slot) return slot;

  // Orbit of (i,j,k,l) under swapping i<->k and j<->l; the class id is
  // assigned in order of first appearance of the orbit's smallest entry.
  const std::size_t N = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  auto pos = [&](int i, int j, int k, int l) {
    return static_cast<std::size_t>(i * m + j) * N + static_cast<std::size_t>(k * m + l);
  };
  std::vector<std::uint32_t> class_of(N * N);
  std::map<std::size_t, std::uint32_t> ids;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < m; ++l) {
          const std::size_t rep = std::min({pos(i, j, k, l), pos(k, j, i, l), pos(i, l, k, j), pos(k, l, i, j)});
          auto [it, fresh] = ids.emplace(rep, static_cast<std::uint32_t>(ids.size()));
          class_of[pos(i, j, k, l)] = it->second;
        }
  slot = std::make_shared<const TraceOneProjector>(N, std::move(class_of), ids.size());
  return slot;
}

double TraceOneProjector::project(const SymmetricMatrix& Z, SymmetricMatrix& X) const {
  const auto N = static_cast<Eigen::Index>(N_);
  if (Z.rows() != N || Z.cols() != N) throw ShapeError("projection input has the wrong size");

  std::vector<double> avg(class_size_.size(), 0.0);
  const double* z = Z.data();
  // Column-major storage: element (r,c) at c*N + r; class_of is symmetric in
  // (r,c) so the traversal order does not matter.
  for (std::size_t e = 0; e < N_ * N_; ++e) avg[class_of_[e]] += z[e];
  for (std::size_t c = 0; c < avg.size(); ++c) avg[c] /= class_size_[c];

  double trace = 0.0;
  for (std::size_t q = 0; q < diag_classes_.size(); ++q) trace += diag_weight_[q] * avg[diag_classes_[q]];
  const double t = (1.0 - trace) / weight_norm_;
  for (std::size_t q = 0; q < diag_classes_.size(); ++q) {
    const auto c = diag_classes_[q];
    avg[c] += t * diag_weight_[q] / class_size_[c];
  }

  X.resize(N, N);
  double* x = X.data();
  for (std::size_t e = 0; e < N_ * N_; ++e) x[e] = avg[class_of_[e]];
  return t;
}

double TraceOneProjector::class_violation(const SymmetricMatrix& X) const {
  std::vector<double> lo(class_size_.size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(class_size_.size(), -std::numeric_limits<double>::infinity());
  const double* x = X.data();
  for (std::size_t e = 0; e < N_ * N_; ++e) {
    lo[class_of_[e]] = std::min(lo[class_of_[e]], x[e]);
    hi[class_of_[e]] = std::max(hi[class_of_[e]], x[e]);
  }
  double worst = 0.0;
  for (std::size_t c = 0; c < lo.size(); ++c) worst = std::max(worst, hi[c] - lo[c]);
  return worst;
}

ProjectionResult project_C(const SymmetricMatrix& Z, int n, int d) {
  if (n < 1 || d < 1 || Z.rows() != Z.cols() || static_cast<std::size_t>(Z.rows()) != int_pow(n, d))
    throw ShapeError("project_C needs an n^d x n^d matrix");
  ProjectionResult out;
  out.lambda = 2.0 * TraceOneProjector::super_symmetric(n, d)->project(Z, out.X);
  return out;
}

namespace {

// U * diag(s) * U^T over the columns with s != 0, symmetrized.
SymmetricMatrix reassemble(const Eigen::MatrixXd& U, const Vector& s) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] != 0.0) keep.push_back(i);
  const Eigen::Index N = U.rows();
  if (keep.empty()) return SymmetricMatrix::Zero(N, N);
  Eigen::MatrixXd Uk(N, static_cast<Eigen::Index>(keep.size()));
  Eigen::MatrixXd Us(N, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t q = 0; q < keep.size(); ++q) {
    Uk.col(static_cast<Eigen::Index>(q)) = U.col(keep[q]);
    Us.col(static_cast<Eigen::Index>(q)) = U.col(keep[q]) * s[keep[q]];
  }
  SymmetricMatrix Y = Us * Uk.transpose();
  return 0.5 * (Y + Y.transpose());
}

}  // namespace

SymmetricMatrix shrink_nuclear(const SymmetricMatrix& M, double tau) {
  if (tau < 0) throw DomainError("shrinkage threshold must be non-negative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  Vector s = es.eigenvalues();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double mag = std::max(std::abs(s[i]) - tau, 0.0);
    s[i] = s[i] < 0 ? -mag : mag;
  }
  return reassemble(es.eigenvectors(), s);
}

SymmetricMatrix project_psd(const SymmetricMatrix& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  Vector s = es.eigenvalues().cwiseMax(0.0);
  return reassemble(es.eigenvectors(), s);
}

}  // namespace tpca
