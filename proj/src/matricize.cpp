#include "tpca/matricize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

namespace tpca {

std::size_t int_pow(int n, int d) {
  if (n < 1 || d < 0) throw DomainError("int_pow needs n >= 1, d >= 0");
  std::size_t r = 1;
  for (int i = 0; i < d; ++i) {
    if (r > std::numeric_limits<std::uint32_t>::max() / static_cast<std::size_t>(n))
      throw DomainError("matricized size overflows");
    r *= static_cast<std::size_t>(n);
  }
  return r;
}

MatricizationMap::MatricizationMap(int n, int d)
    : n_(n), d_(d), N_(int_pow(n, d)), layout_(symmetric_layout(n, 2 * d)), class_of_(N_ * N_) {
  Index idx(static_cast<std::size_t>(2 * d), 0);
  for (std::size_t r = 0; r < N_; ++r) {
    std::size_t rr = r;
    for (int j = d - 1; j >= 0; --j) {
      idx[static_cast<std::size_t>(j)] = static_cast<int>(rr % static_cast<std::size_t>(n));
      rr /= static_cast<std::size_t>(n);
    }
    for (std::size_t c = 0; c < N_; ++c) {
      std::size_t cc = c;
      for (int j = d - 1; j >= 0; --j) {
        idx[static_cast<std::size_t>(d + j)] = static_cast<int>(cc % static_cast<std::size_t>(n));
        cc /= static_cast<std::size_t>(n);
      }
      class_of_[r * N_ + c] = static_cast<std::uint32_t>(layout_->rank_any(idx));
    }
  }
}

std::shared_ptr<const MatricizationMap> matricization_map(int n, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MatricizationMap>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, d}];
  if (!slot) slot = std::make_shared<const MatricizationMap>(n, d);
  return slot;
}

SymmetricMatrix matr(const SuperSymmetricTensor& f) {
  if (f.order() % 2 != 0) throw DomainError("matr needs an even-order tensor");
  const auto map = matricization_map(f.dim(), f.order() / 2);
  const auto N = static_cast<Eigen::Index>(map->size());
  const auto cls = map->class_of();
  const auto vals = f.values();
  SymmetricMatrix X(N, N);
  for (Eigen::Index r = 0; r < N; ++r)
    for (Eigen::Index c = 0; c < N; ++c) X(r, c) = vals[cls[static_cast<std::size_t>(r * N + c)]];
  return X;
}

Eigen::MatrixXd matr(const GeneralTensor& f) {
  if (f.order() % 2 != 0) throw DomainError("matr needs an even-order tensor");
  if (!f.is_cubic()) throw ShapeError("matr needs a cubic tensor");
  const auto N = static_cast<Eigen::Index>(int_pow(f.dims().front(), f.order() / 2));
  // Row-major data reshaped to N x N row-major is exactly the matricization.
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(f.values().data(), N, N);
}

GeneralTensor matr_inv(const Eigen::MatrixXd& X, int n, int d) {
  if (X.rows() != X.cols()) throw ShapeError("matr_inv needs a square matrix");
  if (n < 1 || d < 1 || static_cast<std::size_t>(X.rows()) != int_pow(n, d))
    throw ShapeError("matrix size " + std::to_string(X.rows()) + " is not n^d");
  GeneralTensor t = GeneralTensor::cubic(n, 2 * d);
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(t.values().data(), X.rows(), X.cols()) = X;
  return t;
}

Vector vect(const GeneralTensor& f) {
  return Eigen::Map<const Vector>(f.values().data(), static_cast<Eigen::Index>(f.size()));
}

GeneralTensor vect_inv(const Vector& v, int n, int m) {
  if (n < 1 || m < 1 || static_cast<std::size_t>(v.size()) != int_pow(n, m))
    throw ShapeError("vector length " + std::to_string(v.size()) + " is not n^m");
  return GeneralTensor(std::vector<int>(static_cast<std::size_t>(m), n), std::vector<double>(v.data(), v.data() + v.size()));
}

SymmetryCheck is_super_symmetric(const GeneralTensor& t, double tol) {
  if (!t.is_cubic()) throw ShapeError("super-symmetry check needs a cubic tensor");
  const auto layout = symmetric_layout(t.dims().front(), t.order());
  std::vector<double> lo(layout->size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(layout->size(), -std::numeric_limits<double>::infinity());
  Index idx(static_cast<std::size_t>(t.order()));
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    t.unravel(flat, idx);
    const std::size_t c = layout->rank_any(idx);
    lo[c] = std::min(lo[c], t.values()[flat]);
    hi[c] = std::max(hi[c], t.values()[flat]);
  }
  double worst = 0.0;
  for (std::size_t c = 0; c < lo.size(); ++c) worst = std::max(worst, hi[c] - lo[c]);
  return {worst <= tol, worst};
}

RankOneDiagnostic rank_one_ratio(const SymmetricMatrix& X) {
  if (X.rows() != X.cols() || X.rows() == 0) throw ShapeError("rank_one_ratio needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
  const Vector& ev = es.eigenvalues();
  const Eigen::Index N = ev.size();
  // Eigenvalues ascend; the largest |eig| is at one end.
  const Eigen::Index top = std::abs(ev[0]) > std::abs(ev[N - 1]) ? 0 : N - 1;
  const double s1 = std::abs(ev[top]);
  if (s1 == 0.0) throw DegenerateError("rank_one_ratio of the zero matrix");
  double s2 = 0.0;
  for (Eigen::Index i = 0; i < N; ++i)
    if (i != top) s2 = std::max(s2, std::abs(ev[i]));

  RankOneDiagnostic out;
  out.ratio = s2 / s1;
  out.eigenvalue = ev[top];
  out.eigenvector = es.eigenvectors().col(top);
  Eigen::Index arg;
  out.eigenvector.cwiseAbs().maxCoeff(&arg);
  if (out.eigenvector[arg] < 0) out.eigenvector = -out.eigenvector;
  out.spectrum = ev.reverse();
  return out;
}

SymmetricMatrix matr_partial(const PartialSymmetricTensor& g) {
  const int n = g.n();
  const int m = g.m();
  const Eigen::Index N = static_cast<Eigen::Index>(n) * m;
  SymmetricMatrix X(N, N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < m; ++l) X(i * m + j, k * m + l) = g(i, j, k, l);
  return X;
}

GeneralTensor matr_partial_inv(const Eigen::MatrixXd& X, int n, int m) {
  if (X.rows() != X.cols() || X.rows() != static_cast<Eigen::Index>(n) * m)
    throw ShapeError("matr_partial_inv needs an nm x nm matrix");
  GeneralTensor t({n, m, n, m});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < m; ++l) t({i, j, k, l}) = X(i * m + j, k * m + l);
  return t;
}

Eigen::MatrixXd mode_n_unfold(const GeneralTensor& t, int mode) {
  if (mode < 0 || mode >= t.order()) throw DomainError("mode out of range");
  const auto& dims = t.dims();
  const Eigen::Index rows = dims[static_cast<std::size_t>(mode)];
  const Eigen::Index cols = static_cast<Eigen::Index>(t.size()) / rows;
  Eigen::MatrixXd A(rows, cols);
  Index idx(dims.size());
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    t.unravel(flat, idx);
    Eigen::Index col = 0;
    Eigen::Index stride = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (static_cast<int>(k) == mode) continue;
      col += idx[k] * stride;
      stride *= dims[k];
    }
    A(idx[static_cast<std::size_t>(mode)], col) = t.values()[flat];
  }
  return A;
}

}  // namespace tpca
