#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tpca/combinatorics.hpp"

namespace tpca {

using Vector = Eigen::VectorXd;

/// Dense tensor of arbitrary shape, values in row-major order (last index
/// varies fastest).
class GeneralTensor {
 public:
  GeneralTensor() = default;
  explicit GeneralTensor(std::vector<int> dims);
  GeneralTensor(std::vector<int> dims, std::vector<double> values);

  /// Cubic tensor n x n x ... x n of the given order.
  static GeneralTensor cubic(int n, int order);

  const std::vector<int>& dims() const { return dims_; }
  int order() const { return static_cast<int>(dims_.size()); }
  std::size_t size() const { return values_.size(); }
  bool is_cubic() const;

  std::size_t offset(std::span<const int> idx) const;
  double operator()(std::span<const int> idx) const { return values_[offset(idx)]; }
  double& operator()(std::span<const int> idx) { return values_[offset(idx)]; }
  double operator()(std::initializer_list<int> idx) const {
    return (*this)(std::span<const int>(idx.begin(), idx.size()));
  }
  double& operator()(std::initializer_list<int> idx) {
    return (*this)(std::span<const int>(idx.begin(), idx.size()));
  }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Decode a flat offset into a multi-index.
  void unravel(std::size_t flat, std::span<int> idx) const;

 private:
  std::vector<int> dims_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

/// Super-symmetric tensor of dimension n and order m. One value per
/// permutation class; any permutation of an index reads the same value.
class SuperSymmetricTensor {
 public:
  SuperSymmetricTensor(int n, int order);

  int dim() const { return layout_->dim(); }
  int order() const { return layout_->order(); }
  std::size_t num_classes() const { return values_.size(); }
  const SymmetricLayout& layout() const { return *layout_; }

  double operator()(std::span<const int> idx) const;
  double operator()(std::initializer_list<int> idx) const {
    return (*this)(std::span<const int>(idx.begin(), idx.size()));
  }
  /// Assign the whole permutation class of idx.
  void set(std::span<const int> idx, double value);
  void set(std::initializer_list<int> idx, double value) {
    set(std::span<const int>(idx.begin(), idx.size()), value);
  }

  /// Values in class order (see SymmetricLayout).
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Dense n^m expansion; intended for oracles and tests.
  GeneralTensor to_dense() const;

  /// Frobenius norm over the full index space.
  double norm() const;
  bool is_zero() const;

  SuperSymmetricTensor& operator+=(const SuperSymmetricTensor& other);
  SuperSymmetricTensor& operator-=(const SuperSymmetricTensor& other);
  SuperSymmetricTensor& operator*=(double s);

 private:
  std::shared_ptr<const SymmetricLayout> layout_;
  std::vector<double> values_;
};

/// Fourth-order tensor on an n x m x n x m grid with
/// G[i][j][k][l] = G[k][j][i][l] = G[i][l][k][j]. Stored densely.
class PartialSymmetricTensor {
 public:
  PartialSymmetricTensor(int n, int m);
  /// Validates partial symmetry to tol; throws DomainError otherwise.
  static PartialSymmetricTensor from_dense(const GeneralTensor& g, double tol = 1e-12);
  /// Averages a dense n x m x n x m tensor over its partial-symmetry orbit.
  static PartialSymmetricTensor symmetrize(const GeneralTensor& g);

  int n() const { return n_; }
  int m() const { return m_; }
  double operator()(int i, int j, int k, int l) const { return dense_({i, j, k, l}); }
  /// Assigns the whole orbit of (i,j,k,l).
  void set(int i, int j, int k, int l, double value);
  const GeneralTensor& dense() const { return dense_; }

  /// G(x,y,x,y).
  double eval(const Vector& x, const Vector& y) const;
  double max_violation() const;

 private:
  int n_;
  int m_;
  GeneralTensor dense_;
};

double partial_symmetry_violation(const GeneralTensor& g);

// ---------------------------------------------------------------------------
// Construction and evaluation

/// Average of t over each permutation class. Requires cubic dims.
SuperSymmetricTensor symmetrize(const GeneralTensor& t);

/// lambda * a (x) a (x) ... (x) a with m factors.
SuperSymmetricTensor rank_one(double lambda, const Vector& a, int m);

/// Sum over the full index space of f[idx] * prod_k xs[k][idx_k].
double eval_multilinear(const GeneralTensor& f, std::span<const Vector> xs);
double eval_multilinear(const SuperSymmetricTensor& f, std::span<const Vector> xs);

/// Contraction of f with every xs[k] except k = mode; xs[mode] is ignored.
/// The result is the gradient of the multilinear form in block `mode`.
Vector contract_except(const GeneralTensor& f, std::span<const Vector> xs, int mode);
/// f(x, ..., x).
double eval_homogeneous(const SuperSymmetricTensor& f, const Vector& x);

/// f(x, ..., x, .) : the partial contraction leaving the last mode free.
/// The gradient of eval_homogeneous is order() times this vector.
Vector contract_all_but_one(const SuperSymmetricTensor& f, const Vector& x);

/// Full-space inner product.
double inner(const SuperSymmetricTensor& f, const SuperSymmetricTensor& g);

/// Symmetrization of a dense array with i.i.d. N(0,1) entries, drawn from
/// std::mt19937_64 seeded with `seed`.
SuperSymmetricTensor random_gaussian(int n, int m, std::uint64_t seed);
/// Same with i.i.d. uniform(lo, hi) entries.
SuperSymmetricTensor random_uniform(int n, int m, std::uint64_t seed, double lo = -1.0, double hi = 1.0);

GeneralTensor random_general(std::vector<int> dims, std::uint64_t seed);
PartialSymmetricTensor random_partial_symmetric(int n, int m, std::uint64_t seed);

/// Tensor whose homogeneous form is the polynomial sum_t coeff_t x^{sig_t}.
/// Each signature must have total degree m; repeated signatures accumulate.
SuperSymmetricTensor from_polynomial(int n, int m, std::span<const std::pair<Signature, double>> terms);

}  // namespace tpca
