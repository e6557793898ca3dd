#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "tpca/tensor.hpp"

namespace tpca {

/// Dense square matrix that is symmetric up to round-off. Used for the
/// matricized variable of the convex models.
using SymmetricMatrix = Eigen::MatrixXd;

/// n^d, checked against overflow.
std::size_t int_pow(int n, int d);

/// Entry-to-class map for the square matricization of an order-2d
/// super-symmetric tensor: class_of[r*N + c] is the canonical class of
/// matrix entry (r, c).
class MatricizationMap {
 public:
  MatricizationMap(int n, int d);

  int dim() const { return n_; }
  int half_order() const { return d_; }
  std::size_t size() const { return N_; }
  const SymmetricLayout& layout() const { return *layout_; }
  std::span<const std::uint32_t> class_of() const { return class_of_; }

 private:
  int n_;
  int d_;
  std::size_t N_;
  std::shared_ptr<const SymmetricLayout> layout_;
  std::vector<std::uint32_t> class_of_;
};

std::shared_ptr<const MatricizationMap> matricization_map(int n, int d);

/// Square matricization of an even-order super-symmetric tensor: rows are
/// indexed by the first d tensor indices, columns by the last d, each in
/// row-major order. Throws DomainError for odd order.
SymmetricMatrix matr(const SuperSymmetricTensor& f);
/// Same reindexing for a dense cubic tensor of even order.
Eigen::MatrixXd matr(const GeneralTensor& f);

/// Inverse reindexing of matr: an N x N matrix with N = n^d back to a dense
/// order-2d tensor. No symmetry is imposed. Throws ShapeError if N != n^d.
GeneralTensor matr_inv(const Eigen::MatrixXd& X, int n, int d);

/// Row-major flattening of a cubic tensor.
Vector vect(const GeneralTensor& f);
/// Inverse of vect; throws ShapeError if the length is not n^m.
GeneralTensor vect_inv(const Vector& v, int n, int m);

struct SymmetryCheck {
  bool symmetric = false;
  double max_violation = 0.0;
};

/// Largest spread of values inside any permutation class of t.
SymmetryCheck is_super_symmetric(const GeneralTensor& t, double tol);

struct RankOneDiagnostic {
  double ratio = 0.0;       ///< sigma_2 / sigma_1
  double eigenvalue = 0.0;  ///< eigenvalue of largest magnitude
  Vector eigenvector;       ///< unit, largest-magnitude component positive
  Vector spectrum;          ///< eigenvalues, descending
};

/// sigma_2/sigma_1 of a symmetric matrix and its dominant eigenpair.
/// Throws DegenerateError for the zero matrix.
RankOneDiagnostic rank_one_ratio(const SymmetricMatrix& X);

/// Square rearrangement of a partial-symmetric tensor: entry ((i,j),(k,l))
/// at row i*m + j, column k*m + l.
SymmetricMatrix matr_partial(const PartialSymmetricTensor& g);
/// Inverse of matr_partial as a dense n x m x n x m tensor.
GeneralTensor matr_partial_inv(const Eigen::MatrixXd& X, int n, int m);

/// Mode-k unfolding (k 0-based): row = index k, column = remaining indices
/// with the earliest mode varying fastest.
Eigen::MatrixXd mode_n_unfold(const GeneralTensor& t, int mode);

}  // namespace tpca
