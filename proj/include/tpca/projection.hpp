#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tpca/matricize.hpp"

namespace tpca {

/// alpha(k,d) = (d!/prod k_j!) / ((2d)!/prod (2k_j)!): the ratio between the
/// trace weight of the even-diagonal class with signature k and the size of
/// that class. Throws DomainError if k is not in K(n,d).
double alpha(std::span<const int> k, int d);

/// Euclidean projection onto an affine set of symmetric matrices of the form
///   { X : X constant on each entry class, sum_i X_ii = 1 }.
/// Entry classes come from a tensor symmetry (super-symmetry of matr^{-1}(X)
/// or partial symmetry of the rearranged bi-quadratic tensor). Because the
/// objective weights every matrix entry equally, the minimizer is the class
/// average Zhat plus a shift on classes that meet the diagonal:
///   X_c = Zhat_c + t * w_c / |c|,   t = (1 - sum_c w_c Zhat_c) / sum_c w_c^2/|c|,
/// with w_c the number of diagonal entries in class c.
class TraceOneProjector {
 public:
  /// C = { tr X = 1, matr^{-1}(X) super-symmetric } for N = n^d.
  static std::shared_ptr<const TraceOneProjector> super_symmetric(int n, int d);
  /// C = { tr X = 1, matr_partial^{-1}(X) partial-symmetric } for N = nm.
  static std::shared_ptr<const TraceOneProjector> partial_symmetric(int n, int m);

  std::size_t size() const { return N_; }
  std::size_t num_classes() const { return class_size_.size(); }

  /// Writes the projection of Z into X (which may alias nothing of Z).
  /// Returns the trace multiplier t; the super-symmetric multiplier lambda
  /// of the class-coordinate optimality conditions is 2t.
  double project(const SymmetricMatrix& Z, SymmetricMatrix& X) const;
  SymmetricMatrix project(const SymmetricMatrix& Z) const {
    SymmetricMatrix X;
    project(Z, X);
    return X;
  }

  /// Largest spread of X inside one class; zero for points of the set.
  double class_violation(const SymmetricMatrix& X) const;

  TraceOneProjector(std::size_t N, std::vector<std::uint32_t> class_of, std::size_t num_classes);

 private:
  std::size_t N_;
  std::vector<std::uint32_t> class_of_;
  std::vector<double> class_size_;
  std::vector<std::uint32_t> diag_classes_;
  std::vector<double> diag_weight_;
  double weight_norm_ = 0.0;  // sum_c w_c^2 / |c|
};

struct ProjectionResult {
  SymmetricMatrix X;
  double lambda = 0.0;
};

/// Projection onto C = { tr X = 1, matr^{-1}(X) super-symmetric }.
ProjectionResult project_C(const SymmetricMatrix& Z, int n, int d);

/// argmin_Y tau*||Y||_* + 0.5*||Y - M||_F^2 for symmetric M, computed from
/// the eigendecomposition (singular values are |eigenvalues|).
SymmetricMatrix shrink_nuclear(const SymmetricMatrix& M, double tau);

/// Nearest positive semidefinite matrix in Frobenius norm.
SymmetricMatrix project_psd(const SymmetricMatrix& M);

}  // namespace tpca
