#pragma once

#include <cstdint>
#include <vector>

#include "tpca/tensor.hpp"
#include "tpca/matricize.hpp"

namespace tpca {

struct OracleResult {
  double value = 0.0;
  std::vector<Vector> argmax;  ///< one unit vector per block
  int grid_resolution = 0;
  bool polished = false;
};

/// Brute-force global maximum of F(x,...,x) on the unit sphere for n <= 3:
/// angular grid with `resolution` points per angle (0 picks 720 for n = 2,
/// 180 for n = 3), then projected gradient ascent from the best point.
/// Throws DomainError for n > 3.
OracleResult sphere_grid_max(const SuperSymmetricTensor& F, int resolution = 0);

/// Product-of-spheres grid for max G(x,y,x,y), n, m <= 3.
OracleResult product_grid_max(const PartialSymmetricTensor& G, int resolution = 0);

/// Product-of-circles grid for max F(x^1,...,x^K) with every n_i = 2,
/// followed by block ascent.
OracleResult circle_product_grid_max(const GeneralTensor& F, int resolution = 64);

/// Projection onto { tr X = 1, matr^{-1}(X) super-symmetric } by dense
/// equality-constrained least squares over all n^{2d} entries (n^d <= 100).
SymmetricMatrix kkt_project(const SymmetricMatrix& Z, int n, int d);

/// Best stationary value from `restarts` random starts. Even order: block
/// ascent on F(x,...,x) + 6 (x^T x)^d, value reported without the shift.
/// Odd order: shifted symmetric power iteration.
OracleResult multistart_local(const SuperSymmetricTensor& F, int restarts, std::uint64_t seed);

}  // namespace tpca
