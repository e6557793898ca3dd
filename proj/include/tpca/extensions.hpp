#pragma once

#include <vector>

#include "tpca/extraction.hpp"

namespace tpca {

/// Stacking of blocks of sizes n_1..n_K into one vector of length sum n_i.
class BlockEmbedding {
 public:
  explicit BlockEmbedding(std::vector<int> sizes);

  int num_blocks() const { return static_cast<int>(sizes_.size()); }
  int total_dim() const { return total_; }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<int>& offsets() const { return offsets_; }

  Vector stack(std::span<const Vector> blocks) const;
  std::vector<Vector> split(const Vector& y) const;

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int total_ = 0;
};

struct BiquadraticResult {
  double lambda = 0.0;  ///< G(x,y,x,y)
  Vector x;
  Vector y;
  bool certified = false;
  double rank_one_ratio = 0.0;
  double objective = 0.0;  ///< tr(matr_partial(G) X)
  int iterations = 0;
  Termination termination = Termination::iter_cap;
  bool used_fallback = false;
};

/// max G(x,y,x,y) over unit x, y via the PSD relaxation on
/// { tr X = 1, X partial-symmetric, X PSD }. Falls back to alternating
/// eigenvector ascent when the solution is not rank one.
BiquadraticResult solve_biquadratic(const PartialSymmetricTensor& G, const SolverConfig& cfg = {});

/// Alternating exact block maximization of G(x,y,x,y): x is the top
/// eigenvector of G(., y, ., y), then y of G(x, ., x, .).
BiquadraticResult alternating_biquadratic(const PartialSymmetricTensor& G, Vector x, Vector y, int max_iter = 10000,
                                          double tol = 1e-14);

/// G_{ijuv} = sum_k (F_ijk F_uvk + F_ivk F_ujk) / 2, so that
/// G(x,y,x,y) = ||F(x,y,.)||^2.
PartialSymmetricTensor trilinear_to_biquadratic(const GeneralTensor& F);

/// Zero-padded G(i1, i2, n1+i3, n2+i4) = F(i1,i2,i3,i4), averaged over the
/// partial-symmetry orbit. T((x1;x3),(x2;x4),(x1;x3),(x2;x4)) = F(x1,x2,x3,x4).
PartialSymmetricTensor quadrilinear_to_biquadratic(const GeneralTensor& F);

/// Super-symmetric tensor of dimension sum n_i with T(y,...,y) = F(x^1,...,x^2d)
/// for y the stacked blocks.
SuperSymmetricTensor multilinear_embed(const GeneralTensor& F);

/// Order-4d tensor G with G(x,...,x) = ||F(x,...,x,.)||^2 for F of order 2d+1.
SuperSymmetricTensor odd_to_even(const SuperSymmetricTensor& F);

struct MultilinearResult {
  double value = 0.0;          ///< F(x^1, ..., x^K)
  std::vector<Vector> blocks;  ///< unit vectors
  bool certified = false;
  bool used_fallback = false;
};

/// max F(x,y,z) over unit vectors.
MultilinearResult solve_trilinear(const GeneralTensor& F, const SolverConfig& cfg = {});
/// max F(x1,x2,x3,x4) over unit vectors, through the bi-quadratic relaxation.
MultilinearResult solve_quadrilinear(const GeneralTensor& F, const SolverConfig& cfg = {});
/// max F(x^1,...,x^2d) over unit vectors, through the super-symmetric embedding.
MultilinearResult solve_multilinear(const GeneralTensor& F, Method method = Method::sdp, const SolverConfig& cfg = {});

/// Leading PC of an odd-order tensor from its squared even-order form.
LeadingPc solve_odd_order(const SuperSymmetricTensor& F, Method method, const SolverConfig& cfg = {});

}  // namespace tpca
