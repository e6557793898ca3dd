#pragma once

#include <variant>
#include <vector>

#include "tpca/admm.hpp"

namespace tpca {

struct PrincipalComponent {
  double lambda_star = 0.0;  ///< F(x*, ..., x*)
  Vector x_star;             ///< unit vector
  bool certified = false;    ///< the matrix solution was rank one
};

/// Structured "not rank one" outcome of extract().
struct NotRankOne {
  double ratio = 0.0;
  Vector spectrum;  ///< eigenvalues, descending
};

using Extraction = std::variant<PrincipalComponent, NotRankOne>;

/// Unit x with y ~ x (x) ... (x) x (d factors), y of length n^d: the dominant
/// left singular vector of the mode-1 unfolding of vect^{-1}(y).
Vector recover_vector(const Vector& y, int n, int d);

/// Picks the sign of x maximizing F(x,...,x); on a tie the largest-magnitude
/// component is made positive.
Vector oriented(const SuperSymmetricTensor& F, Vector x);

/// Rank-one certificate and vector recovery from a matrix solution X of
/// size n^d for the order-2d tensor F. Throws DomainError if X is not a
/// symmetric trace-one matrix (to 1e-3).
Extraction extract(const SymmetricMatrix& X, const SuperSymmetricTensor& F, double rank_tol);

struct MbiOptions {
  double tol = 1e-12;    ///< relative improvement per sweep
  int max_sweeps = 20000;
  int restarts = 5;      ///< random unit starts added to the given ones
  std::uint64_t seed = 0;
};

struct MbiResult {
  Vector x;            ///< best block, unit
  double value = 0.0;  ///< multilinear value at the limit blocks
  int sweeps = 0;
  bool converged = false;
  bool coquadratic_psd = true;  ///< probe check on the input
  std::vector<double> trace;    ///< value after each sweep of the winning run
};

/// Cyclic block ascent on the multilinear form T(x^1, ..., x^K): each block
/// is replaced by its normalized partial gradient. Returns the final blocks.
struct BlockAscent {
  std::vector<Vector> blocks;
  double value = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> trace;
};
BlockAscent block_ascent(const GeneralTensor& T, std::vector<Vector> blocks, double tol, int max_sweeps);

/// Rank-one post-processing of a (co-quadratic PSD) matrix solution: block
/// ascent on the order-2d tensor matr^{-1}(Xstar) from each start (all blocks
/// equal to it) plus `restarts` random unit starts. The returned x is the
/// limit block with the largest homogeneous value on that tensor.
MbiResult mbi_refine(const SymmetricMatrix& Xstar, int n, int d, std::span<const Vector> starts,
                     const MbiOptions& opt = {});

/// F - lambda* x* (x) ... (x) x*.
SuperSymmetricTensor deflate(const SuperSymmetricTensor& F, const PrincipalComponent& pc);

struct LeadingPc {
  PrincipalComponent pc;
  SolveReport report;
  bool used_fallback = false;
};

/// End-to-end: even order goes to the matrix model directly, odd order
/// through the squared even-order reduction. When the solution is not rank
/// one the result comes from mbi_refine. lambda_star = F(x*, ..., x*).
LeadingPc solve_leading_pc(const SuperSymmetricTensor& F, Method method, const SolverConfig& cfg = {});

/// Local ascent of x -> F(x,...,x) on the sphere (shifted power iteration);
/// used to polish fallback points.
Vector polish_homogeneous(const SuperSymmetricTensor& F, Vector x, int max_iter = 5000, double tol = 1e-14);

}  // namespace tpca
