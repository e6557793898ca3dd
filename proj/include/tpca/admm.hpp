#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tpca/projection.hpp"

namespace tpca {

enum class Method { nnp, sdp };
enum class Termination { converged, iter_cap };

std::string_view to_string(Method m);
std::string_view to_string(Termination t);
Method parse_method(std::string_view s);

struct SolverConfig {
  double rho = 10.0;  ///< nuclear-norm penalty
  double mu = 0.5;    ///< ADMM penalty parameter
  double tol = 1e-6;  ///< bound on rel. change of X plus ||X - Y||_F
  int max_iter = 50000;
  double rank_tol = 1e-6;  ///< sigma_2/sigma_1 bound for a rank-one certificate
  std::uint64_t seed = 0;  ///< used by randomized post-processing only

  /// Throws DomainError on non-positive parameters or tol >= 1.
  void validate() const;
};

struct SolveReport {
  Method method = Method::sdp;
  double objective = 0.0;       ///< tr(F X)
  double nuclear_norm = 0.0;    ///< ||X||_*
  int iterations = 0;
  double primal_residual = 0.0;  ///< ||X - Y||_F at termination
  double rel_change = 0.0;       ///< ||X^k - X^{k-1}||_F / ||X^{k-1}||_F
  double rank_one_ratio = 0.0;   ///< sigma_2/sigma_1 of the low-rank iterate Y
  double neg_eig_mass = 0.0;     ///< |sum of negative eigenvalues of X|
  double extracted_lambda = 0.0;
  Vector extracted_x;
  bool certified = false;  ///< rank_one_ratio <= rank_tol
  Termination termination = Termination::iter_cap;

  /// tr(FX) - rho ||X||_* and max_i F_{i...i} - rho (penalty model only):
  /// the first must dominate the second at an optimum.
  double penalized_objective = 0.0;
  double diagonal_bound = 0.0;

  SymmetricMatrix X;  ///< iterate in the affine set C
  SymmetricMatrix Y;  ///< iterate in the cone / shrinkage domain
  std::vector<double> residual_history;  ///< stopping quantity per iteration
};

/// Raw ADMM state for a generic affine set; used by the super-symmetric and
/// bi-quadratic drivers.
struct AdmmRun {
  SymmetricMatrix X;
  SymmetricMatrix Y;
  SymmetricMatrix Lambda;
  int iterations = 0;
  double rel_change = 0.0;
  double primal_residual = 0.0;
  Termination termination = Termination::iter_cap;
  std::vector<double> history;
};

/// Iterates
///   X <- P_C(Y + mu Lambda)
///   Y <- shrink(X - mu(Lambda - F), mu rho)   (nnp)
///   Y <- P_psd(X + mu F - mu Lambda)          (sdp)
///   Lambda <- Lambda - (X - Y)/mu
/// from Y = Y0, X = Y0, Lambda = 0 until the stopping rule holds.
AdmmRun run_admm(const SymmetricMatrix& F, const TraceOneProjector& proj, const SymmetricMatrix& Y0, Method method,
                 const SolverConfig& cfg);

/// max tr(FX) - rho ||X||_* over C.
SolveReport solve_nnp(const SuperSymmetricTensor& F, const SolverConfig& cfg = {});
/// max tr(FX) over C intersected with the PSD cone.
SolveReport solve_sdp(const SuperSymmetricTensor& F, const SolverConfig& cfg = {});
SolveReport solve(const SuperSymmetricTensor& F, Method method, const SolverConfig& cfg = {});

/// |sum of the negative eigenvalues of X|.
double neg_eig_mass(const SymmetricMatrix& X);
double nuclear_norm(const SymmetricMatrix& X);

}  // namespace tpca
