#include "tpca/admm.hpp"

#include <cassert>
#include <cmath>
#include <span>
#include <string>

#include "tpca/extraction.hpp"
#include "tpca/kernels.hpp"

namespace tpca {

std::string_view to_string(Method m) { return m == Method::nnp ? "nnp" : "sdp"; }
std::string_view to_string(Termination t) { return t == Termination::converged ? "converged" : "iter_cap"; }

Method parse_method(std::string_view s) {
  if (s == "nnp") return Method::nnp;
  if (s == "sdp") return Method::sdp;
  throw DomainError("unknown method '" + std::string(s) + "' (expected nnp or sdp)");
}

void SolverConfig::validate() const {
  if (!(rho > 0) || !(mu > 0) || !(tol > 0) || !(rank_tol > 0) || max_iter < 1)
    throw DomainError("solver parameters must be positive");
  if (!(tol < 1)) throw DomainError("tolerance must be below 1");
}

namespace {

std::span<double> flat(SymmetricMatrix& M) { return {M.data(), static_cast<std::size_t>(M.size())}; }
std::span<const double> flat(const SymmetricMatrix& M) { return {M.data(), static_cast<std::size_t>(M.size())}; }

}  // namespace

AdmmRun run_admm(const SymmetricMatrix& F, const TraceOneProjector& proj, const SymmetricMatrix& Y0, Method method,
                 const SolverConfig& cfg) {
  cfg.validate();
  const auto N = static_cast<Eigen::Index>(proj.size());
  if (F.rows() != N || F.cols() != N || Y0.rows() != N || Y0.cols() != N)
    throw ShapeError("ADMM operands have inconsistent sizes");

  const double mu = cfg.mu;
  AdmmRun run;
  run.Y = Y0;
  run.X = Y0;
  run.Lambda = SymmetricMatrix::Zero(N, N);
  SymmetricMatrix Z(N, N);
  SymmetricMatrix Xprev(N, N);

  for (int k = 1; k <= cfg.max_iter; ++k) {
    std::swap(Xprev, run.X);
    kernels::axpby(flat(Z), 1.0, flat(run.Y), mu, flat(run.Lambda));
    proj.project(Z, run.X);
    assert(proj.class_violation(run.X) <= 1e-10);

    // X - mu(Lambda - F) and X + mu F - mu Lambda are the same matrix.
    kernels::axpbypcz(flat(Z), 1.0, flat(run.X), -mu, flat(run.Lambda), mu, flat(F));
    run.Y = method == Method::nnp ? shrink_nuclear(Z, mu * cfg.rho) : project_psd(Z);
    kernels::axpbypcz(flat(run.Lambda), 1.0, flat(run.Lambda), -1.0 / mu, flat(run.X), 1.0 / mu, flat(run.Y));

    const double prev_norm = std::sqrt(kernels::sq_dist(flat(Xprev), std::vector<double>(Xprev.size(), 0.0)));
    const double change = std::sqrt(kernels::sq_dist(flat(run.X), flat(Xprev)));
    run.rel_change = prev_norm > 0 ? change / prev_norm : change;
    run.primal_residual = std::sqrt(kernels::sq_dist(flat(run.X), flat(run.Y)));
    run.iterations = k;
    run.history.push_back(run.rel_change + run.primal_residual);
    if (run.rel_change + run.primal_residual <= cfg.tol) {
      run.termination = Termination::converged;
      break;
    }
  }
  return run;
}

double neg_eig_mass(const SymmetricMatrix& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] < 0) s -= es.eigenvalues()[i];
  return s;
}

double nuclear_norm(const SymmetricMatrix& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

SolveReport solve(const SuperSymmetricTensor& F, Method method, const SolverConfig& cfg) {
  if (F.order() % 2 != 0) throw DomainError("the matrix models need an even-order tensor");
  if (F.is_zero()) throw DegenerateError("cannot solve for the zero tensor");
  cfg.validate();
  const int n = F.dim();
  const int d = F.order() / 2;

  // Start from the best coordinate rank-one point e_i^{(x)2d}.
  int best = 0;
  Index diag(static_cast<std::size_t>(F.order()), 0);
  double best_val = F(diag);
  for (int i = 1; i < n; ++i) {
    std::fill(diag.begin(), diag.end(), i);
    if (F(diag) > best_val) {
      best_val = F(diag);
      best = i;
    }
  }
  const SymmetricMatrix Fm = matr(F);
  const SymmetricMatrix Y0 = matr(rank_one(1.0, Vector::Unit(n, best), F.order()));
  const auto proj = TraceOneProjector::super_symmetric(n, d);

  AdmmRun run = run_admm(Fm, *proj, Y0, method, cfg);

  SolveReport rep;
  rep.method = method;
  rep.iterations = run.iterations;
  rep.rel_change = run.rel_change;
  rep.primal_residual = run.primal_residual;
  rep.termination = run.termination;
  rep.residual_history = std::move(run.history);
  rep.objective = kernels::dot(flat(Fm), flat(run.X));
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(run.X, Eigen::EigenvaluesOnly);
    rep.nuclear_norm = es.eigenvalues().cwiseAbs().sum();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] < 0) rep.neg_eig_mass -= es.eigenvalues()[i];
  }
  rep.penalized_objective = rep.objective - cfg.rho * rep.nuclear_norm;
  rep.diagonal_bound = best_val - cfg.rho;

  const auto diag_y = rank_one_ratio(run.Y.isZero(0.0) ? run.X : run.Y);
  rep.rank_one_ratio = diag_y.ratio;
  rep.certified = diag_y.ratio <= cfg.rank_tol && diag_y.eigenvalue > 0;
  rep.extracted_x = oriented(F, recover_vector(diag_y.eigenvector, n, d));
  rep.extracted_lambda = eval_homogeneous(F, rep.extracted_x);
  rep.X = std::move(run.X);
  rep.Y = std::move(run.Y);
  return rep;
}

SolveReport solve_nnp(const SuperSymmetricTensor& F, const SolverConfig& cfg) { return solve(F, Method::nnp, cfg); }
SolveReport solve_sdp(const SuperSymmetricTensor& F, const SolverConfig& cfg) { return solve(F, Method::sdp, cfg); }

}  // namespace tpca
