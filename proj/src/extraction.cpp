#include "tpca/extraction.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "tpca/extensions.hpp"

namespace tpca {

Vector recover_vector(const Vector& y, int n, int d) {
  if (d < 1) throw DomainError("recover_vector needs d >= 1");
  const GeneralTensor t = vect_inv(y, n, d);
  Vector x;
  if (d == 1) {
    x = y;
  } else {
    const Eigen::MatrixXd A = mode_n_unfold(t, 0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A * A.transpose());
    x = es.eigenvectors().col(n - 1);
  }
  const double nrm = x.norm();
  if (nrm == 0.0) throw DegenerateError("cannot recover a vector from zero");
  return x / nrm;
}

Vector oriented(const SuperSymmetricTensor& F, Vector x) {
  const double plus = eval_homogeneous(F, x);
  const double minus = eval_homogeneous(F, -x);
  if (minus > plus) return -x;
  if (minus == plus || F.order() % 2 == 0) {
    Eigen::Index arg;
    x.cwiseAbs().maxCoeff(&arg);
    if (x[arg] < 0) x = -x;
  }
  return x;
}

Extraction extract(const SymmetricMatrix& X, const SuperSymmetricTensor& F, double rank_tol) {
  if (F.order() % 2 != 0) throw DomainError("extract needs an even-order tensor");
  const int n = F.dim();
  const int d = F.order() / 2;
  if (X.rows() != X.cols() || static_cast<std::size_t>(X.rows()) != int_pow(n, d))
    throw ShapeError("matrix size does not match the tensor");
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if (std::abs(X.trace() - 1.0) > 1e-3 || (X - X.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw DomainError("extract needs a symmetric trace-one matrix");

  const auto diag = rank_one_ratio(X);
  if (!(diag.ratio <= rank_tol) || diag.eigenvalue <= 0) return NotRankOne{diag.ratio, diag.spectrum};
  PrincipalComponent pc;
  pc.x_star = oriented(F, recover_vector(diag.eigenvector, n, d));
  pc.lambda_star = eval_homogeneous(F, pc.x_star);
  pc.certified = true;
  return pc;
}

BlockAscent block_ascent(const GeneralTensor& T, std::vector<Vector> blocks, double tol, int max_sweeps) {
  BlockAscent out;
  out.value = eval_multilinear(T, blocks);
  for (int s = 1; s <= max_sweeps; ++s) {
    const double before = out.value;
    for (int k = 0; k < T.order(); ++k) {
      const Vector g = contract_except(T, blocks, k);
      const double nrm = g.norm();
      if (nrm > 0) blocks[static_cast<std::size_t>(k)] = g / nrm;
    }
    out.value = eval_multilinear(T, blocks);
    out.trace.push_back(out.value);
    out.sweeps = s;
    if (out.value - before <= tol * std::max(1.0, std::abs(out.value))) {
      out.converged = true;
      break;
    }
  }
  out.blocks = std::move(blocks);
  return out;
}

namespace {

Vector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = g(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

double homogeneous_dense(const GeneralTensor& T, const Vector& x) {
  std::vector<Vector> xs(static_cast<std::size_t>(T.order()), x);
  return eval_multilinear(T, xs);
}

}  // namespace

MbiResult mbi_refine(const SymmetricMatrix& Xstar, int n, int d, std::span<const Vector> starts, const MbiOptions& opt) {
  const GeneralTensor T = matr_inv(Xstar, n, d);
  std::mt19937_64 rng(opt.seed);
  MbiResult res;

  // Probe for co-quadratic PSD: T(x1,...,xd,x1,...,xd) >= 0.
  const double scale = std::max(1.0, Xstar.cwiseAbs().maxCoeff());
  for (int p = 0; p < 100 && res.coquadratic_psd; ++p) {
    std::vector<Vector> xs(static_cast<std::size_t>(2 * d));
    for (int k = 0; k < d; ++k) {
      xs[static_cast<std::size_t>(k)] = random_unit(n, rng);
      xs[static_cast<std::size_t>(k + d)] = xs[static_cast<std::size_t>(k)];
    }
    if (eval_multilinear(T, xs) < -1e-6 * scale) res.coquadratic_psd = false;
  }

  std::vector<Vector> inits(starts.begin(), starts.end());
  for (int r = 0; r < opt.restarts; ++r) inits.push_back(random_unit(n, rng));
  if (inits.empty()) throw DomainError("mbi_refine needs at least one start");

  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& x0 : inits) {
    if (x0.size() != n) throw ShapeError("start vector has the wrong length");
    BlockAscent run = block_ascent(T, std::vector<Vector>(static_cast<std::size_t>(2 * d), x0.normalized()), opt.tol,
                                   opt.max_sweeps);
    for (const Vector& b : run.blocks) {
      const double v = homogeneous_dense(T, b);
      if (v > best) {
        best = v;
        res.x = b;
        res.value = run.value;
        res.sweeps = run.sweeps;
        res.converged = run.converged;
        res.trace = run.trace;
      }
    }
  }
  return res;
}

SuperSymmetricTensor deflate(const SuperSymmetricTensor& F, const PrincipalComponent& pc) {
  SuperSymmetricTensor out = F;
  out -= rank_one(pc.lambda_star, pc.x_star, F.order());
  return out;
}

Vector polish_homogeneous(const SuperSymmetricTensor& F, Vector x, int max_iter, double tol) {
  const int m = F.order();
  const double shift = (m - 1) * F.norm();
  x.normalize();
  double val = eval_homogeneous(F, x);
  for (int it = 0; it < max_iter; ++it) {
    Vector g = contract_all_but_one(F, x) + shift * x;
    const double nrm = g.norm();
    if (nrm == 0.0) break;
    g /= nrm;
    const double next = eval_homogeneous(F, g);
    if (next < val) break;
    const bool done = next - val <= tol * std::max(1.0, std::abs(val));
    x = g;
    val = next;
    if (done) break;
  }
  return x;
}

LeadingPc solve_leading_pc(const SuperSymmetricTensor& F, Method method, const SolverConfig& cfg) {
  if (F.order() % 2 != 0) return solve_odd_order(F, method, cfg);
  LeadingPc out;
  out.report = solve(F, method, cfg);
  const SymmetricMatrix& sol = out.report.Y.isZero(0.0) ? out.report.X : out.report.Y;
  Extraction ex = extract(sol, F, cfg.rank_tol);
  if (auto* pc = std::get_if<PrincipalComponent>(&ex)) {
    out.pc = *pc;
    return out;
  }

  // Not rank one: block ascent on the matrix solution, then a local polish
  // on F itself; the best candidate by F's value wins.
  out.used_fallback = true;
  const int n = F.dim();
  const int d = F.order() / 2;
  MbiOptions opt;
  opt.seed = cfg.seed;
  const Vector starts[] = {out.report.extracted_x};
  const MbiResult mbi = mbi_refine(sol, n, d, starts, opt);
  Vector best = oriented(F, polish_homogeneous(F, mbi.x));
  const Vector alt = oriented(F, polish_homogeneous(F, out.report.extracted_x));
  if (eval_homogeneous(F, alt) > eval_homogeneous(F, best)) best = alt;
  out.pc.x_star = best;
  out.pc.lambda_star = eval_homogeneous(F, best);
  out.pc.certified = false;
  return out;
}

}  // namespace tpca
