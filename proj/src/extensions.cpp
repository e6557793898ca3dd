#include "tpca/extensions.hpp"

#include <cmath>
#include <map>
#include <random>

#include "tpca/kernels.hpp"

namespace tpca {

BlockEmbedding::BlockEmbedding(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw DomainError("block embedding needs at least one block");
  for (int s : sizes_) {
    if (s < 1) throw DomainError("block sizes must be positive");
    offsets_.push_back(total_);
    total_ += s;
  }
}

Vector BlockEmbedding::stack(std::span<const Vector> blocks) const {
  if (blocks.size() != sizes_.size()) throw ShapeError("wrong number of blocks");
  Vector y(total_);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].size() != sizes_[b]) throw ShapeError("block has the wrong length");
    y.segment(offsets_[b], sizes_[b]) = blocks[b];
  }
  return y;
}

std::vector<Vector> BlockEmbedding::split(const Vector& y) const {
  if (y.size() != total_) throw ShapeError("stacked vector has the wrong length");
  std::vector<Vector> out;
  for (std::size_t b = 0; b < sizes_.size(); ++b) out.emplace_back(y.segment(offsets_[b], sizes_[b]));
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

Vector top_eigenvector(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
  return es.eigenvectors().col(M.rows() - 1);
}

// G(., y, ., y) and G(x, ., x, .).
Eigen::MatrixXd fold_second(const PartialSymmetricTensor& G, const Vector& y) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(G.n(), G.n());
  for (int i = 0; i < G.n(); ++i)
    for (int j = 0; j < G.m(); ++j)
      for (int k = 0; k < G.n(); ++k)
        for (int l = 0; l < G.m(); ++l) M(i, k) += G(i, j, k, l) * y[j] * y[l];
  return M;
}

Eigen::MatrixXd fold_first(const PartialSymmetricTensor& G, const Vector& x) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(G.m(), G.m());
  for (int i = 0; i < G.n(); ++i)
    for (int j = 0; j < G.m(); ++j)
      for (int k = 0; k < G.n(); ++k)
        for (int l = 0; l < G.m(); ++l) M(j, l) += G(i, j, k, l) * x[i] * x[k];
  return M;
}

Vector normalized_or_throw(const Vector& v) {
  const double nrm = v.norm();
  if (!(nrm > 1e-12)) throw DegenerateError("a recovered block is zero");
  return v / nrm;
}

// Block ascent on F from the given blocks; keeps the value non-negative by
// flipping the first block.
MultilinearResult finish_multilinear(const GeneralTensor& F, std::vector<Vector> blocks, bool certified,
                                     bool fallback) {
  if (eval_multilinear(F, blocks) < 0) blocks.front() = -blocks.front();
  BlockAscent run = block_ascent(F, std::move(blocks), 1e-15, 10000);
  MultilinearResult out;
  out.blocks = std::move(run.blocks);
  out.value = eval_multilinear(F, out.blocks);
  out.certified = certified;
  out.used_fallback = fallback;
  return out;
}

}  // namespace

BiquadraticResult alternating_biquadratic(const PartialSymmetricTensor& G, Vector x, Vector y, int max_iter,
                                          double tol) {
  x.normalize();
  y.normalize();
  double val = G.eval(x, y);
  for (int it = 0; it < max_iter; ++it) {
    const Vector nx = top_eigenvector(fold_second(G, y));
    const Vector ny = top_eigenvector(fold_first(G, nx));
    const double next = G.eval(nx, ny);
    if (next < val) break;
    const bool done = next - val <= tol * std::max(1.0, std::abs(val));
    x = nx;
    y = ny;
    val = next;
    if (done) break;
  }
  BiquadraticResult out;
  out.x = x;
  out.y = y;
  out.lambda = val;
  return out;
}

BiquadraticResult solve_biquadratic(const PartialSymmetricTensor& G, const SolverConfig& cfg) {
  cfg.validate();
  double scale = 1.0;
  for (double v : G.dense().values()) scale = std::max(scale, std::abs(v));
  if (G.max_violation() > 1e-12 * scale) throw DomainError("input is not partial-symmetric");
  const int n = G.n();
  const int m = G.m();
  const SymmetricMatrix Fm = matr_partial(G);
  if (Fm.isZero(0.0)) throw DegenerateError("cannot solve for the zero tensor");

  int bi = 0, bj = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (G(i, j, i, j) > G(bi, bj, bi, bj)) {
        bi = i;
        bj = j;
      }
  const Eigen::Index N = static_cast<Eigen::Index>(n) * m;
  SymmetricMatrix Y0 = SymmetricMatrix::Zero(N, N);
  Y0(bi * m + bj, bi * m + bj) = 1.0;

  const auto proj = TraceOneProjector::partial_symmetric(n, m);
  AdmmRun run = run_admm(Fm, *proj, Y0, Method::sdp, cfg);

  const auto diag = rank_one_ratio(run.Y.isZero(0.0) ? run.X : run.Y);
  const Eigen::MatrixXd A =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(diag.eigenvector.data(), n, m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);

  BiquadraticResult out;
  out.x = svd.matrixU().col(0);
  out.y = svd.matrixV().col(0);
  out.lambda = G.eval(out.x, out.y);
  out.rank_one_ratio = diag.ratio;
  out.certified = diag.ratio <= cfg.rank_tol && diag.eigenvalue > 0;
  out.objective = kernels::dot(std::span<const double>(Fm.data(), static_cast<std::size_t>(Fm.size())),
                               std::span<const double>(run.X.data(), static_cast<std::size_t>(run.X.size())));
  out.iterations = run.iterations;
  out.termination = run.termination;
  if (out.certified) return out;

  out.used_fallback = true;
  std::mt19937_64 rng(cfg.seed);
  BiquadraticResult best = alternating_biquadratic(G, out.x, out.y);
  for (int r = 0; r < 5; ++r) {
    BiquadraticResult cand = alternating_biquadratic(G, random_unit(n, rng), random_unit(m, rng));
    if (cand.lambda > best.lambda) best = std::move(cand);
  }
  out.x = best.x;
  out.y = best.y;
  out.lambda = best.lambda;
  return out;
}

PartialSymmetricTensor trilinear_to_biquadratic(const GeneralTensor& F) {
  if (F.order() != 3) throw DomainError("trilinear reduction needs an order-3 tensor");
  const int n = F.dims()[0], m = F.dims()[1], l = F.dims()[2];
  GeneralTensor g({n, m, n, m});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < m; ++v) {
          double s = 0.0;
          for (int k = 0; k < l; ++k) s += F({i, j, k}) * F({u, v, k}) + F({i, v, k}) * F({u, j, k});
          g({i, j, u, v}) = 0.5 * s;
        }
  return PartialSymmetricTensor::from_dense(g);
}

PartialSymmetricTensor quadrilinear_to_biquadratic(const GeneralTensor& F) {
  if (F.order() != 4) throw DomainError("quadrilinear reduction needs an order-4 tensor");
  const auto& n = F.dims();
  GeneralTensor g({n[0] + n[2], n[1] + n[3], n[0] + n[2], n[1] + n[3]});
  Index idx(4);
  for (std::size_t flat = 0; flat < F.size(); ++flat) {
    F.unravel(flat, idx);
    g({idx[0], idx[1], n[0] + idx[2], n[1] + idx[3]}) = F.values()[flat];
  }
  return PartialSymmetricTensor::symmetrize(g);
}

SuperSymmetricTensor multilinear_embed(const GeneralTensor& F) {
  if (F.order() < 2 || F.order() % 2 != 0) throw DomainError("multilinear embedding needs an even-order tensor");
  const BlockEmbedding emb(F.dims());
  SuperSymmetricTensor T(emb.total_dim(), F.order());
  // Shifted indices are strictly increasing, so every entry of F owns its
  // own class of size (2d)!.
  const double share = 1.0 / static_cast<double>(factorial(F.order()));
  Index idx(static_cast<std::size_t>(F.order()));
  for (std::size_t flat = 0; flat < F.size(); ++flat) {
    F.unravel(flat, idx);
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] += emb.offsets()[k];
    T.set(idx, F.values()[flat] * share);
  }
  return T;
}

SuperSymmetricTensor odd_to_even(const SuperSymmetricTensor& F) {
  if (F.order() % 2 == 0) throw DomainError("odd_to_even needs an odd-order tensor");
  const int n = F.dim();
  const int half = F.order() - 1;
  const auto layout = symmetric_layout(n, half);
  const auto mult = layout->multiplicity();

  // F(x,...,x,e_k) as a polynomial of degree 2d, then squared and summed.
  std::map<Signature, double> square;
  Index idx(static_cast<std::size_t>(F.order()));
  std::vector<double> coeff(layout->size());
  std::vector<Signature> sigs;
  for (std::size_t c = 0; c < layout->size(); ++c) sigs.push_back(signature_of(layout->tuple(c), n));
  for (int k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < layout->size(); ++c) {
      const auto t = layout->tuple(c);
      std::copy(t.begin(), t.end(), idx.begin());
      idx.back() = k;
      coeff[c] = F(idx) * mult[c];
    }
    for (std::size_t a = 0; a < coeff.size(); ++a) {
      if (coeff[a] == 0.0) continue;
      for (std::size_t b = 0; b < coeff.size(); ++b) {
        if (coeff[b] == 0.0) continue;
        Signature s = sigs[a];
        for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] += sigs[b][static_cast<std::size_t>(j)];
        square[s] += coeff[a] * coeff[b];
      }
    }
  }
  std::vector<std::pair<Signature, double>> terms(square.begin(), square.end());
  return from_polynomial(n, 2 * half, terms);
}

MultilinearResult solve_trilinear(const GeneralTensor& F, const SolverConfig& cfg) {
  const PartialSymmetricTensor G = trilinear_to_biquadratic(F);
  const BiquadraticResult bq = solve_biquadratic(G, cfg);
  const Vector xy[] = {bq.x, bq.y, Vector::Zero(F.dims()[2])};
  const Vector z = contract_except(F, xy, 2);
  std::vector<Vector> blocks{bq.x, bq.y, normalized_or_throw(z)};
  return finish_multilinear(F, std::move(blocks), bq.certified, bq.used_fallback);
}

MultilinearResult solve_quadrilinear(const GeneralTensor& F, const SolverConfig& cfg) {
  const PartialSymmetricTensor T = quadrilinear_to_biquadratic(F);
  const BiquadraticResult bq = solve_biquadratic(T, cfg);
  const auto& n = F.dims();
  std::vector<Vector> blocks{normalized_or_throw(bq.x.head(n[0])), normalized_or_throw(bq.y.head(n[1])),
                             normalized_or_throw(bq.x.tail(n[2])), normalized_or_throw(bq.y.tail(n[3]))};
  return finish_multilinear(F, std::move(blocks), bq.certified, bq.used_fallback);
}

MultilinearResult solve_multilinear(const GeneralTensor& F, Method method, const SolverConfig& cfg) {
  const SuperSymmetricTensor T = multilinear_embed(F);
  const LeadingPc r = solve_leading_pc(T, method, cfg);
  const BlockEmbedding emb(F.dims());
  std::vector<Vector> blocks;
  for (const Vector& b : emb.split(r.pc.x_star)) blocks.push_back(normalized_or_throw(b));
  return finish_multilinear(F, std::move(blocks), r.pc.certified, r.used_fallback);
}

LeadingPc solve_odd_order(const SuperSymmetricTensor& F, Method method, const SolverConfig& cfg) {
  if (F.order() % 2 == 0) throw DomainError("solve_odd_order needs an odd-order tensor");
  if (F.is_zero()) throw DegenerateError("cannot solve for the zero tensor");
  LeadingPc out = solve_leading_pc(odd_to_even(F), method, cfg);
  Vector x = out.pc.x_star;
  if (out.used_fallback) x = polish_homogeneous(F, x);
  if (eval_homogeneous(F, x) < 0) x = -x;
  out.pc.x_star = x;
  out.pc.lambda_star = eval_homogeneous(F, x);
  return out;
}

}  // namespace tpca
