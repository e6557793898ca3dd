#include "tpca/oracle.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

namespace tpca {

namespace {

using Blocks = std::vector<Vector>;

double dense_value(const GeneralTensor& T, const Blocks& xs) { return eval_multilinear(T, xs); }

Blocks repeat(const Vector& x, int m) { return Blocks(static_cast<std::size_t>(m), x); }

// Projected gradient ascent on a product of unit spheres with Armijo
// backtracking. `grad` returns the Euclidean gradient of each block.
double polish_blocks(const std::function<double(const Blocks&)>& f,
                     const std::function<Blocks(const Blocks&)>& grad, Blocks& xs, int max_iter = 2000) {
  double val = f(xs);
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    Blocks g = grad(xs);
    double gnorm2 = 0.0;
    for (std::size_t b = 0; b < xs.size(); ++b) {
      g[b] -= g[b].dot(xs[b]) * xs[b];
      gnorm2 += g[b].squaredNorm();
    }
    if (gnorm2 < 1e-28) break;
    step = std::min(1.0, step * 4.0);
    bool moved = false;
    while (step > 1e-14) {
      Blocks trial = xs;
      for (std::size_t b = 0; b < xs.size(); ++b) trial[b] = (xs[b] + step * g[b]).normalized();
      const double tv = f(trial);
      if (tv >= val + 1e-4 * step * gnorm2) {
        xs = std::move(trial);
        moved = tv - val > 1e-16 * std::max(1.0, std::abs(val));
        val = tv;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return val;
}

// Unit vectors of the grid on S^{n-1}; half of the sphere when `half` is set
// (forms invariant under x -> -x).
std::vector<Vector> sphere_grid(int n, int res, bool half) {
  const double pi = std::numbers::pi;
  std::vector<Vector> pts;
  if (n == 1) {
    pts.push_back(Vector::Constant(1, 1.0));
    if (!half) pts.push_back(Vector::Constant(1, -1.0));
  } else if (n == 2) {
    const double span = half ? pi : 2 * pi;
    for (int a = 0; a < res; ++a) {
      const double t = span * a / res;
      Vector v(2);
      v << std::cos(t), std::sin(t);
      pts.push_back(v);
    }
  } else if (n == 3) {
    // Polar angle over [0, pi] (or [0, pi/2]), azimuth over [0, 2 pi).
    const double polar = half ? pi / 2 : pi;
    for (int a = 0; a < res; ++a) {
      const double th = polar * a / (res - 1);
      for (int b = 0; b < res; ++b) {
        const double ph = 2 * pi * b / res;
        Vector v(3);
        v << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        pts.push_back(v);
      }
    }
  } else {
    throw DomainError("sphere grid supports n <= 3");
  }
  return pts;
}

int default_resolution(int n) { return n <= 2 ? 720 : 180; }

}  // namespace

OracleResult sphere_grid_max(const SuperSymmetricTensor& F, int resolution) {
  const int n = F.dim();
  const int m = F.order();
  if (n > 3) throw DomainError("sphere_grid_max is limited to n <= 3");
  const int res = resolution > 0 ? resolution : default_resolution(n);
  const GeneralTensor T = F.to_dense();

  OracleResult out;
  out.grid_resolution = res;
  out.value = -std::numeric_limits<double>::infinity();
  Vector best;
  for (const Vector& x : sphere_grid(n, res, m % 2 == 0)) {
    const double v = dense_value(T, repeat(x, m));
    if (v > out.value) {
      out.value = v;
      best = x;
    }
  }
  Blocks xs{best};
  auto f = [&](const Blocks& b) { return dense_value(T, repeat(b[0], m)); };
  auto g = [&](const Blocks& b) {
    const Blocks r = repeat(b[0], m);
    return Blocks{static_cast<double>(m) * contract_except(T, r, m - 1)};
  };
  polish_blocks(f, g, xs);
  out.argmax = xs;
  out.value = f(xs);
  out.polished = true;
  return out;
}

OracleResult product_grid_max(const PartialSymmetricTensor& G, int resolution) {
  const int n = G.n();
  const int m = G.m();
  if (n > 3 || m > 3) throw DomainError("product_grid_max is limited to n, m <= 3");
  auto res_for = [&](int k) { return resolution > 0 ? resolution : (k <= 2 ? 180 : 30); };
  const GeneralTensor& T = G.dense();
  const auto gx = sphere_grid(n, res_for(n), true);
  const auto gy = sphere_grid(m, res_for(m), true);

  OracleResult out;
  out.grid_resolution = std::max(res_for(n), res_for(m));
  out.value = -std::numeric_limits<double>::infinity();
  Blocks best;
  for (const Vector& x : gx)
    for (const Vector& y : gy) {
      const double v = G.eval(x, y);
      if (v > out.value) {
        out.value = v;
        best = {x, y};
      }
    }
  auto f = [&](const Blocks& b) { return G.eval(b[0], b[1]); };
  auto g = [&](const Blocks& b) {
    const Blocks r{b[0], b[1], b[0], b[1]};
    return Blocks{2.0 * contract_except(T, r, 0), 2.0 * contract_except(T, r, 1)};
  };
  polish_blocks(f, g, best);
  out.argmax = best;
  out.value = f(best);
  out.polished = true;
  return out;
}

OracleResult circle_product_grid_max(const GeneralTensor& F, int resolution) {
  for (int d : F.dims())
    if (d != 2) throw DomainError("circle_product_grid_max needs every dimension equal to 2");
  const int K = F.order();
  if (resolution < 4 || std::pow(static_cast<double>(resolution), K) > 5e7)
    throw DomainError("grid too large");
  const auto full = sphere_grid(2, resolution, false);
  const auto half = sphere_grid(2, resolution, true);

  OracleResult out;
  out.grid_resolution = resolution;
  out.value = -std::numeric_limits<double>::infinity();
  Blocks cur(static_cast<std::size_t>(K));
  Blocks best;
  std::vector<int> pos(static_cast<std::size_t>(K), 0);
  while (true) {
    for (int k = 0; k < K; ++k)
      cur[static_cast<std::size_t>(k)] = (k == 0 ? full : half)[static_cast<std::size_t>(pos[static_cast<std::size_t>(k)])];
    const double v = dense_value(F, cur);
    if (v > out.value) {
      out.value = v;
      best = cur;
    }
    int k = K - 1;
    while (k >= 0 && ++pos[static_cast<std::size_t>(k)] == resolution) pos[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  auto f = [&](const Blocks& b) { return dense_value(F, b); };
  auto g = [&](const Blocks& b) {
    Blocks r;
    for (int k = 0; k < K; ++k) r.push_back(contract_except(F, b, k));
    return r;
  };
  polish_blocks(f, g, best);
  out.argmax = best;
  out.value = f(best);
  out.polished = true;
  return out;
}

SymmetricMatrix kkt_project(const SymmetricMatrix& Z, int n, int d) {
  const std::size_t N = int_pow(n, d);
  if (N > 100) throw DomainError("kkt_project is limited to n^d <= 100");
  if (Z.rows() != static_cast<Eigen::Index>(N) || Z.cols() != Z.rows()) throw ShapeError("Z must be n^d x n^d");
  const std::size_t V = N * N;

  // Variable p = r*N + c holds X(r,c). Each entry is tied to the first entry
  // (in this order) carrying the same sorted index tuple.
  auto digits = [&](std::size_t v, std::vector<int>& out) {
    for (int j = d - 1; j >= 0; --j) {
      out[static_cast<std::size_t>(j)] = static_cast<int>(v % static_cast<std::size_t>(n));
      v /= static_cast<std::size_t>(n);
    }
  };
  std::map<std::vector<int>, std::size_t> first;
  std::vector<std::pair<std::size_t, std::size_t>> ties;
  std::vector<int> a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d));
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) {
      digits(r, a);
      digits(c, b);
      std::vector<int> key(a);
      key.insert(key.end(), b.begin(), b.end());
      std::sort(key.begin(), key.end());
      const std::size_t p = r * N + c;
      auto [it, fresh] = first.emplace(key, p);
      if (!fresh) ties.emplace_back(p, it->second);
    }

  const auto M = static_cast<Eigen::Index>(ties.size() + 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, static_cast<Eigen::Index>(V));
  Vector rhs = Vector::Zero(M);
  for (std::size_t q = 0; q < ties.size(); ++q) {
    A(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(ties[q].first)) = 1.0;
    A(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(ties[q].second)) = -1.0;
  }
  for (std::size_t i = 0; i < N; ++i) A(M - 1, static_cast<Eigen::Index>(i * N + i)) = 1.0;
  rhs[M - 1] = 1.0;

  Vector z(static_cast<Eigen::Index>(V));
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) z[static_cast<Eigen::Index>(r * N + c)] = Z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));

  // min ||x - z||^2 s.t. A x = rhs  =>  x = z - A^T (A A^T)^{-1} (A z - rhs).
  const Eigen::MatrixXd AAt = A * A.transpose();
  const Vector nu = AAt.ldlt().solve(A * z - rhs);
  const Vector x = z - A.transpose() * nu;

  SymmetricMatrix X(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x[static_cast<Eigen::Index>(r * N + c)];
  return X;
}

OracleResult multistart_local(const SuperSymmetricTensor& F, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw DomainError("multistart_local needs at least one restart");
  const int n = F.dim();
  const int m = F.order();
  const GeneralTensor T = F.to_dense();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto random_unit = [&] {
    Vector v(n);
    do {
      for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    } while (v.norm() == 0.0);
    return Vector(v / v.norm());
  };

  // 6 (x^T x)^{m/2} added entrywise: only the identity-pairing positions.
  GeneralTensor shifted = T;
  if (m % 2 == 0) {
    const auto sym = symmetrize([&] {
      GeneralTensor I = GeneralTensor::cubic(n, m);
      Index idx(static_cast<std::size_t>(m));
      for (std::size_t flat = 0; flat < I.size(); ++flat) {
        I.unravel(flat, idx);
        bool paired = true;
        for (int k = 0; k < m; k += 2) paired = paired && idx[static_cast<std::size_t>(k)] == idx[static_cast<std::size_t>(k + 1)];
        I.values()[flat] = paired ? 6.0 : 0.0;
      }
      return I;
    }()).to_dense();
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted.values()[i] += sym.values()[i];
  }
  const double alpha = (m - 1) * F.norm();

  OracleResult out;
  out.value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    const Vector x0 = random_unit();
    std::vector<Vector> cands;
    if (m % 2 == 0) {
      // Maximum block improvement: update only the block with the best gain.
      Blocks xs = repeat(x0, m);
      double val = dense_value(shifted, xs);
      for (int it = 0; it < 20000; ++it) {
        int arg = -1;
        double gain = 0.0;
        Vector next;
        for (int k = 0; k < m; ++k) {
          const Vector g = contract_except(shifted, xs, k);
          const double nv = g.norm();
          if (nv - val > gain) {
            gain = nv - val;
            arg = k;
            next = g / nv;
          }
        }
        if (arg < 0 || gain <= 1e-15 * std::max(1.0, std::abs(val))) break;
        xs[static_cast<std::size_t>(arg)] = next;
        val += gain;
      }
      cands = xs;
    } else {
      Vector x = x0;
      double val = dense_value(T, repeat(x, m));
      for (int it = 0; it < 20000; ++it) {
        Vector g = contract_except(T, repeat(x, m), m - 1) + alpha * x;
        g.normalize();
        const double nv = dense_value(T, repeat(g, m));
        const bool done = nv - val <= 1e-15 * std::max(1.0, std::abs(val));
        x = g;
        val = nv;
        if (done) break;
      }
      cands.push_back(x);
    }
    for (const Vector& c : cands) {
      const Vector x = c.normalized();
      const double v = dense_value(T, repeat(x, m));
      if (v > out.value) {
        out.value = v;
        out.argmax = {x};
      }
    }
  }
  // Finish with a local polish of the unshifted form.
  auto f = [&](const Blocks& b) { return dense_value(T, repeat(b[0], m)); };
  auto g = [&](const Blocks& b) {
    return Blocks{static_cast<double>(m) * contract_except(T, repeat(b[0], m), m - 1)};
  };
  polish_blocks(f, g, out.argmax);
  out.value = f(out.argmax);
  out.polished = true;
  return out;
}

}  // namespace tpca
