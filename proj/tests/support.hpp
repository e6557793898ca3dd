#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "tpca/tensor.hpp"

namespace tpca::testing {

// Fourth-order tensor in three variables with leading Z-eigenvector
// +-(-0.6671, -0.2472, 0.7027).
inline SuperSymmetricTensor quartic_example() {
  SuperSymmetricTensor F(3, 4);
  auto s = [&](int a, int b, int c, int d, double v) { F.set({a - 1, b - 1, c - 1, d - 1}, v); };
  s(1, 1, 1, 1, .2883);  s(1, 1, 1, 2, -.0031); s(1, 1, 1, 3, .1973);  s(1, 1, 2, 2, -.2485);
  s(1, 1, 2, 3, -.2939); s(1, 1, 3, 3, .3847);  s(1, 2, 2, 2, .2972);  s(1, 2, 2, 3, .1862);
  s(1, 2, 3, 3, .0919);  s(1, 3, 3, 3, -.3619); s(2, 2, 2, 2, .1241);  s(2, 2, 2, 3, -.3420);
  s(2, 2, 3, 3, .2127);  s(2, 3, 3, 3, .2727);  s(3, 3, 3, 3, -.3054);
  return F;
}

// Quartic form in three variables; leading direction +-(0.0116, 0.9992, 0.0382).
inline SuperSymmetricTensor fiber_example() {
  const std::vector<std::pair<Signature, double>> t = {
      {{4, 0, 0}, 0.74694},   {{3, 1, 0}, -0.435103}, {{2, 2, 0}, 0.454945},  {{1, 3, 0}, 0.0657818},
      {{0, 4, 0}, 1},         {{3, 0, 1}, 0.37089},   {{2, 1, 1}, -0.29883},  {{1, 2, 1}, -0.795157},
      {{0, 3, 1}, 0.139751},  {{2, 0, 2}, 1.24733},   {{1, 1, 2}, 0.714359},  {{0, 2, 2}, 0.316264},
      {{1, 0, 3}, -0.397391}, {{0, 1, 3}, -0.405544}, {{0, 0, 4}, 0.794869}};
  return from_polynomial(3, 4, t);
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline Vector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v / v.norm();
}

// Max componentwise distance between a and +-b.
inline double sign_free_distance(const Vector& a, const Vector& b) {
  return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

// Brute-force dense value of sum_idx f[idx] prod_k xs[k][idx_k], written
// without the library's contraction routine.
inline double brute_multilinear(const GeneralTensor& f, const std::vector<Vector>& xs) {
  Index idx(static_cast<std::size_t>(f.order()), 0);
  double total = 0.0;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    f.unravel(flat, idx);
    double p = f.values()[flat];
    for (std::size_t k = 0; k < idx.size(); ++k) p *= xs[k][idx[k]];
    total += p;
  }
  return total;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace tpca::testing
