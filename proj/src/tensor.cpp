#include "tpca/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "tpca/kernels.hpp"

namespace tpca {

namespace {

std::vector<std::size_t> row_major_strides(const std::vector<int>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * static_cast<std::size_t>(dims[i]);
  return s;
}

std::size_t product(const std::vector<int>& dims) {
  std::size_t p = 1;
  for (int d : dims) {
    if (d < 1) throw ShapeError("tensor dimensions must be positive");
    p *= static_cast<std::size_t>(d);
  }
  return p;
}

// Increment a multi-index in row-major order; false after the last one.
bool next_index(std::span<int> idx, const std::vector<int>& dims) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < dims[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// GeneralTensor

GeneralTensor::GeneralTensor(std::vector<int> dims)
    : dims_(std::move(dims)), values_(product(dims_), 0.0), strides_(row_major_strides(dims_)) {}

GeneralTensor::GeneralTensor(std::vector<int> dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)), strides_(row_major_strides(dims_)) {
  if (values_.size() != product(dims_)) throw ShapeError("value count does not match dims");
}

GeneralTensor GeneralTensor::cubic(int n, int order) {
  return GeneralTensor(std::vector<int>(static_cast<std::size_t>(order), n));
}

bool GeneralTensor::is_cubic() const {
  return std::all_of(dims_.begin(), dims_.end(), [&](int d) { return d == dims_.front(); });
}

std::size_t GeneralTensor::offset(std::span<const int> idx) const {
  if (idx.size() != dims_.size()) throw ShapeError("index length does not match tensor order");
  std::size_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims_[k]) throw DomainError("index out of range");
    off += static_cast<std::size_t>(idx[k]) * strides_[k];
  }
  return off;
}

void GeneralTensor::unravel(std::size_t flat, std::span<int> idx) const {
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    idx[k] = static_cast<int>(flat / strides_[k]);
    flat %= strides_[k];
  }
}

// ---------------------------------------------------------------------------
// SuperSymmetricTensor

SuperSymmetricTensor::SuperSymmetricTensor(int n, int order)
    : layout_(symmetric_layout(n, order)), values_(layout_->size(), 0.0) {}

double SuperSymmetricTensor::operator()(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != order()) throw ShapeError("index length does not match tensor order");
  for (int v : idx)
    if (v < 0 || v >= dim()) throw DomainError("index out of range");
  return values_[layout_->rank_any(idx)];
}

void SuperSymmetricTensor::set(std::span<const int> idx, double value) {
  if (static_cast<int>(idx.size()) != order()) throw ShapeError("index length does not match tensor order");
  for (int v : idx)
    if (v < 0 || v >= dim()) throw DomainError("index out of range");
  values_[layout_->rank_any(idx)] = value;
}

GeneralTensor SuperSymmetricTensor::to_dense() const {
  GeneralTensor t = GeneralTensor::cubic(dim(), order());
  Index idx(static_cast<std::size_t>(order()), 0);
  std::size_t flat = 0;
  do {
    t.values()[flat++] = values_[layout_->rank_any(idx)];
  } while (next_index(idx, t.dims()));
  return t;
}

double SuperSymmetricTensor::norm() const { return std::sqrt(inner(*this, *this)); }

bool SuperSymmetricTensor::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

SuperSymmetricTensor& SuperSymmetricTensor::operator+=(const SuperSymmetricTensor& other) {
  if (other.dim() != dim() || other.order() != order()) throw ShapeError("tensor shapes differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SuperSymmetricTensor& SuperSymmetricTensor::operator-=(const SuperSymmetricTensor& other) {
  if (other.dim() != dim() || other.order() != order()) throw ShapeError("tensor shapes differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SuperSymmetricTensor& SuperSymmetricTensor::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// PartialSymmetricTensor

PartialSymmetricTensor::PartialSymmetricTensor(int n, int m) : n_(n), m_(m), dense_({n, m, n, m}) {}

double partial_symmetry_violation(const GeneralTensor& g) {
  const auto& d = g.dims();
  if (g.order() != 4 || d[0] != d[2] || d[1] != d[3]) throw ShapeError("partial-symmetric tensors are n x m x n x m");
  double worst = 0.0;
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j)
      for (int k = 0; k < d[0]; ++k)
        for (int l = 0; l < d[1]; ++l) {
          const double v = g({i, j, k, l});
          worst = std::max({worst, std::abs(v - g({k, j, i, l})), std::abs(v - g({i, l, k, j}))});
        }
  return worst;
}

PartialSymmetricTensor PartialSymmetricTensor::from_dense(const GeneralTensor& g, double tol) {
  const double v = partial_symmetry_violation(g);
  if (v > tol) throw DomainError("tensor violates partial symmetry by " + std::to_string(v));
  PartialSymmetricTensor out(g.dims()[0], g.dims()[1]);
  out.dense_ = g;
  return out;
}

PartialSymmetricTensor PartialSymmetricTensor::symmetrize(const GeneralTensor& g) {
  const auto& d = g.dims();
  if (g.order() != 4 || d[0] != d[2] || d[1] != d[3]) throw ShapeError("partial-symmetric tensors are n x m x n x m");
  PartialSymmetricTensor out(d[0], d[1]);
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j)
      for (int k = 0; k < d[0]; ++k)
        for (int l = 0; l < d[1]; ++l)
{
          // Sum in a fixed orbit order so every member gets bit-identical values.
          std::array<std::array<int, 4>, 4> orbit{{{i, j, k, l}, {i, l, k, j}, {k, j, i, l}, {k, l, i, j}}};
          std::sort(orbit.begin(), orbit.end());
          double s = 0.0;
          for (const auto& o : orbit) s += g(o);
          out.dense_({i, j, k, l}) = 0.25 * s;
        }
  return out;
}

void PartialSymmetricTensor::set(int i, int j, int k, int l, double value) {
  dense_({i, j, k, l}) = value;
  dense_({k, j, i, l}) = value;
  dense_({i, l, k, j}) = value;
  dense_({k, l, i, j}) = value;
}

double PartialSymmetricTensor::eval(const Vector& x, const Vector& y) const {
  if (x.size() != n_ || y.size() != m_) throw ShapeError("bi-quadratic argument lengths do not match");
  const std::array<Vector, 4> xs{x, y, x, y};
  return eval_multilinear(dense_, xs);
}

double PartialSymmetricTensor::max_violation() const { return partial_symmetry_violation(dense_); }

// ---------------------------------------------------------------------------
// Operations

SuperSymmetricTensor symmetrize(const GeneralTensor& t) {
  if (t.order() < 1 || !t.is_cubic()) throw ShapeError("symmetrize needs a cubic tensor");
  SuperSymmetricTensor out(t.dims().front(), t.order());
  const auto& layout = out.layout();
  auto vals = out.values();
  Index idx(static_cast<std::size_t>(t.order()), 0);
  std::size_t flat = 0;
  do {
    vals[layout.rank_any(idx)] += t.values()[flat++];
  } while (next_index(idx, t.dims()));
  const auto mult = layout.multiplicity();
  for (std::size_t c = 0; c < vals.size(); ++c) vals[c] /= mult[c];
  return out;
}

SuperSymmetricTensor rank_one(double lambda, const Vector& a, int m) {
  if (m < 1) throw DomainError("rank_one needs order >= 1");
  SuperSymmetricTensor out(static_cast<int>(a.size()), m);
  const auto& layout = out.layout();
  auto vals = out.values();
  for (std::size_t c = 0; c < vals.size(); ++c) {
    double p = lambda;
    for (int i : layout.tuple(c)) p *= a[i];
    vals[c] = p;
  }
  return out;
}

double eval_multilinear(const GeneralTensor& f, std::span<const Vector> xs) {
  if (static_cast<int>(xs.size()) != f.order()) throw ShapeError("vector count does not match tensor order");
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (xs[k].size() != f.dims()[k]) throw ShapeError("vector length does not match tensor dimension");
  // Contract the last mode repeatedly.
  std::vector<double> cur(f.values().begin(), f.values().end());
  for (std::size_t k = xs.size(); k-- > 0;) {
    const auto nk = static_cast<std::size_t>(f.dims()[k]);
    const std::size_t outer = cur.size() / nk;
    std::vector<double> next(outer);
    for (std::size_t o = 0; o < outer; ++o)
      next[o] = kernels::dot(std::span<const double>(cur.data() + o * nk, nk), std::span<const double>(xs[k].data(), nk));
    cur = std::move(next);
  }
  return cur.front();
}

Vector contract_except(const GeneralTensor& f, std::span<const Vector> xs, int mode) {
  if (static_cast<int>(xs.size()) != f.order()) throw ShapeError("vector count does not match tensor order");
  if (mode < 0 || mode >= f.order()) throw DomainError("mode out of range");
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (static_cast<int>(k) != mode && xs[k].size() != f.dims()[k])
      throw ShapeError("vector length does not match tensor dimension");
  std::vector<double> cur(f.values().begin(), f.values().end());
  // Trailing modes, last first.
  for (auto k = static_cast<std::size_t>(f.order()); k-- > static_cast<std::size_t>(mode) + 1;) {
    const auto nk = static_cast<std::size_t>(f.dims()[k]);
    const std::size_t outer = cur.size() / nk;
    std::vector<double> next(outer);
    for (std::size_t o = 0; o < outer; ++o)
      next[o] = kernels::dot(std::span<const double>(cur.data() + o * nk, nk), std::span<const double>(xs[k].data(), nk));
    cur = std::move(next);
  }
  // Leading modes, first first.
  for (std::size_t k = 0; k < static_cast<std::size_t>(mode); ++k) {
    const auto nk = static_cast<std::size_t>(f.dims()[k]);
    const std::size_t inner = cur.size() / nk;
    std::vector<double> next(inner, 0.0);
    for (std::size_t i = 0; i < nk; ++i)
      kernels::axpby(std::span<double>(next), 1.0, std::span<const double>(next), xs[k][static_cast<Eigen::Index>(i)],
                     std::span<const double>(cur.data() + i * inner, inner));
    cur = std::move(next);
  }
  return Eigen::Map<const Vector>(cur.data(), static_cast<Eigen::Index>(cur.size()));
}

double eval_multilinear(const SuperSymmetricTensor& f, std::span<const Vector> xs) {
  if (static_cast<int>(xs.size()) != f.order()) throw ShapeError("vector count does not match tensor order");
  return eval_multilinear(f.to_dense(), xs);
}

double eval_homogeneous(const SuperSymmetricTensor& f, const Vector& x) {
  if (x.size() != f.dim()) throw ShapeError("vector length does not match tensor dimension");
  const auto& layout = f.layout();
  const auto mult = layout.multiplicity();
  std::vector<double> mono(layout.size());
  for (std::size_t c = 0; c < mono.size(); ++c) {
    double p = mult[c];
    for (int i : layout.tuple(c)) p *= x[i];
    mono[c] = p;
  }
  return kernels::dot(f.values(), mono);
}

Vector contract_all_but_one(const SuperSymmetricTensor& f, const Vector& x) {
  if (x.size() != f.dim()) throw ShapeError("vector length does not match tensor dimension");
  const auto& layout = f.layout();
  const auto mult = layout.multiplicity();
  const auto vals = f.values();
  const int m = f.order();
  Vector g = Vector::Zero(f.dim());
  for (std::size_t c = 0; c < layout.size(); ++c) {
    const auto t = layout.tuple(c);
    // d/dx_j of mult * prod x_{t_p}: one term per distinct value j in t,
    // weighted by its count.
    for (int p = 0; p < m; ++p) {
      if (p > 0 && t[static_cast<std::size_t>(p)] == t[static_cast<std::size_t>(p - 1)]) continue;
      int count = 0;
      double prod = 1.0;
      bool skipped = false;
      for (int q = 0; q < m; ++q) {
        if (t[static_cast<std::size_t>(q)] == t[static_cast<std::size_t>(p)]) ++count;
        if (!skipped && t[static_cast<std::size_t>(q)] == t[static_cast<std::size_t>(p)]) {
          skipped = true;
          continue;
        }
        prod *= x[t[static_cast<std::size_t>(q)]];
      }
      g[t[static_cast<std::size_t>(p)]] += vals[c] * mult[c] * count * prod;
    }
  }
  return g / static_cast<double>(m);
}

double inner(const SuperSymmetricTensor& f, const SuperSymmetricTensor& g) {
  if (f.dim() != g.dim() || f.order() != g.order()) throw ShapeError("tensor shapes differ");
  const auto mult = f.layout().multiplicity();
  std::vector<double> weighted(f.num_classes());
  for (std::size_t c = 0; c < weighted.size(); ++c) weighted[c] = mult[c] * f.values()[c];
  return kernels::dot(weighted, g.values());
}

SuperSymmetricTensor random_gaussian(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  GeneralTensor t = GeneralTensor::cubic(n, m);
  for (double& v : t.values()) v = dist(rng);
  return symmetrize(t);
}

SuperSymmetricTensor random_uniform(int n, int m, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  GeneralTensor t = GeneralTensor::cubic(n, m);
  for (double& v : t.values()) v = dist(rng);
  return symmetrize(t);
}

GeneralTensor random_general(std::vector<int> dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  GeneralTensor t(std::move(dims));
  for (double& v : t.values()) v = dist(rng);
  return t;
}

PartialSymmetricTensor random_partial_symmetric(int n, int m, std::uint64_t seed) {
  return PartialSymmetricTensor::symmetrize(random_general({n, m, n, m}, seed));
}

SuperSymmetricTensor from_polynomial(int n, int m, std::span<const std::pair<Signature, double>> terms) {
  SuperSymmetricTensor out(n, m);
  for (const auto& [sig, coeff] : terms) {
    if (static_cast<int>(sig.size()) != n) throw ShapeError("monomial signature length must equal n");
    const auto count = multinomial(m, sig);
    Index idx;
    for (int j = 0; j < n; ++j) idx.insert(idx.end(), static_cast<std::size_t>(sig[static_cast<std::size_t>(j)]), j);
    out.set(idx, out(idx) + coeff / static_cast<double>(count));
  }
  return out;
}

}  // namespace tpca
