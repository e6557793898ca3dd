#include "tpca/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

namespace tpca {

std::uint64_t factorial(int k) {
  if (k < 0 || k > 20) throw DomainError("factorial argument out of range: " + std::to_string(k));
  std::uint64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

Index canonical_index(std::span<const int> idx, int n) {
  for (int v : idx)
    if (v < 0 || v >= n) throw DomainError("index component " + std::to_string(v) + " outside [0," + std::to_string(n) + ")");
  Index out(idx.begin(), idx.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t class_size(std::span<const int> idx) {
  Index s(idx.begin(), idx.end());
  std::sort(s.begin(), s.end());
  std::uint64_t r = factorial(static_cast<int>(s.size()));
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    r /= factorial(static_cast<int>(j - i));
    i = j;
  }
  return r;
}

std::uint64_t multinomial(int d, std::span<const int> k) {
  int sum = 0;
  for (int v : k) {
    if (v < 0) throw DomainError("negative signature entry");
    sum += v;
  }
  if (sum != d) throw DomainError("signature sums to " + std::to_string(sum) + ", expected " + std::to_string(d));
  std::uint64_t r = factorial(d);
  for (int v : k) r /= factorial(v);
  return r;
}

std::vector<Signature> enumerate_signatures(int n, int d) {
  if (n < 1 || d < 0) throw DomainError("enumerate_signatures needs n >= 1, d >= 0");
  std::vector<Signature> out;
  Signature k(static_cast<std::size_t>(n), 0);
  // Lexicographic over k_1, ..., k_n with the last entry absorbing the remainder.
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n - 1) {
      k[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(k);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      k[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, d);
  return out;
}

Signature signature_of(std::span<const int> idx, int n) {
  Signature k(static_cast<std::size_t>(n), 0);
  for (int v : idx) {
    if (v < 0 || v >= n) throw DomainError("index component out of range");
    ++k[static_cast<std::size_t>(v)];
  }
  return k;
}

SymmetricLayout::SymmetricLayout(int n, int m) : n_(n), m_(m) {
  if (n < 1 || m < 1) throw DomainError("layout needs n >= 1 and m >= 1");
  const int top = n + m;
  binom_.assign(static_cast<std::size_t>(top), std::vector<std::uint64_t>(static_cast<std::size_t>(m + 1), 0));
  for (int a = 0; a < top; ++a)
    for (int b = 0; b <= m; ++b) binom_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = binomial(a, b);

  Index cur(static_cast<std::size_t>(m), 0);
  while (true) {
    classes_.push_back(cur);
    int pos = m - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == n - 1) --pos;
    if (pos < 0) break;
    const int v = cur[static_cast<std::size_t>(pos)] + 1;
    for (int j = pos; j < m; ++j) cur[static_cast<std::size_t>(j)] = v;
  }
  flat_.reserve(classes_.size() * static_cast<std::size_t>(m));
  mult_.reserve(classes_.size());
  for (const auto& c : classes_) {
    flat_.insert(flat_.end(), c.begin(), c.end());
    mult_.push_back(static_cast<double>(class_size(c)));
  }
}

std::size_t SymmetricLayout::rank(std::span<const int> sorted) const {
  // Shift to a strictly increasing combination s_j = c_j + j drawn from
  // {0..n+m-2}, then use the lexicographic combination rank.
  const int total = n_ + m_ - 1;
  std::size_t r = 0;
  int prev = -1;
  for (int j = 0; j < m_; ++j) {
    const int s = sorted[static_cast<std::size_t>(j)] + j;
    for (int v = prev + 1; v < s; ++v)
      r += binom_[static_cast<std::size_t>(total - 1 - v)][static_cast<std::size_t>(m_ - 1 - j)];
    prev = s;
  }
  return r;
}

std::size_t SymmetricLayout::rank_any(std::span<const int> idx) const {
  int buf[64];
  if (idx.size() > 64) {
    Index s(idx.begin(), idx.end());
    std::sort(s.begin(), s.end());
    return rank(s);
  }
  std::copy(idx.begin(), idx.end(), buf);
  std::sort(buf, buf + idx.size());
  return rank({buf, idx.size()});
}

std::shared_ptr<const SymmetricLayout> symmetric_layout(int n, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SymmetricLayout>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, m}];
  if (!slot) slot = std::make_shared<const SymmetricLayout>(n, m);
  return slot;
}

}  // namespace tpca
