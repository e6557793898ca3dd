#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace tpca {

/// Invalid value for an otherwise well-shaped argument.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dimension or order mismatch.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input for which the requested quantity is undefined (zero tensor, zero matrix).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor indices are 0-based everywhere in the library. The only 1-based
// surface is the text file format (see tensor_io.hpp).
using Index = std::vector<int>;

/// Element of K(n,d): an n-tuple of non-negative counts summing to d.
using Signature = std::vector<int>;

std::uint64_t factorial(int k);
std::uint64_t binomial(int n, int k);

/// Non-decreasing rearrangement of idx. Throws DomainError if any component
/// lies outside [0, n).
Index canonical_index(std::span<const int> idx, int n);

/// Number of distinct permutations of idx: m! / prod_j (count of j)!.
std::uint64_t class_size(std::span<const int> idx);

/// d! / prod_j k_j!. Throws DomainError if the counts do not sum to d.
std::uint64_t multinomial(int d, std::span<const int> k);

/// All of K(n,d) in lexicographic order; there are C(n+d-1, d) of them.
std::vector<Signature> enumerate_signatures(int n, int d);

/// Occurrence counts of 0..n-1 in idx.
Signature signature_of(std::span<const int> idx, int n);

/// Canonical-class layout for super-symmetric tensors of dimension n and
/// order m. Classes are the non-decreasing m-tuples, numbered in
/// lexicographic order; rank() maps a sorted tuple to its number.
class SymmetricLayout {
 public:
  SymmetricLayout(int n, int m);

  int dim() const { return n_; }
  int order() const { return m_; }
  std::size_t size() const { return classes_.size(); }

  /// Class number of a sorted tuple (no range or order checks).
  std::size_t rank(std::span<const int> sorted) const;
  /// Class number of an arbitrary tuple.
  std::size_t rank_any(std::span<const int> idx) const;

  std::span<const int> tuple(std::size_t c) const {
    return {flat_.data() + c * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
  }
  /// Multiplicities as doubles, aligned with class numbers.
  std::span<const double> multiplicity() const { return mult_; }

 private:
  int n_;
  int m_;
  std::vector<Index> classes_;
  std::vector<int> flat_;
  std::vector<double> mult_;
  // binom_[a][b] = C(a, b) for a < n+m, b <= m
  std::vector<std::vector<std::uint64_t>> binom_;
};

/// Shared, lazily built layout for (n, m). Thread-safe.
std::shared_ptr<const SymmetricLayout> symmetric_layout(int n, int m);

}  // namespace tpca
