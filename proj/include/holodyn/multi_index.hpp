#pragma once

#include <memory>
#include <span>
#include <vector>

namespace holodyn {

/// Exponent tuple of a monomial z^alpha with its total degree cached.
///
/// Ordering is graded lexicographic: indices compare first by total degree,
/// then lexicographically on the exponent tuple (so within a degree block
/// (k,0,...,0) comes first and (0,...,0,k) last).  This order is the storage
/// order used throughout.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  int dim() const { return static_cast<int>(e_.size()); }
  int degree() const { return deg_; }
  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  std::span<const int> exponents() const { return e_; }

  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
  /// Graded-lex order.
  bool operator<(const MultiIndex& o) const;

 private:
  std::vector<int> e_;
  int deg_ = 0;
};

/// Enumeration of all multi-indices with dim variables and degree <= max
/// in graded-lex order, with O(log) exponent-to-position lookup.  Tables are
/// immutable and shared: polynomials over the same (dim, degree) box reuse
/// one instance.
class IndexTable {
 public:
  static std::shared_ptr<const IndexTable> get(int dim, int max_degree);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(idx_.size()); }

  /// First flat position of the degree-k block.
  int degree_offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
  /// Number of indices of degree exactly k.
  int degree_count(int k) const { return offsets_[static_cast<std::size_t>(k) + 1] - offsets_[static_cast<std::size_t>(k)]; }

  const MultiIndex& at(int pos) const { return idx_[static_cast<std::size_t>(pos)]; }

  /// Flat position of alpha, or -1 when alpha is outside the table
  /// (wrong length, negative entry, or degree > max_degree).
  int position(std::span<const int> alpha) const;

 private:
  IndexTable(int dim, int max_degree);

  int dim_;
  int max_degree_;
  std::vector<MultiIndex> idx_;
  std::vector<int> offsets_;  // size max_degree_ + 2
};

/// Binomial coefficient as a double, n <= 300.
double binomial(int n, int k);

/// n! as a double, n <= 170 (throws beyond: not representable).
double factorial(int n);

/// alpha! = prod alpha_i!
double multi_factorial(std::span<const int> alpha);

}  // namespace holodyn
