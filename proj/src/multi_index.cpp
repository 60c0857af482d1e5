#include "holodyn/multi_index.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace holodyn {

MultiIndex::MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
  for (int v : e_) {
    if (v < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    deg_ += v;
  }
}

bool MultiIndex::operator<(const MultiIndex& o) const {
  if (deg_ != o.deg_) return deg_ < o.deg_;
  // Within a degree, larger leading exponents come first.
  return std::lexicographical_compare(o.e_.begin(), o.e_.end(), e_.begin(), e_.end());
}

namespace {

void enumerate_degree(int dim, int degree, std::vector<int>& scratch, int pos, int left,
                      std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    scratch[static_cast<std::size_t>(pos)] = left;
    out.emplace_back(scratch);
    return;
  }
  for (int v = left; v >= 0; --v) {
    scratch[static_cast<std::size_t>(pos)] = v;
    enumerate_degree(dim, degree, scratch, pos + 1, left - v, out);
  }
}

}  // namespace

IndexTable::IndexTable(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
  if (dim < 1) throw std::invalid_argument("IndexTable: dim must be positive");
  if (max_degree < 0) throw std::invalid_argument("IndexTable: negative degree");
  offsets_.assign(static_cast<std::size_t>(max_degree) + 2, 0);
  std::vector<int> scratch(static_cast<std::size_t>(dim), 0);
  for (int k = 0; k <= max_degree; ++k) {
    offsets_[static_cast<std::size_t>(k)] = static_cast<int>(idx_.size());
    enumerate_degree(dim, k, scratch, 0, k, idx_);
  }
  offsets_[static_cast<std::size_t>(max_degree) + 1] = static_cast<int>(idx_.size());
}

std::shared_ptr<const IndexTable> IndexTable::get(int dim, int max_degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const IndexTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, max_degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::shared_ptr<const IndexTable>(new IndexTable(dim, max_degree));
  cache.emplace(key, table);
  return table;
}

int IndexTable::position(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != dim_) return -1;
  int deg = 0;
  for (int v : alpha) {
    if (v < 0) return -1;
    deg += v;
  }
  if (deg > max_degree_) return -1;
  auto first = idx_.begin() + offsets_[static_cast<std::size_t>(deg)];
  auto last = idx_.begin() + offsets_[static_cast<std::size_t>(deg) + 1];
  // Blocks are sorted with lexicographically larger tuples first.
  auto it = std::lower_bound(first, last, alpha, [](const MultiIndex& m, std::span<const int> a) {
    return std::lexicographical_compare(a.begin(), a.end(), m.exponents().begin(), m.exponents().end());
  });
  if (it == last || !std::equal(it->exponents().begin(), it->exponents().end(), alpha.begin())) return -1;
  return static_cast<int>(it - idx_.begin());
}

namespace {

constexpr int kBinomialMax = 300;

const std::vector<std::vector<double>>& binomial_table() {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t(kBinomialMax + 1);
    for (int n = 0; n <= kBinomialMax; ++n) {
      t[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n) + 1, 1.0);
      for (int k = 1; k < n; ++k)
        t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] =
            t[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k) - 1] +
            t[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k)];
    }
    return t;
  }();
  return table;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n > kBinomialMax) throw std::invalid_argument("binomial: n too large");
  return binomial_table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

double factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171, 1.0);
    for (int i = 1; i <= 170; ++i) t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i) - 1] * i;
    return t;
  }();
  if (n < 0 || n > 170) throw std::invalid_argument("factorial: out of double range");
  return table[static_cast<std::size_t>(n)];
}

double multi_factorial(std::span<const int> alpha) {
  double p = 1.0;
  for (int v : alpha) p *= factorial(v);
  return p;
}

}  // namespace holodyn
