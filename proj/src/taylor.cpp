#include "holodyn/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "holodyn/kernels.hpp"

namespace holodyn {

namespace {

void check_same_dim(const TaylorPoly& f, const TaylorPoly& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("TaylorPoly: dimension mismatch");
}

void check_dim(const TaylorPoly& f, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(f.dim()) != n)
    throw std::invalid_argument(std::string(what) + ": vector length does not match dim");
}

}  // namespace

TaylorPoly TaylorPoly::zero(int dim, int trunc_degree) {
  TaylorPoly p;
  p.dim_ = dim;
  p.trunc_ = trunc_degree;
  p.valid_ = trunc_degree;
  p.entire_ = true;
  p.tab_ = IndexTable::get(dim, trunc_degree);
  p.c_.assign(static_cast<std::size_t>(p.tab_->size()), cplx{});
  return p;
}

TaylorPoly TaylorPoly::constant(int dim, int trunc_degree, cplx value) {
  TaylorPoly p = zero(dim, trunc_degree);
  p.c_[0] = value;
  return p;
}

TaylorPoly TaylorPoly::monomial(int dim, int trunc_degree, std::span<const int> alpha, cplx c) {
  TaylorPoly p = zero(dim, trunc_degree);
  p.set_coeff(alpha, c);
  return p;
}

std::span<const cplx> TaylorPoly::degree_block(int k) const {
  if (k < 0 || k > trunc_) return {};
  return std::span<const cplx>(c_).subspan(static_cast<std::size_t>(tab_->degree_offset(k)),
                                           static_cast<std::size_t>(tab_->degree_count(k)));
}

cplx TaylorPoly::coeff(std::span<const int> alpha) const {
  int pos = tab_->position(alpha);
  return pos < 0 ? cplx{} : c_[static_cast<std::size_t>(pos)];
}

void TaylorPoly::set_coeff(std::span<const int> alpha, cplx v) {
  int pos = tab_->position(alpha);
  if (pos < 0) throw std::invalid_argument("TaylorPoly::set_coeff: index outside truncation");
  c_[static_cast<std::size_t>(pos)] = v;
}

int TaylorPoly::stored_degree() const {
  for (int k = trunc_; k >= 0; --k) {
    auto block = degree_block(k);
    if (kernels::max_abs(block.data(), block.size()) > 0.0) return k;
  }
  return -1;
}

TaylorPoly add(const TaylorPoly& f, const TaylorPoly& g) { return add_scaled(f, 1.0, g); }

TaylorPoly add_scaled(const TaylorPoly& f, cplx c, const TaylorPoly& g) {
  check_same_dim(f, g);
  int trunc = std::min(f.trunc_degree(), g.trunc_degree());
  TaylorPoly out = TaylorPoly::zero(f.dim(), trunc);
  std::size_t n = out.data().size();
  std::copy_n(f.data().begin(), n, out.mutable_data().begin());
  kernels::caxpy(out.mutable_data().data(), c, g.data().data(), n);
  out.set_valid_degree(std::min(f.valid_degree(), g.valid_degree()));
  bool dropped = false;
  for (const TaylorPoly* p : {&f, &g})
    if (p->trunc_degree() > trunc && p->stored_degree() > trunc) dropped = true;
  out.set_entire(f.entire() && g.entire() && !dropped);
  out.set_contaminated(f.contaminated() || g.contaminated());
  if (out.entire()) out.set_valid_degree(trunc);
  return out;
}

TaylorPoly scale(const TaylorPoly& f, cplx c) {
  TaylorPoly out = f;
  kernels::cscale(out.mutable_data().data(), c, out.mutable_data().size());
  return out;
}

TaylorPoly directional_derivative(const TaylorPoly& f, std::span<const cplx> a) {
  check_dim(f, a.size(), "directional_derivative");
  const IndexTable& tab = f.table();
  TaylorPoly out = TaylorPoly::zero(f.dim(), f.trunc_degree());
  std::vector<int> idx(static_cast<std::size_t>(f.dim()));
  for (int pos = 0; pos < tab.size(); ++pos) {
    const MultiIndex& nu = tab.at(pos);
    if (nu.degree() >= f.trunc_degree()) continue;  // source index nu+e_i would overflow
    cplx acc{};
    for (int i = 0; i < f.dim(); ++i) {
      if (a[static_cast<std::size_t>(i)] == cplx{}) continue;
      std::copy(nu.exponents().begin(), nu.exponents().end(), idx.begin());
      idx[static_cast<std::size_t>(i)] += 1;
      int src = tab.position(idx);
      acc += a[static_cast<std::size_t>(i)] *
             static_cast<double>(idx[static_cast<std::size_t>(i)]) *
             f.data()[static_cast<std::size_t>(src)];
    }
    out.mutable_data()[static_cast<std::size_t>(pos)] = acc;
  }
  if (f.entire()) {
    out.set_valid_degree(out.trunc_degree());
    out.set_entire(true);
  } else {
    out.set_valid_degree(f.valid_degree() - 1);
    out.set_entire(false);
  }
  out.set_contaminated(f.contaminated());
  return out;
}

TaylorPoly partial_derivative(const TaylorPoly& f, const MultiIndex& alpha) {
  if (alpha.dim() != f.dim()) throw std::invalid_argument("partial_derivative: dimension mismatch");
  const IndexTable& tab = f.table();
  TaylorPoly out = TaylorPoly::zero(f.dim(), f.trunc_degree());
  std::vector<int> idx(static_cast<std::size_t>(f.dim()));
  for (int pos = 0; pos < tab.size(); ++pos) {
    const MultiIndex& beta = tab.at(pos);
    if (beta.degree() + alpha.degree() > f.trunc_degree()) continue;
    double ff = 1.0;  // (beta+alpha)!/beta! as a product of integers
    for (int i = 0; i < f.dim(); ++i)
      for (int j = beta[i] + 1; j <= beta[i] + alpha[i]; ++j) ff *= j;
    for (int i = 0; i < f.dim(); ++i) idx[static_cast<std::size_t>(i)] = beta[i] + alpha[i];
    int src = tab.position(idx);
    out.mutable_data()[static_cast<std::size_t>(pos)] =
        ff * f.data()[static_cast<std::size_t>(src)];
  }
  if (f.entire()) {
    out.set_valid_degree(out.trunc_degree());
    out.set_entire(true);
  } else {
    out.set_valid_degree(f.valid_degree() - alpha.degree());
    out.set_entire(false);
  }
  out.set_contaminated(f.contaminated());
  return out;
}

TaylorPoly taylor_shift(const TaylorPoly& f, std::span<const cplx> z0) {
  check_dim(f, z0.size(), "taylor_shift");
  const IndexTable& tab = f.table();
  const int n = f.dim();
  const int D = f.trunc_degree();

  // Per-variable power tables z0_i^g.
  std::vector<std::vector<cplx>> pow(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& pi = pow[static_cast<std::size_t>(i)];
    pi.assign(static_cast<std::size_t>(D) + 1, 1.0);
    for (int g = 1; g <= D; ++g) pi[static_cast<std::size_t>(g)] = pi[static_cast<std::size_t>(g) - 1] * z0[static_cast<std::size_t>(i)];
  }

  TaylorPoly out = TaylorPoly::zero(n, D);
  std::vector<int> beta(static_cast<std::size_t>(n));
  for (int pos = 0; pos < tab.size(); ++pos) {
    cplx ca = f.data()[static_cast<std::size_t>(pos)];
    if (ca == cplx{}) continue;
    const MultiIndex& alpha = tab.at(pos);
    // Odometer over all beta <= alpha: out[beta] += c_alpha * prod C(a_i,b_i) z0^(a-b).
    std::fill(beta.begin(), beta.end(), 0);
    while (true) {
      double w = 1.0;
      cplx zp = 1.0;
      for (int i = 0; i < n; ++i) {
        w *= binomial(alpha[i], beta[static_cast<std::size_t>(i)]);
        zp *= pow[static_cast<std::size_t>(i)][static_cast<std::size_t>(alpha[i] - beta[static_cast<std::size_t>(i)])];
      }
      int bpos = tab.position(beta);
      out.mutable_data()[static_cast<std::size_t>(bpos)] += ca * w * zp;
      int i = n - 1;
      while (i >= 0 && beta[static_cast<std::size_t>(i)] == alpha[i]) {
        beta[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      beta[static_cast<std::size_t>(i)] += 1;
    }
  }

  if (f.entire()) {
    out.set_valid_degree(D);
    out.set_entire(true);
    out.set_contaminated(f.contaminated());
  } else {
    // Unknown tail coefficients of f leak into every output degree.
    out.set_valid_degree(f.valid_degree());
    out.set_entire(false);
    out.set_contaminated(true);
  }
  return out;
}

cplx evaluate(const TaylorPoly& f, std::span<const cplx> z) {
  check_dim(f, z.size(), "evaluate");
  const IndexTable& tab = f.table();
  const int n = f.dim();
  const int D = f.trunc_degree();
  std::vector<std::vector<cplx>> pow(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& pi = pow[static_cast<std::size_t>(i)];
    pi.assign(static_cast<std::size_t>(D) + 1, 1.0);
    for (int g = 1; g <= D; ++g) pi[static_cast<std::size_t>(g)] = pi[static_cast<std::size_t>(g) - 1] * z[static_cast<std::size_t>(i)];
  }
  cplx total{};
  for (int k = 0; k <= D; ++k) {
    cplx deg_sum{};
    int begin = tab.degree_offset(k);
    int end = begin + tab.degree_count(k);
    for (int pos = begin; pos < end; ++pos) {
      cplx c = f.data()[static_cast<std::size_t>(pos)];
      if (c == cplx{}) continue;
      const MultiIndex& alpha = tab.at(pos);
      cplx zp = 1.0;
      for (int i = 0; i < n; ++i) zp *= pow[static_cast<std::size_t>(i)][static_cast<std::size_t>(alpha[i])];
      deg_sum += c * zp;
    }
    total += deg_sum;
  }
  return total;
}

TaylorPoly exp_of_linear(std::span<const cplx> gamma, int trunc_degree) {
  if (trunc_degree < 0) throw std::invalid_argument("exp_of_linear: negative degree");
  const int n = static_cast<int>(gamma.size());
  TaylorPoly out = TaylorPoly::zero(n, trunc_degree);
  // Per-variable terms gamma_i^a / a!; the coefficient of z^alpha is their
  // product, built as for the scalar exponential series to avoid overflow.
  std::vector<std::vector<cplx>> term(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& ti = term[static_cast<std::size_t>(i)];
    ti.assign(static_cast<std::size_t>(trunc_degree) + 1, 1.0);
    for (int a = 1; a <= trunc_degree; ++a)
      ti[static_cast<std::size_t>(a)] = ti[static_cast<std::size_t>(a) - 1] * gamma[static_cast<std::size_t>(i)] / static_cast<double>(a);
  }
  const IndexTable& tab = out.table();
  for (int pos = 0; pos < tab.size(); ++pos) {
    const MultiIndex& alpha = tab.at(pos);
    cplx c = 1.0;
    for (int i = 0; i < n; ++i) c *= term[static_cast<std::size_t>(i)][static_cast<std::size_t>(alpha[i])];
    out.mutable_data()[static_cast<std::size_t>(pos)] = c;
  }
  bool zero_gamma = true;
  for (cplx g : gamma)
    if (g != cplx{}) zero_gamma = false;
  out.set_entire(zero_gamma);
  out.set_valid_degree(trunc_degree);
  return out;
}

HomogeneousPart hom_part(const TaylorPoly& f, int k) {
  HomogeneousPart p;
  p.dim = f.dim();
  p.degree = k;
  auto block = f.degree_block(k);
  p.coeff.assign(block.begin(), block.end());
  return p;
}

double max_coeff_diff(const TaylorPoly& f, const TaylorPoly& g, int up_to_degree) {
  check_same_dim(f, g);
  double m = 0.0;
  for (int k = 0; k <= up_to_degree; ++k) {
    auto a = f.degree_block(k);
    auto b = g.degree_block(k);
    if (a.empty() && b.empty()) continue;
    if (a.size() == b.size()) {
      m = std::max(m, kernels::max_abs_diff(a.data(), b.data(), a.size()));
    } else {
      const auto& longer = a.size() > b.size() ? a : b;
      const auto& shorter = a.size() > b.size() ? b : a;
      m = std::max(m, kernels::max_abs_diff(longer.data(), shorter.data(), shorter.size()));
      m = std::max(m, kernels::max_abs(longer.data() + shorter.size(), longer.size() - shorter.size()));
    }
  }
  return m;
}

double max_coeff(const TaylorPoly& f, int up_to_degree) {
  double m = 0.0;
  for (int k = 0; k <= std::min(up_to_degree, f.trunc_degree()); ++k) {
    auto block = f.degree_block(k);
    m = std::max(m, kernels::max_abs(block.data(), block.size()));
  }
  return m;
}

}  // namespace holodyn
