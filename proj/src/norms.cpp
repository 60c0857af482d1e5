#include "holodyn/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "holodyn/kernels.hpp"
#include "holodyn/rng.hpp"

namespace holodyn {

namespace {

double eval_hom(const HomogeneousPart& p, const IndexTable& tab, std::span<const cplx> z) {
  int begin = tab.degree_offset(p.degree);
  cplx sum{};
  for (std::size_t i = 0; i < p.coeff.size(); ++i) {
    if (p.coeff[i] == cplx{}) continue;
    const MultiIndex& alpha = tab.at(begin + static_cast<int>(i));
    cplx zp = 1.0;
    for (int v = 0; v < p.dim; ++v)
      for (int rep = 0; rep < alpha[v]; ++rep) zp *= z[static_cast<std::size_t>(v)];
    sum += p.coeff[i] * zp;
  }
  return std::abs(sum);
}

void random_sphere_point(Rng& rng, std::vector<cplx>& z) {
  double norm2 = 0.0;
  for (auto& v : z) {
    v = rng.gaussian();
    norm2 += std::norm(v);
  }
  double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : z) v *= inv;
}

double sup_sampled_norm(const HomogeneousPart& p, const NormBackend& b) {
  if (b.sample_count <= 0)
    throw std::invalid_argument("hom_norm: sup_sampled backend needs a positive sample count");
  auto tab = IndexTable::get(p.dim, p.degree);
  Rng rng(b.seed);
  std::vector<cplx> z(static_cast<std::size_t>(p.dim));
  std::vector<cplx> best(static_cast<std::size_t>(p.dim));
  double max_val = -1.0;
  for (int s = 0; s < b.sample_count; ++s) {
    random_sphere_point(rng, z);
    double v = eval_hom(p, *tab, z);
    if (v > max_val) {
      max_val = v;
      best = z;
    }
  }
  // Local refinement: shrinking gaussian perturbations around the incumbent.
  std::vector<cplx> cand(static_cast<std::size_t>(p.dim));
  for (int round = 0; round < b.refine_rounds; ++round) {
    double sigma = 0.5 / static_cast<double>(1 << round);
    int tries = std::max(8, b.sample_count / 4);
    for (int s = 0; s < tries; ++s) {
      double norm2 = 0.0;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        cand[i] = best[i] + sigma * rng.gaussian();
        norm2 += std::norm(cand[i]);
      }
      double inv = 1.0 / std::sqrt(norm2);
      for (auto& v : cand) v *= inv;
      double val = eval_hom(p, *tab, cand);
      if (val > max_val) {
        max_val = val;
        best = cand;
      }
    }
  }
  return max_val;
}

}  // namespace

const char* norm_kind_name(NormKind kind) {
  switch (kind) {
    case NormKind::bombieri:
      return "bombieri";
    case NormKind::coeff_l1:
      return "coeff_l1";
    default:
      return "sup_sampled";
  }
}

double hom_norm(const HomogeneousPart& p, const NormBackend& backend) {
  switch (backend.kind) {
    case NormKind::bombieri: {
      if (p.coeff.empty()) return 0.0;
      if (p.dim == 1) return std::abs(p.coeff[0]);
      auto tab = IndexTable::get(p.dim, p.degree);
      int begin = tab->degree_offset(p.degree);
      double kfact = factorial(p.degree);
      std::vector<double> w(p.coeff.size());
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = multi_factorial(tab->at(begin + static_cast<int>(i)).exponents()) / kfact;
      return std::sqrt(kernels::weighted_abs2(w.data(), p.coeff.data(), p.coeff.size()));
    }
    case NormKind::coeff_l1:
      return kernels::abs_sum(p.coeff.data(), p.coeff.size());
    default:
      return sup_sampled_norm(p, backend);
  }
}

double dual_vector_norm(std::span<const cplx> gamma, const NormBackend& backend) {
  if (backend.kind == NormKind::coeff_l1) return kernels::abs_sum(gamma.data(), gamma.size());
  double s = 0.0;
  for (cplx g : gamma) s += std::norm(g);
  return std::sqrt(s);
}

SeminormValue seminorm(const TaylorPoly& f, const SeminormFamily& family, double param) {
  if (!(param > 0.0)) throw std::invalid_argument("seminorm: parameter must be positive");
  SeminormValue out;
  double pk = 1.0;
  int top = std::min(f.valid_degree(), f.trunc_degree());
  for (int k = 0; k <= top; ++k) {
    HomogeneousPart p = hom_part(f, k);
    double nk = hom_norm(p, family.backend);
    if (family.flavor == SeminormFlavor::q_r) nk *= factorial(k);
    double term = pk * nk;
    out.value += term;
    out.last_term = term;
    out.degrees_used = k + 1;
    pk *= param;
  }
  return out;
}

LimsupEstimate limsup_type(const TaylorPoly& f, const NormBackend& backend, int window) {
  if (f.valid_degree() < 4) throw std::invalid_argument("limsup_type: needs valid_degree >= 4");
  LimsupEstimate est;
  int top = f.valid_degree();
  est.window_end = top;
  est.window_begin = std::max(1, top - window + 1);
  for (int k = est.window_begin; k <= top; ++k) {
    double nk = hom_norm(hom_part(f, k), backend);
    if (nk <= 0.0) continue;
    // (k! * nk)^(1/k), via logs to dodge overflow.
    double v = std::exp((std::lgamma(static_cast<double>(k) + 1.0) + std::log(nk)) /
                        static_cast<double>(k));
    est.value = std::max(est.value, v);
  }
  return est;
}

double c_kl_bound(int k, int l) {
  if (k < 0 || l < 0) throw std::invalid_argument("c_kl_bound: negative index");
  if (k == 0 || l == 0) return 1.0;
  double dk = k, dl = l, ds = k + l;
  double ln = ds * std::log(ds) - std::lgamma(ds + 1.0) + std::lgamma(dk + 1.0) -
              dk * std::log(dk) + std::lgamma(dl + 1.0) - dl * std::log(dl);
  return std::exp(ln);
}

double c_kl_relaxed(int k, int l) {
  if (k == 0 || l == 0) return 1.0;
  double e2 = std::exp(2.0);
  return e2 * std::sqrt(static_cast<double>(k) * l / (static_cast<double>(k) + l));
}

double c_eps_constant(double eps, int k_max) {
  if (!(eps > 0.0)) throw std::invalid_argument("c_eps_constant: eps must be positive");
  double best = 1.0;
  double denom = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    denom *= 1.0 + eps;
    for (int l = 0; l <= k; ++l) best = std::max(best, c_kl_bound(k, l) / denom);
  }
  return best;
}

TaylorPoly contract_power(const TaylorPoly& p, std::span<const cplx> a, int l) {
  if (l < 0) throw std::invalid_argument("contract_power: negative order");
  TaylorPoly out = p;
  for (int i = 0; i < l; ++i) out = directional_derivative(out, a);
  return scale(out, 1.0 / factorial(l));
}

HolomorphyTypeCheck check_holomorphy_type(const NormBackend& backend, int trials,
                                          std::uint64_t seed, double slack) {
  if (trials < 1) throw std::invalid_argument("check_holomorphy_type: trials must be >= 1");
  constexpr int kMaxDegree = 6;
  HolomorphyTypeCheck out;
  out.trials = trials;
  out.envelope_c = 2.0;
  // One record per (k, l); ratios maxed over trials.
  std::vector<std::vector<double>> ratio(kMaxDegree + 1);
  for (int k = 1; k <= kMaxDegree; ++k) ratio[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(k) + 1, 0.0);

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    int n = rng.uniform_int(1, 3);
    int k = rng.uniform_int(1, kMaxDegree);
    TaylorPoly p = TaylorPoly::zero(n, k);
    auto block_begin = p.table().degree_offset(k);
    auto block_count = p.table().degree_count(k);
    for (int i = 0; i < block_count; ++i)
      p.mutable_data()[static_cast<std::size_t>(block_begin + i)] = rng.gaussian();
    double pnorm = hom_norm(hom_part(p, k), backend);
    if (pnorm < 1e-9) {
      --t;
      continue;
    }
    std::vector<cplx> a(static_cast<std::size_t>(n));
    for (auto& v : a) v = rng.gaussian();
    double anorm = dual_vector_norm(a, backend);
    if (anorm < 1e-9) {
      --t;
      continue;
    }
    for (int l = 0; l <= k; ++l) {
      TaylorPoly q = contract_power(p, a, l);
      double qnorm = hom_norm(hom_part(q, k - l), backend);
      double r = qnorm / (pnorm * std::pow(anorm, l));
      auto& slot = ratio[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      slot = std::max(slot, r);
    }
  }

  out.ok = true;
  for (int k = 1; k <= kMaxDegree; ++k) {
    double bound = std::pow(out.envelope_c, k);
    for (int l = 0; l <= k; ++l) {
      double r = ratio[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      out.records.push_back({k, l, r, bound});
      out.worst_margin = std::max(out.worst_margin, r / bound);
      if (r > bound * (1.0 + slack)) out.ok = false;
    }
  }
  return out;
}

}  // namespace holodyn
