#include "holodyn/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "holodyn/rng.hpp"

namespace holodyn {

namespace {

cplx inner(std::span<const cplx> gamma, std::span<const cplx> x) {
  cplx s{};
  for (std::size_t i = 0; i < gamma.size(); ++i) s += gamma[i] * x[i];
  return s;
}

}  // namespace

OperatorSymbol OperatorSymbol::generic(int dim, std::vector<std::pair<MultiIndex, cplx>> terms) {
  OperatorSymbol op;
  op.dim_ = dim;
  op.kind_ = Kind::generic;
  for (auto& [alpha, b] : terms) {
    if (alpha.dim() != dim) throw std::invalid_argument("OperatorSymbol: term index has wrong dim");
    if (b == cplx{}) continue;
    op.terms_.emplace_back(alpha, b);
    op.degree_ = std::max(op.degree_, alpha.degree());
  }
  std::sort(op.terms_.begin(), op.terms_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return op;
}

OperatorSymbol OperatorSymbol::translation(std::vector<cplx> z0) {
  OperatorSymbol op;
  op.dim_ = static_cast<int>(z0.size());
  op.kind_ = Kind::translation;
  op.vec_ = std::move(z0);
  return op;
}

OperatorSymbol OperatorSymbol::directional(std::vector<cplx> a) {
  OperatorSymbol op;
  op.dim_ = static_cast<int>(a.size());
  op.kind_ = Kind::directional;
  op.degree_ = 1;
  op.vec_ = std::move(a);
  return op;
}

OperatorSymbol OperatorSymbol::scaled_identity(int dim, cplx lambda) {
  OperatorSymbol op;
  op.dim_ = dim;
  op.kind_ = Kind::scaled_identity;
  op.lambda_ = lambda;
  return op;
}

const char* OperatorSymbol::kind_name() const {
  switch (kind_) {
    case Kind::generic:
      return "generic";
    case Kind::translation:
      return "translation";
    case Kind::directional:
      return "directional_derivative";
    default:
      return "scaled_identity";
  }
}

bool OperatorSymbol::is_trivial() const {
  switch (kind_) {
    case Kind::scaled_identity:
      return true;
    case Kind::translation:
      // tau_0 is the identity.
      return std::all_of(vec_.begin(), vec_.end(), [](cplx v) { return v == cplx{}; });
    case Kind::directional:
      return std::all_of(vec_.begin(), vec_.end(), [](cplx v) { return v == cplx{}; });
    default:
      return degree_ == 0;  // constant symbol = lambda * delta_0
  }
}

TaylorPoly apply(const OperatorSymbol& op, const TaylorPoly& f) {
  if (op.dim() != f.dim()) throw std::invalid_argument("apply: dimension mismatch");
  switch (op.kind()) {
    case OperatorSymbol::Kind::scaled_identity:
      return scale(f, op.lambda());
    case OperatorSymbol::Kind::translation:
      return taylor_shift(f, op.z0());
    case OperatorSymbol::Kind::directional:
      return directional_derivative(f, op.direction());
    default:
      break;
  }
  const IndexTable& tab = f.table();
  TaylorPoly out = TaylorPoly::zero(f.dim(), f.trunc_degree());
  std::vector<int> idx(static_cast<std::size_t>(f.dim()));
  for (const auto& [alpha, b] : op.terms()) {
    // out[nu] += b * c_{nu+alpha} * (nu+alpha)!/nu!
    for (int pos = 0; pos < tab.size(); ++pos) {
      const MultiIndex& nu = tab.at(pos);
      if (nu.degree() + alpha.degree() > f.trunc_degree()) continue;
      double ff = 1.0;
      for (int i = 0; i < f.dim(); ++i) {
        idx[static_cast<std::size_t>(i)] = nu[i] + alpha[i];
        for (int j = nu[i] + 1; j <= nu[i] + alpha[i]; ++j) ff *= j;
      }
      int src = tab.position(idx);
      out.mutable_data()[static_cast<std::size_t>(pos)] +=
          b * ff * f.data()[static_cast<std::size_t>(src)];
    }
  }
  if (f.entire()) {
    out.set_valid_degree(out.trunc_degree());
    out.set_entire(true);
  } else {
    out.set_valid_degree(f.valid_degree() - op.symbol_degree());
    out.set_entire(false);
  }
  out.set_contaminated(f.contaminated());
  return out;
}

cplx borel_eval(const OperatorSymbol& op, std::span<const cplx> gamma) {
  if (static_cast<int>(gamma.size()) != op.dim())
    throw std::invalid_argument("borel_eval: gamma length does not match dim");
  switch (op.kind()) {
    case OperatorSymbol::Kind::scaled_identity:
      return op.lambda();
    case OperatorSymbol::Kind::translation:
      return std::exp(inner(gamma, op.z0()));
    case OperatorSymbol::Kind::directional:
      return inner(gamma, op.direction());
    default: {
      cplx s{};
      for (const auto& [alpha, b] : op.terms()) {
        cplx g = 1.0;
        for (int i = 0; i < op.dim(); ++i)
          for (int rep = 0; rep < alpha[i]; ++rep) g *= gamma[static_cast<std::size_t>(i)];
        s += b * g;
      }
      return s;
    }
  }
}

cplx FunctionalValue::operator()(const TaylorPoly& f) const {
  switch (op_.kind()) {
    case OperatorSymbol::Kind::scaled_identity:
      return op_.lambda() * f.data()[0];
    case OperatorSymbol::Kind::translation:
      return evaluate(f, op_.z0());
    case OperatorSymbol::Kind::directional: {
      // phi(f) = sum_i a_i * (df/dz_i)(0): degree-1 coefficients.
      cplx s{};
      std::vector<int> e(static_cast<std::size_t>(op_.dim()), 0);
      for (int i = 0; i < op_.dim(); ++i) {
        e[static_cast<std::size_t>(i)] = 1;
        s += op_.direction()[static_cast<std::size_t>(i)] * f.coeff(e);
        e[static_cast<std::size_t>(i)] = 0;
      }
      return s;
    }
    default: {
      // phi(f) = sum_alpha b_alpha (D^alpha f)(0) = sum_alpha b_alpha c_alpha alpha!
      cplx s{};
      for (const auto& [alpha, b] : op_.terms())
        s += b * f.coeff(alpha.exponents()) * multi_factorial(alpha.exponents());
      return s;
    }
  }
}

FunctionalValue functional_of(const OperatorSymbol& op) { return FunctionalValue(op); }

double check_commutation(const OperatorSymbol& op, std::span<const cplx> z0, const TaylorPoly& f) {
  TaylorPoly lhs = apply(op, taylor_shift(f, z0));
  TaylorPoly rhs = taylor_shift(apply(op, f), z0);
  int top = std::min(lhs.valid_degree(), rhs.valid_degree());
  if (top < 0) return 0.0;
  return max_coeff_diff(lhs, rhs, top);
}

namespace {

// |Phi| - 1 = 0 on the segment t * u, t in [0, t_max]: scan for a bracket or
// a direct hit, then bisect on g(t) = |Phi(t u)| - 1.
struct RayHit {
  bool found = false;
  double t = 0.0;
};

RayHit search_ray(const OperatorSymbol& op, std::span<const cplx> u, const RaySearch& p) {
  std::vector<cplx> g(u.size());
  auto value = [&](double t) {
    for (std::size_t i = 0; i < u.size(); ++i) g[i] = t * u[i];
    return std::abs(borel_eval(op, g)) - 1.0;
  };
  double prev_t = 0.0;
  double prev_v = value(0.0);
  if (std::abs(prev_v) <= 1e-12) return {true, 0.0};
  for (int s = 1; s <= p.t_samples; ++s) {
    double t = p.t_max * static_cast<double>(s) / p.t_samples;
    double v = value(t);
    if (std::abs(v) <= 1e-12) return {true, t};
    if ((prev_v < 0.0) != (v < 0.0)) {
      double lo = prev_t, hi = t;
      double vlo = prev_v;
      for (int it = 0; it < p.bisect_iters; ++it) {
        double mid = 0.5 * (lo + hi);
        double vm = value(mid);
        if ((vlo < 0.0) != (vm < 0.0))
          hi = mid;
        else {
          lo = mid;
          vlo = vm;
        }
      }
      return {true, 0.5 * (lo + hi)};
    }
    prev_t = t;
    prev_v = v;
  }
  return {};
}

}  // namespace

AlphaEstimate alpha_estimate(const OperatorSymbol& op, const RaySearch& params) {
  if (op.is_trivial())
    throw std::invalid_argument("alpha_estimate: operator is a multiple of the identity");
  AlphaEstimate out;
  switch (op.kind()) {
    case OperatorSymbol::Kind::translation: {
      // |e^{<gamma,z0>}| = 1 at gamma = 0.
      out.alpha = 0.0;
      out.certificate.assign(op.z0().size(), cplx{});
      out.found = true;
      return out;
    }
    case OperatorSymbol::Kind::directional: {
      double norm = 0.0;
      for (cplx v : op.direction()) norm += std::norm(v);
      out.alpha = std::sqrt(norm);
      out.certificate.resize(op.direction().size());
      // gamma = conj(a)/|a|: <gamma, a> = |a| on the unit sphere of gamma.
      for (std::size_t i = 0; i < out.certificate.size(); ++i)
        out.certificate[i] = std::conj(op.direction()[i]) / out.alpha;
      out.found = true;
      return out;
    }
    default:
      break;
  }
  Rng rng(params.seed);
  std::vector<cplx> u(static_cast<std::size_t>(op.dim()));
  double best = -1.0;
  std::vector<cplx> best_gamma;
  for (int d = 0; d < params.directions; ++d) {
    double norm2 = 0.0;
    for (auto& v : u) {
      v = rng.gaussian();
      norm2 += std::norm(v);
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : u) v *= inv;
    RayHit hit = search_ray(op, u, params);
    if (hit.found && (best < 0.0 || hit.t < best)) {
      best = hit.t;
      best_gamma.resize(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) best_gamma[i] = hit.t * u[i];
    }
  }
  if (best < 0.0) {
    out.found = false;
    out.note = "no |Phi| = 1 crossing on the sampled rays; |Phi| may avoid 1 on this set";
    return out;
  }
  out.found = true;
  out.alpha = best;
  out.certificate = std::move(best_gamma);
  out.note = "upper bound from ray search; no global infimum claim";
  return out;
}

ExpRestrictionReport verify_exp_restriction(const OperatorSymbol& op, const TaylorPoly& f,
                                            double r, double eps) {
  if (!(r > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("verify_exp_restriction: r and eps must be positive");
  NormBackend l1{NormKind::coeff_l1};
  // Polynomials have exponential type 0, so any r is admissible for them.
  if (!f.entire() && f.valid_degree() >= 4) {
    double type = limsup_type(f, l1).value;
    if (type > 0.0 && r * (1.0 + eps) * type >= 1.0)
      throw std::domain_error("verify_exp_restriction: r(1+eps) is inadmissible for this type");
  }

  ExpRestrictionReport rep;
  rep.r = r;
  rep.eps = eps;

  // Functional norms per homogeneous degree, in the coeff_l1 dual:
  // ||phi|_m||' = max_{|alpha|=m} |b_alpha| alpha!  (value at z0^alpha for
  // translations, |a_i| for D_a).
  int S = 0;
  std::vector<double> phi_norm;
  switch (op.kind()) {
    case OperatorSymbol::Kind::translation: {
      double m = 0.0;
      for (cplx v : op.z0()) m = std::max(m, std::abs(v));
      rep.c = 1.0;
      rep.big_m = m;
      break;
    }
    case OperatorSymbol::Kind::directional: {
      double m = 0.0;
      for (cplx v : op.direction()) m = std::max(m, std::abs(v));
      phi_norm = {0.0, m};
      S = 1;
      break;
    }
    case OperatorSymbol::Kind::scaled_identity: {
      phi_norm = {std::abs(op.lambda())};
      break;
    }
    default: {
      S = op.symbol_degree();
      phi_norm.assign(static_cast<std::size_t>(S) + 1, 0.0);
      for (const auto& [alpha, b] : op.terms()) {
        auto& slot = phi_norm[static_cast<std::size_t>(alpha.degree())];
        slot = std::max(slot, std::abs(b) * multi_factorial(alpha.exponents()));
      }
      break;
    }
  }
  if (!phi_norm.empty()) {
    rep.c = 0.0;
    for (double v : phi_norm) rep.c = std::max(rep.c, v);
    rep.big_m = 0.0;
    if (rep.c > 0.0)
      for (int m = 1; m <= S; ++m)
        if (phi_norm[static_cast<std::size_t>(m)] > 0.0)
          rep.big_m = std::max(rep.big_m, std::pow(phi_norm[static_cast<std::size_t>(m)] / rep.c,
                                                   1.0 / static_cast<double>(m)));
  }

  SeminormFamily fam{l1, SeminormFlavor::q_r, {}};
  rep.q_r_Tf = seminorm(apply(op, f), fam, r).value;
  rep.q_r_eps_f = seminorm(f, fam, r * (1.0 + eps)).value;
  rep.c_eps = c_eps_constant(eps);
  rep.bound = rep.c * rep.c_eps * std::exp(rep.big_m / r) * rep.q_r_eps_f;
  rep.holds = rep.q_r_Tf <= rep.bound * (1.0 + 1e-12) + 1e-300;
  return rep;
}

SliceFit fit_exponential_slice(const OperatorSymbol& op, std::span<const cplx> gamma,
                               double radius, int samples, double tol) {
  SliceFit fit;
  std::vector<cplx> w_pts(static_cast<std::size_t>(samples));
  std::vector<cplx> values(static_cast<std::size_t>(samples));
  std::vector<cplx> g(gamma.size());
  double min_abs = std::numeric_limits<double>::max();
  double max_abs_v = 0.0;
  for (int m = 0; m < samples; ++m) {
    double th = 2.0 * std::numbers::pi * m / samples;
    cplx w = radius * cplx{std::cos(th), std::sin(th)};
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = w * gamma[i];
    cplx v = borel_eval(op, g);
    w_pts[static_cast<std::size_t>(m)] = w;
    values[static_cast<std::size_t>(m)] = v;
    min_abs = std::min(min_abs, std::abs(v));
    max_abs_v = std::max(max_abs_v, std::abs(v));
  }
  if (min_abs <= 1e-9 * std::max(1.0, max_abs_v)) {
    fit.zero_free = false;
    fit.note = "near-zero symbol value on the sampled circle";
    return fit;
  }
  // Unwrapped log along the loop; total phase increment / 2pi counts the
  // zeros enclosed (argument principle).
  std::vector<cplx> logs(values.size());
  double phase = std::arg(values[0]);
  logs[0] = {std::log(std::abs(values[0])), phase};
  for (std::size_t m = 1; m < values.size(); ++m) {
    double raw = std::arg(values[m]);
    while (raw < phase - std::numbers::pi) raw += 2.0 * std::numbers::pi;
    while (raw > phase + std::numbers::pi) raw -= 2.0 * std::numbers::pi;
    phase = raw;
    logs[m] = {std::log(std::abs(values[m])), phase};
  }
  double last = std::arg(values[0]);
  while (last < phase - std::numbers::pi) last += 2.0 * std::numbers::pi;
  while (last > phase + std::numbers::pi) last -= 2.0 * std::numbers::pi;
  fit.winding = static_cast<int>(std::lround((last - std::arg(values[0])) / (2.0 * std::numbers::pi)));
  if (fit.winding != 0) {
    fit.note = "nonzero winding: Phi has zeros inside the sampled circle";
    return fit;
  }
  // Least squares for log Phi = log C + p w over the circle: sum w_m = 0 and
  // sum |w_m|^2 = N r^2 make the normal equations diagonal.
  cplx sum_log{};
  cplx sum_wlog{};
  for (std::size_t m = 0; m < values.size(); ++m) {
    sum_log += logs[m];
    sum_wlog += std::conj(w_pts[m]) * logs[m];
  }
  cplx log_c = sum_log / static_cast<double>(samples);
  fit.rate = sum_wlog / (static_cast<double>(samples) * radius * radius);
  fit.constant = std::exp(log_c);
  double resid = 0.0;
  for (std::size_t m = 0; m < values.size(); ++m) {
    cplx model = fit.constant * std::exp(fit.rate * w_pts[m]);
    resid = std::max(resid, std::abs(model - values[m]));
  }
  fit.residual = resid / max_abs_v;
  fit.ok = fit.residual <= tol;
  if (!fit.ok) fit.note = "residual above tolerance: slice is not a pure exponential";
  else fit.note = "zero-freeness decided on the sampled set only";
  return fit;
}

}  // namespace holodyn
