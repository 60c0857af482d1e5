#include "holodyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "holodyn/kernels.hpp"
#include "holodyn/rng.hpp"

namespace holodyn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx circle_point(double theta) { return {std::cos(theta), std::sin(theta)}; }

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Phi restricted to the line t -> gamma0 + t delta: a univariate polynomial
// for finite-order symbols, an exponential for translations.
struct LineSymbol {
  bool is_exp = false;
  std::vector<cplx> coef;  // ascending powers of t
  cplx e0{}, e1{};         // exp(e0 + e1 t)

  cplx value(cplx t) const {
    if (is_exp) return std::exp(e0 + e1 * t);
    cplx v{};
    for (std::size_t i = coef.size(); i-- > 0;) v = v * t + coef[i];
    return v;
  }

  cplx derivative(cplx t) const {
    if (is_exp) return e1 * value(t);
    cplx v{};
    for (std::size_t i = coef.size(); i-- > 1;) v = v * t + static_cast<double>(i) * coef[i];
    return v;
  }

  bool nonconstant() const {
    if (is_exp) return e1 != cplx{};
    for (std::size_t i = 1; i < coef.size(); ++i)
      if (coef[i] != cplx{}) return true;
    return false;
  }
};

LineSymbol make_line(const OperatorSymbol& op, std::span<const cplx> gamma0,
                     std::span<const cplx> delta) {
  LineSymbol line;
  switch (op.kind()) {
    case OperatorSymbol::Kind::translation:
      line.is_exp = true;
      line.e0 = inner(gamma0, op.z0());
      line.e1 = inner(delta, op.z0());
      return line;
    case OperatorSymbol::Kind::directional:
      line.coef = {inner(gamma0, op.direction()), inner(delta, op.direction())};
      return line;
    case OperatorSymbol::Kind::scaled_identity:
      line.coef = {op.lambda()};
      return line;
    default:
      break;
  }
  line.coef.assign(static_cast<std::size_t>(op.symbol_degree()) + 1, cplx{});
  std::vector<cplx> acc, next;
  for (const auto& [alpha, b] : op.terms()) {
    acc.assign(1, b);
    for (int i = 0; i < op.dim(); ++i) {
      for (int rep = 0; rep < alpha[i]; ++rep) {
        next.assign(acc.size() + 1, cplx{});
        for (std::size_t d = 0; d < acc.size(); ++d) {
          next[d] += acc[d] * gamma0[static_cast<std::size_t>(i)];
          next[d + 1] += acc[d] * delta[static_cast<std::size_t>(i)];
        }
        acc.swap(next);
      }
    }
    for (std::size_t d = 0; d < acc.size(); ++d) line.coef[d] += acc[d];
  }
  return line;
}

struct NewtonOut {
  cplx t;
  double residual;
  bool near_critical = false;
};

NewtonOut newton_to(const LineSymbol& line, cplx t, cplx target, const CurveParams& p) {
  double resid = std::abs(line.value(t) - target);
  const double tol = p.newton_tol * (1.0 + std::abs(target));
  for (int iter = 0; iter < p.newton_iters; ++iter) {
    if (resid <= tol) return {t, resid};
    cplx d = line.derivative(t);
    if (std::abs(d) < 1e-14) return {t, resid, true};
    cplx step = (line.value(t) - target) / d;
    cplx t_new = t - step;
    double r_new = std::abs(line.value(t_new) - target);
    int halvings = 0;
    while (r_new > resid && halvings < 40) {
      step *= 0.5;
      t_new = t - step;
      r_new = std::abs(line.value(t_new) - target);
      ++halvings;
    }
    if (halvings == 40 && r_new > resid)
      throw std::runtime_error("build_curve: Newton divergence, step halving exhausted");
    t = t_new;
    resid = r_new;
  }
  if (resid > tol * 100.0)
    throw std::runtime_error("build_curve: Newton failed to reach the eigenvalue target");
  return {t, resid};
}

// Seed with |Phi| = 1 on the line: the origin when it already sits on the
// circle, otherwise bracket |Phi(rho e^{i phi})| = 1 over a few phases.
cplx find_unimodular_seed(const LineSymbol& line, const CurveParams& p) {
  double v0 = std::abs(line.value(cplx{}));
  if (std::abs(v0 - 1.0) <= 1e-12) return {};
  constexpr int kPhases = 16;
  constexpr int kRadial = 200;
  constexpr double kRhoMax = 16.0;
  for (int ph = 0; ph < kPhases; ++ph) {
    cplx dir = circle_point(kTwoPi * ph / kPhases);
    double prev_rho = 0.0;
    double prev_g = v0 - 1.0;
    for (int s = 1; s <= kRadial; ++s) {
      double rho = kRhoMax * s / kRadial;
      double g = std::abs(line.value(rho * dir)) - 1.0;
      if (std::abs(g) <= 1e-12) return rho * dir;
      if ((prev_g < 0.0) != (g < 0.0)) {
        double lo = prev_rho, hi = rho, glo = prev_g;
        for (int it = 0; it < 100; ++it) {
          double mid = 0.5 * (lo + hi);
          double gm = std::abs(line.value(mid * dir)) - 1.0;
          if ((glo < 0.0) != (gm < 0.0))
            hi = mid;
          else {
            lo = mid;
            glo = gm;
          }
        }
        return 0.5 * (lo + hi) * dir;
      }
      prev_rho = rho;
      prev_g = g;
    }
  }
  (void)p;
  throw std::runtime_error("build_curve: no |Phi| = 1 seed found on the line");
}

}  // namespace

cplx EigenCurve::lambda_at(int m) const { return circle_point(kTwoPi * (m % grid) / grid); }

std::vector<cplx> EigenCurve::gamma_at(int m) const {
  std::vector<cplx> g(gamma0.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = gamma0[i] + t[static_cast<std::size_t>(m)] * delta[i];
  return g;
}

EigenCurve build_curve(const OperatorSymbol& op, std::vector<cplx> gamma0,
                       std::vector<cplx> delta, const CurveParams& params) {
  if (static_cast<int>(gamma0.size()) != op.dim() || static_cast<int>(delta.size()) != op.dim())
    throw std::invalid_argument("build_curve: gamma0/delta length does not match dim");
  if (params.grid < 8 || params.grid % 2 != 0)
    throw std::invalid_argument("build_curve: grid must be even and >= 8");
  LineSymbol line = make_line(op, gamma0, delta);
  if (!line.nonconstant())
    throw std::invalid_argument("build_curve: Phi is constant along the line");

  EigenCurve curve;
  curve.op = op;
  curve.gamma0 = std::move(gamma0);
  curve.delta = std::move(delta);
  curve.grid = params.grid;

  const int N = params.grid;
  cplx t0 = find_unimodular_seed(line, params);

  // Walk the phase from arg Phi(t0) to 0 so node 0 sits at eigenvalue 1.
  double theta0 = std::arg(line.value(t0));
  int walk = std::max(1, static_cast<int>(std::ceil(std::abs(theta0) * N / kTwoPi)));
  for (int s = 1; s <= walk; ++s) {
    cplx target = circle_point(theta0 * (1.0 - static_cast<double>(s) / walk));
    t0 = newton_to(line, t0, target, params).t;
  }

  std::vector<cplx> ts;
  std::vector<double> res;
  std::vector<int> flagged;
  auto push_node = [&](const NewtonOut& out) {
    if (out.near_critical) flagged.push_back(static_cast<int>(ts.size()));
    ts.push_back(out.t);
    res.push_back(out.residual);
  };
  auto predict = [&]() -> cplx {
    std::size_t k = ts.size();
    if (k >= 2) return 2.0 * ts[k - 1] - ts[k - 2];
    return ts[k - 1];
  };

  push_node(newton_to(line, t0, cplx{1.0, 0.0}, params));
  bool closed = false;
  int loops = 0;
  for (int g = 1; g <= N * params.max_loops; ++g) {
    int m = g % N;
    cplx target = circle_point(kTwoPi * m / N);
    NewtonOut out = newton_to(line, predict(), target, params);
    if (m == 0) {
      if (std::abs(out.t - ts[0]) <= params.close_tol * (1.0 + std::abs(ts[0]))) {
        closed = true;
        loops = g / N;
        break;
      }
      if (g / N == params.max_loops) break;  // open branch
    }
    push_node(out);
  }

  if (!closed && !params.principal_sweep) {
    // Centered two-sided sweep: better-conditioned branch for open curves
    // (parameters stay within half a turn of the seed).
    ts.assign(1, ts[0]);
    res.assign(1, res[0]);
    flagged.clear();
    cplx up = ts[0];
    std::vector<cplx> down_ts(static_cast<std::size_t>(N), cplx{});
    std::vector<double> down_res(static_cast<std::size_t>(N), 0.0);
    for (int m = 1; m <= N / 2; ++m) {
      NewtonOut out = newton_to(line, up, circle_point(kTwoPi * m / N), params);
      up = out.t;
      if (out.near_critical) flagged.push_back(m);
      ts.push_back(out.t);
      res.push_back(out.residual);
    }
    cplx dn = ts[0];
    for (int m = 1; m < N / 2; ++m) {
      NewtonOut out = newton_to(line, dn, circle_point(-kTwoPi * m / N), params);
      dn = out.t;
      if (out.near_critical) flagged.push_back(N - m);
      down_ts[static_cast<std::size_t>(N - m)] = out.t;
      down_res[static_cast<std::size_t>(N - m)] = out.residual;
    }
    for (int m = N / 2 + 1; m < N; ++m) {
      ts.push_back(down_ts[static_cast<std::size_t>(m)]);
      res.push_back(down_res[static_cast<std::size_t>(m)]);
    }
    loops = 1;
  } else if (!closed) {
    ts.resize(static_cast<std::size_t>(N));
    res.resize(static_cast<std::size_t>(N));
    loops = 1;
  }

  curve.closed = closed;
  curve.loops = std::max(1, loops);
  curve.t = std::move(ts);
  curve.residual = std::move(res);
  curve.flagged = std::move(flagged);
  for (double r : curve.residual) curve.max_residual = std::max(curve.max_residual, r);

  const int total = curve.nodes();
  for (int m = 0; m < total; ++m) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < curve.gamma0.size(); ++i)
      norm2 += std::norm(curve.gamma0[i] + curve.t[static_cast<std::size_t>(m)] * curve.delta[i]);
    curve.max_abs_gamma = std::max(curve.max_abs_gamma, std::sqrt(norm2));
  }
  // Second-difference bound in the circle parameter; for open curves skip
  // the wrap pairs (the branch jump is not a smoothness defect).
  double scale = std::pow(N / kTwoPi, 2.0);
  for (int m = 0; m < total; ++m) {
    if (!curve.closed && (m == 0 || m == total - 1)) continue;
    const cplx& a = curve.t[static_cast<std::size_t>((m - 1 + total) % total)];
    const cplx& b = curve.t[static_cast<std::size_t>(m)];
    const cplx& c = curve.t[static_cast<std::size_t>((m + 1) % total)];
    curve.max_second_difference =
        std::max(curve.max_second_difference, std::abs(c - 2.0 * b + a) * scale);
  }
  return curve;
}

cplx curve_parameter_at(const EigenCurve& curve, cplx lambda_target) {
  LineSymbol line = make_line(curve.op, curve.gamma0, curve.delta);
  double theta = std::arg(lambda_target);
  if (theta < 0.0) theta += kTwoPi;
  int m = static_cast<int>(std::lround(theta * curve.grid / kTwoPi)) % curve.grid;
  CurveParams params;
  return newton_to(line, curve.t[static_cast<std::size_t>(m)], lambda_target, params).t;
}

CircleVector circle_vector(const EigenCurve& curve, int j, int trunc_degree) {
  const int N = curve.nodes();
  const double need = 8.0 * (std::abs(j) + trunc_degree * curve.max_abs_gamma) / kTwoPi;
  if (curve.grid < need)
    throw std::invalid_argument(
        "circle_vector: grid too small for requested frequency (aliasing guard needs " +
        std::to_string(static_cast<int>(std::ceil(need))) + " nodes per loop)");

  CircleVector out;
  out.frequency = j;
  out.grid = curve.grid;
  TaylorPoly acc = TaylorPoly::zero(curve.op.dim(), trunc_degree);
  TaylorPoly half = TaylorPoly::zero(curve.op.dim(), trunc_degree);
  const double w_full = 1.0 / N;
  const double w_half = 2.0 / N;
  for (int m = 0; m < N; ++m) {
    double theta = kTwoPi * (m % curve.grid) / curve.grid;
    cplx wj = circle_point(j * theta);
    TaylorPoly e = exp_of_linear(curve.gamma_at(m), trunc_degree);
    kernels::caxpy(acc.mutable_data().data(), wj * w_full, e.data().data(), e.data().size());
    if (m % 2 == 0)
      kernels::caxpy(half.mutable_data().data(), wj * w_half, e.data().data(), e.data().size());
  }
  acc.set_entire(false);
  acc.set_valid_degree(trunc_degree);
  half.set_entire(false);
  half.set_valid_degree(trunc_degree);
  out.quad_error_estimate = max_coeff_diff(acc, half, trunc_degree);
  out.value = std::move(acc);
  return out;
}

X0Element shift_u(const X0Element& y, int n) {
  X0Element out = y;
  for (auto& term : out.terms) term.j -= n;
  return out;
}

const CircleVector& CircleVectorCache::get(int curve, int j, int trunc_degree) {
  auto key = std::make_tuple(curve, j, trunc_degree);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    CircleVector v = circle_vector(*curves_.at(static_cast<std::size_t>(curve)), j, trunc_degree);
    v.curve_index = curve;
    max_quad_error_ = std::max(max_quad_error_, v.quad_error_estimate);
    it = cache_.emplace(key, std::move(v)).first;
  }
  return it->second;
}

TaylorPoly materialize(const X0Element& y, CircleVectorCache& cache, int trunc_degree) {
  if (y.terms.empty()) throw std::invalid_argument("materialize: empty combination");
  TaylorPoly acc;
  bool first = true;
  for (const auto& term : y.terms) {
    const CircleVector& x = cache.get(term.curve, term.j, trunc_degree);
    if (first) {
      acc = scale(x.value, term.a);
      first = false;
    } else {
      kernels::caxpy(acc.mutable_data().data(), term.a, x.value.data().data(),
                     acc.data().size());
    }
  }
  return acc;
}

namespace {

TaylorPoly apply_power(const OperatorSymbol& op, const TaylorPoly& f, int j) {
  if (op.kind() == OperatorSymbol::Kind::translation) {
    std::vector<cplx> z(op.z0());
    for (auto& v : z) v *= static_cast<double>(j);
    return taylor_shift(f, z);
  }
  TaylorPoly out = f;
  for (int i = 0; i < j; ++i) out = apply(op, out);
  return out;
}

// Geometric decay ratio from a least-squares fit of log(term) against n.
double fitted_ratio(std::span<const double> terms) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] <= 0.0) continue;
    double x = static_cast<double>(i + 1);
    double y = std::log(terms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 0.0;
  double denom = count * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return std::exp((count * sxy - sx * sy) / denom);
}

}  // namespace

FhcReport check_fhc_criterion(const OperatorSymbol& op, CircleVectorCache& cache,
                              const X0Element& y, const FhcParams& params) {
  if (op.is_trivial())
    throw std::invalid_argument("check_fhc_criterion: operator is a multiple of the identity");
  FhcReport rep;
  rep.n_terms = params.n_terms;
  rep.j_max_used = std::min(params.j_max, params.n_terms);
  const int D = params.trunc_degree;

  std::vector<TaylorPoly> u(static_cast<std::size_t>(params.n_terms) + 1);
  for (int n = 0; n <= params.n_terms; ++n)
    u[static_cast<std::size_t>(n)] = materialize(shift_u(y, n), cache, D);

  for (int n = 1; n <= params.n_terms; ++n) {
    for (int j = 1; j <= std::min(n, rep.j_max_used); ++j) {
      TaylorPoly lhs = apply_power(op, u[static_cast<std::size_t>(n)], j);
      const TaylorPoly& rhs = u[static_cast<std::size_t>(n - j)];
      int top = std::min(lhs.valid_degree(), rhs.valid_degree());
      if (top < 0) continue;  // identity unobservable past the validity budget
      rep.max_identity_residual =
          std::max(rep.max_identity_residual, max_coeff_diff(lhs, rhs, top));
    }
  }

  SeminormFamily fam{params.backend, SeminormFlavor::p_s, {}};
  rep.term_seminorms_forward.resize(static_cast<std::size_t>(params.n_terms));
  rep.term_seminorms_u.resize(static_cast<std::size_t>(params.n_terms));
  for (int n = 1; n <= params.n_terms; ++n) {
    TaylorPoly fwd = materialize(shift_u(y, -n), cache, D);
    rep.term_seminorms_forward[static_cast<std::size_t>(n - 1)] =
        seminorm(fwd, fam, params.ps_param).value;
    rep.term_seminorms_u[static_cast<std::size_t>(n - 1)] =
        seminorm(u[static_cast<std::size_t>(n)], fam, params.ps_param).value;
  }
  for (int n = params.n_terms / 2; n < params.n_terms; ++n) {
    rep.tail_forward += rep.term_seminorms_forward[static_cast<std::size_t>(n)];
    rep.tail_u += rep.term_seminorms_u[static_cast<std::size_t>(n)];
  }
  rep.decay_ratio_forward = fitted_ratio(rep.term_seminorms_forward);
  rep.decay_ratio_u = fitted_ratio(rep.term_seminorms_u);
  rep.quad_error_estimate = cache.max_quad_error();
  rep.quadrature_dominates = rep.quad_error_estimate > rep.max_identity_residual;
  rep.note =
      "summability of term seminorms at finite range is evidence for unconditional "
      "convergence, not proof";
  return rep;
}

TaylorPoly ExpCombo::materialize(int trunc_degree) const {
  TaylorPoly acc = TaylorPoly::zero(dim, trunc_degree);
  for (std::size_t m = 0; m < weight.size(); ++m) {
    TaylorPoly e = exp_of_linear(gamma[m], trunc_degree);
    kernels::caxpy(acc.mutable_data().data(), weight[m], e.data().data(), e.data().size());
  }
  acc.set_entire(false);
  acc.set_valid_degree(trunc_degree);
  return acc;
}

Candidate sample_candidate(const RandomSeriesSpec& spec, CircleVectorCache& cache,
                           std::vector<const EigenCurve*> curves, int trunc_degree,
                           const SeminormFamily& ledger_family, double ledger_param) {
  if (spec.curves.empty()) throw std::invalid_argument("sample_candidate: no curves selected");
  Rng rng(spec.seed);
  Candidate out;
  out.taylor = TaylorPoly::zero(curves.at(0)->op.dim(), trunc_degree);
  out.taylor.set_entire(false);
  out.combo.dim = out.taylor.dim();

  // Combo nodes: all nodes of every selected curve, in order.
  std::vector<std::size_t> combo_offset;
  for (int k : spec.curves) {
    const EigenCurve& c = *curves.at(static_cast<std::size_t>(k));
    combo_offset.push_back(out.combo.weight.size());
    for (int m = 0; m < c.nodes(); ++m) {
      out.combo.gamma.push_back(c.gamma_at(m));
      out.combo.weight.push_back(cplx{});
    }
  }

  int terms_used = 0;
  for (std::size_t ci = 0; ci < spec.curves.size(); ++ci) {
    int k = spec.curves[ci];
    const EigenCurve& c = *curves.at(static_cast<std::size_t>(k));
    for (int j = -spec.j_window; j <= spec.j_window; ++j) {
      cplx g = rng.gaussian();
      for (const auto& [fk, fj, fv] : spec.forced)
        if (fk == k && fj == j) g = fv;
      if (terms_used >= spec.max_terms) continue;
      ++terms_used;
      if (g == cplx{}) {
        out.term_seminorms.push_back(0.0);
        continue;
      }
      const CircleVector& x = cache.get(k, j, trunc_degree);
      kernels::caxpy(out.taylor.mutable_data().data(), g, x.value.data().data(),
                     out.taylor.data().size());
      out.term_seminorms.push_back(std::abs(g) *
                                   seminorm(x.value, ledger_family, ledger_param).value);
      const double inv = 1.0 / c.nodes();
      for (int m = 0; m < c.nodes(); ++m) {
        double theta = kTwoPi * (m % c.grid) / c.grid;
        out.combo.weight[combo_offset[ci] + static_cast<std::size_t>(m)] +=
            g * circle_point(j * theta) * inv;
      }
    }
  }
  out.taylor.set_valid_degree(trunc_degree);
  return out;
}

}  // namespace holodyn
