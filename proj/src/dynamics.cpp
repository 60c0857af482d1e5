#include "holodyn/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "holodyn/kernels.hpp"
#include "holodyn/rng.hpp"

namespace holodyn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rho(double t) { return t / (1.0 + t); }

void reject_trivial(const OperatorSymbol& op, const char* where) {
  if (op.is_trivial())
    throw std::invalid_argument(std::string(where) + ": operator is a multiple of the identity");
}

}  // namespace

double FrechetMetric::combine(std::span<const double> seminorms) const {
  double d = 0.0;
  double w = 0.5;
  for (double p : seminorms) {
    d += w * rho(p);
    w *= 0.5;
  }
  return d;
}

std::vector<double> FrechetMetric::seminorm_ledger(const TaylorPoly& f,
                                                   const TaylorPoly& g) const {
  TaylorPoly h = add_scaled(f, -1.0, g);
  SeminormFamily fam{backend, SeminormFlavor::p_s, {}};
  std::vector<double> ps(s_grid.size());
  for (std::size_t m = 0; m < s_grid.size(); ++m) ps[m] = seminorm(h, fam, s_grid[m]).value;
  return ps;
}

double FrechetMetric::distance(const TaylorPoly& f, const TaylorPoly& g) const {
  return combine(seminorm_ledger(f, g));
}

OrbitResult run_orbit(const OperatorSymbol& op, const TaylorPoly& f, int horizon,
                      const FrechetMetric& metric, const TaylorPoly& target, double delta,
                      const OrbitParams& params) {
  reject_trivial(op, "run_orbit");
  if (horizon < 1) throw std::invalid_argument("run_orbit: horizon must be positive");

  OrbitResult out;
  out.record.requested = horizon;
  int steps = horizon;
  const int cost = op.validity_cost();
  if (cost > 0 && !f.entire()) {
    int budget = f.valid_degree() / cost;
    if (budget < horizon) {
      steps = budget;
      out.record.budget_exhausted = true;
    }
  }

  TaylorPoly state = f;
  out.density.liminf_proxy = 1.0;
  for (int n = 1; n <= steps; ++n) {
    state = apply(op, state);
    if (!state.has_information()) {
      out.record.budget_exhausted = true;
      break;
    }
    if (state.contaminated()) out.record.contaminated = true;
    std::vector<double> ledger = metric.seminorm_ledger(state, target);
    double d = metric.combine(ledger);
    bool visited = d < delta;
    if (visited) ++out.density.visits;
    double running = static_cast<double>(out.density.visits) / n;
    out.record.steps.push_back({d, visited, running, std::move(ledger)});
    out.density.liminf_proxy = std::min(out.density.liminf_proxy, running);
    out.record.completed = n;
    if (params.growth_cadence > 0 && n % params.growth_cadence == 0 &&
        max_coeff(state, state.trunc_degree()) > 0.0) {
      GrowthFit fit = growth_fit(state, params.growth_radii, params.growth_samples);
      out.record.growth.push_back({n, fit.slope, fit.reliable});
    }
  }
  if (out.record.completed > 0)
    out.density.frequency =
        static_cast<double>(out.density.visits) / out.record.completed;
  else
    out.density.liminf_proxy = 0.0;
  return out;
}

OrbitResult run_orbit_combo(const OperatorSymbol& op, const ExpCombo& combo, int horizon,
                            const FrechetMetric& metric, double delta, int eval_degree,
                            const OrbitParams& params) {
  reject_trivial(op, "run_orbit_combo");
  if (horizon < 1) throw std::invalid_argument("run_orbit_combo: horizon must be positive");
  if (combo.weight.empty()) throw std::invalid_argument("run_orbit_combo: empty combination");

  const std::size_t nodes = combo.weight.size();
  auto table = IndexTable::get(combo.dim, eval_degree);
  const std::size_t rows = static_cast<std::size_t>(table->size());

  // E[pos][m] = coefficient `pos` of e^{gamma_m}; rows contiguous so each
  // coefficient of the state is one unconjugated dot product per step.
  std::vector<cplx> matrix(rows * nodes);
  std::vector<cplx> rot(nodes);
  for (std::size_t m = 0; m < nodes; ++m) {
    TaylorPoly e = exp_of_linear(combo.gamma[m], eval_degree);
    for (std::size_t pos = 0; pos < rows; ++pos) matrix[pos * nodes + m] = e.data()[pos];
    rot[m] = borel_eval(op, combo.gamma[m]);
  }

  // Per-degree hom-norm weights for the metric backend.
  const bool l1 = metric.backend.kind == NormKind::coeff_l1;
  std::vector<std::vector<double>> bombieri_w;
  if (!l1) {
    bombieri_w.resize(static_cast<std::size_t>(eval_degree) + 1);
    for (int k = 0; k <= eval_degree; ++k) {
      int begin = table->degree_offset(k);
      int count = table->degree_count(k);
      auto& w = bombieri_w[static_cast<std::size_t>(k)];
      w.resize(static_cast<std::size_t>(count));
      double kfact = factorial(k);
      for (int i = 0; i < count; ++i)
        w[static_cast<std::size_t>(i)] =
            multi_factorial(table->at(begin + i).exponents()) / kfact;
    }
  }

  std::vector<cplx> u(combo.weight.begin(), combo.weight.end());
  std::vector<cplx> state(rows);
  std::vector<double> ps(metric.s_grid.size());

  OrbitResult out;
  out.record.requested = horizon;
  out.density.liminf_proxy = 1.0;
  for (int n = 1; n <= horizon; ++n) {
    kernels::cmul(u.data(), rot.data(), nodes);
    for (std::size_t pos = 0; pos < rows; ++pos)
      state[pos] = kernels::cdotu(u.data(), matrix.data() + pos * nodes, nodes);
    std::fill(ps.begin(), ps.end(), 0.0);
    double norm_k = 0.0;
    for (int k = 0; k <= eval_degree; ++k) {
      int begin = table->degree_offset(k);
      std::size_t count = static_cast<std::size_t>(table->degree_count(k));
      if (l1)
        norm_k = kernels::abs_sum(state.data() + begin, count);
      else
        norm_k = std::sqrt(kernels::weighted_abs2(bombieri_w[static_cast<std::size_t>(k)].data(),
                                                  state.data() + begin, count));
      for (std::size_t i = 0; i < ps.size(); ++i)
        ps[i] += std::pow(metric.s_grid[i], k) * norm_k;
    }
    double d = metric.combine(ps);
    bool visited = d < delta;
    if (visited) ++out.density.visits;
    double running = static_cast<double>(out.density.visits) / n;
    out.record.steps.push_back({d, visited, running, ps});
    out.density.liminf_proxy = std::min(out.density.liminf_proxy, running);
    out.record.completed = n;
    if (params.growth_cadence > 0 && n % params.growth_cadence == 0) {
      TaylorPoly snapshot = TaylorPoly::zero(combo.dim, eval_degree);
      std::copy(state.begin(), state.end(), snapshot.mutable_data().begin());
      snapshot.set_entire(false);
      if (max_coeff(snapshot, eval_degree) > 0.0) {
        GrowthFit fit = growth_fit(snapshot, params.growth_radii, params.growth_samples);
        out.record.growth.push_back({n, fit.slope, fit.reliable});
      }
    }
  }
  out.density.frequency = static_cast<double>(out.density.visits) / horizon;
  return out;
}

GrowthFit growth_fit(const TaylorPoly& f, std::span<const double> radii, int samples_per_radius,
                     std::uint64_t seed) {
  if (radii.empty()) throw std::invalid_argument("growth_fit: empty radius grid");
  if (samples_per_radius < 1) throw std::invalid_argument("growth_fit: need samples");
  for (double r : radii)
    if (!(r > 0.0)) throw std::invalid_argument("growth_fit: radii must be positive");

  GrowthFit fit;
  Rng rng(seed);
  const int n = f.dim();
  std::vector<cplx> z(static_cast<std::size_t>(n));
  bool any_nonzero = false;
  for (double r : radii) {
    double max_val = 0.0;
    for (int s = 0; s < samples_per_radius; ++s) {
      if (n == 1) {
        double theta = kTwoPi * s / samples_per_radius;
        z[0] = r * cplx{std::cos(theta), std::sin(theta)};
      } else {
        double norm2 = 0.0;
        for (auto& v : z) {
          v = rng.gaussian();
          norm2 += std::norm(v);
        }
        double scl = r / std::sqrt(norm2);
        for (auto& v : z) v *= scl;
      }
      max_val = std::max(max_val, std::abs(evaluate(f, z)));
    }
    if (max_val > 0.0) any_nonzero = true;
    fit.radii.push_back(r);
    fit.log_max.push_back(max_val > 0.0 ? std::log(max_val) : -745.0);
  }
  if (!any_nonzero) throw std::runtime_error("growth_fit: function vanishes on the whole grid");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(fit.radii.size());
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    sx += fit.radii[i];
    sy += fit.log_max[i];
    sxx += fit.radii[i] * fit.radii[i];
    sxy += fit.radii[i] * fit.log_max[i];
  }
  double denom = count * sxx - sx * sx;
  if (denom == 0.0) {
    fit.slope = 0.0;
    fit.intercept = sy / count;
  } else {
    fit.slope = (count * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / count;
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    double resid = fit.log_max[i] - (fit.intercept + fit.slope * fit.radii[i]);
    ss += resid * resid;
  }
  fit.residual = std::sqrt(ss / count);
  fit.reliable = radii.back() * std::max(fit.slope, 0.0) <= f.valid_degree() / 3.0;
  return fit;
}

SpanDensityResult span_density_residual(const EigenCurve& curve, const SpanDensityParams& params) {
  reject_trivial(curve.op, "span_density_residual");
  if (params.samples < 1) throw std::invalid_argument("span_density_residual: samples must be >= 1");

  // Draw admissible eigenvalue phases: inside the window (when given),
  // outside the excluded arc.
  Rng rng(params.seed);
  auto excluded = [&](double theta) {
    double lo = params.excluded_arc_lo, hi = params.excluded_arc_hi;
    if (lo == hi) return false;
    double th = std::fmod(theta + kTwoPi, kTwoPi);
    return th >= lo && th < hi;
  };
  std::vector<double> phases;
  int attempts = 0;
  const int max_attempts = 1000 * params.samples;
  while (static_cast<int>(phases.size()) < params.samples && attempts < max_attempts) {
    ++attempts;
    double theta;
    if (params.window_halfwidth > 0.0)
      theta = params.window_center + rng.uniform(-params.window_halfwidth, params.window_halfwidth);
    else
      theta = rng.uniform(0.0, kTwoPi);
    if (excluded(theta)) continue;
    phases.push_back(theta);
  }
  if (static_cast<int>(phases.size()) < std::min(2, params.samples))
    throw std::runtime_error("span_density_residual: fewer than 2 admissible samples found");

  auto table = IndexTable::get(curve.op.dim(), params.trunc_degree);
  const int rows = table->size();
  Eigen::MatrixXcd a(rows, static_cast<int>(phases.size()));
  for (std::size_t i = 0; i < phases.size(); ++i) {
    cplx t = curve_parameter_at(curve, cplx{std::cos(phases[i]), std::sin(phases[i])});
    std::vector<cplx> gamma(curve.gamma0.size());
    for (std::size_t v = 0; v < gamma.size(); ++v) gamma[v] = curve.gamma0[v] + t * curve.delta[v];
    TaylorPoly e = exp_of_linear(gamma, params.trunc_degree);
    for (int rI = 0; rI < rows; ++rI) a(rI, static_cast<int>(i)) = e.data()[static_cast<std::size_t>(rI)];
  }

  int pos = table->position(params.beta);
  if (pos < 0) throw std::invalid_argument("span_density_residual: beta outside the truncation");
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(rows);
  b(pos) = 1.0;

  SpanDensityResult out;
  std::vector<int> m_values = params.m_curve.empty() ? std::vector<int>{params.samples} : params.m_curve;
  for (int m : m_values) {
    int cols = std::min<int>(m, static_cast<int>(phases.size()));
    if (cols < 1) continue;
    Eigen::MatrixXcd sub = a.leftCols(cols);
    Eigen::VectorXcd x = sub.colPivHouseholderQr().solve(b);
    double resid = (sub * x - b).norm() / b.norm();
    out.m_values.push_back(cols);
    out.residuals.push_back(resid);
  }
  if (out.residuals.empty())
    throw std::runtime_error("span_density_residual: no prefix sizes to report");
  out.final_residual = out.residuals.back();
  return out;
}

}  // namespace holodyn
