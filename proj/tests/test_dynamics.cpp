#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "holodyn/dynamics.hpp"
#include "holodyn/rng.hpp"
#include "oracles.hpp"

using namespace holodyn;
using holodyn::testing::random_poly;

namespace {

OperatorSymbol d_op() { return OperatorSymbol::directional(std::vector<cplx>{1.0}); }
OperatorSymbol tau1() { return OperatorSymbol::translation(std::vector<cplx>{1.0}); }

}  // namespace

TEST_CASE("Frechet metric axioms") {
  FrechetMetric metric;
  Rng rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    TaylorPoly f = random_poly(rng, 2, 6);
    TaylorPoly g = random_poly(rng, 2, 6);
    TaylorPoly h = random_poly(rng, 2, 6);
    CHECK(metric.distance(f, f) == 0.0);
    CHECK(metric.distance(f, g) == doctest::Approx(metric.distance(g, f)).epsilon(1e-12));
    CHECK(metric.distance(f, h) <=
          (metric.distance(f, g) + metric.distance(g, h)) * (1.0 + 1e-12));
    CHECK(metric.distance(f, g) < 1.0);  // rho-capped with dyadic weights
  }
}

TEST_CASE("run_orbit: fixed point of the translation") {
  FrechetMetric metric;
  TaylorPoly zero = TaylorPoly::zero(1, 8);
  OrbitResult r = run_orbit(tau1(), zero, 50, metric, zero, 0.1);
  CHECK(r.record.completed == 50);
  for (const auto& step : r.record.steps) {
    CHECK(step.distance == 0.0);
    CHECK(step.visited);
  }
  CHECK(r.density.frequency == 1.0);
  CHECK(r.density.liminf_proxy == 1.0);
}

TEST_CASE("run_orbit: differentiation hits the monomial ladder once") {
  FrechetMetric metric;
  TaylorPoly f = TaylorPoly::monomial(1, 12, std::vector<int>{10}, 1.0 / factorial(10));
  TaylorPoly target = TaylorPoly::constant(1, 12, 1.0);
  OrbitResult r = run_orbit(d_op(), f, 15, metric, target, 1e-6);
  CHECK(r.record.completed == 15);  // entire input: no budget
  REQUIRE(static_cast<int>(r.record.steps.size()) == 15);
  for (int n = 1; n <= 15; ++n) {
    bool hit = r.record.steps[static_cast<std::size_t>(n - 1)].visited;
    CHECK(hit == (n == 10));
  }
  CHECK(r.density.visits == 1);
  CHECK(r.density.liminf_proxy == 0.0);
}

TEST_CASE("run_orbit: budget on truncated inputs, rejection of trivial operators") {
  FrechetMetric metric;
  TaylorPoly e = exp_of_linear(std::vector<cplx>{1.0}, 6);
  TaylorPoly target = TaylorPoly::zero(1, 6);
  OrbitResult r = run_orbit(d_op(), e, 10, metric, target, 0.1);
  CHECK(r.record.budget_exhausted);
  CHECK(r.record.completed == 6);

  CHECK_THROWS_AS(run_orbit(OperatorSymbol::scaled_identity(1, 0.5), e, 5, metric, target, 0.1),
                  std::invalid_argument);
  OperatorSymbol constant = OperatorSymbol::generic(1, {{MultiIndex({0}), cplx{2.0, 0.0}}});
  CHECK_THROWS_AS(run_orbit(constant, e, 5, metric, target, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(run_orbit_combo(OperatorSymbol::scaled_identity(1, 0.5), ExpCombo{}, 5, metric, 0.1),
                  std::invalid_argument);
}

TEST_CASE("run_orbit_combo matches the coefficient orbit for exact cases") {
  FrechetMetric metric;
  // Combination of two exponentials under D: both paths are exact.
  ExpCombo combo;
  combo.dim = 1;
  combo.gamma = {{cplx{0.6, 0.2}}, {cplx{-0.4, 0.5}}};
  combo.weight = {cplx{1.0, 0.0}, cplx{0.5, -0.5}};
  const int D = 40;
  TaylorPoly f = combo.materialize(D);
  TaylorPoly target = TaylorPoly::zero(1, D);
  OrbitResult direct = run_orbit(d_op(), f, 8, metric, target, 0.5);
  OrbitResult exact = run_orbit_combo(d_op(), combo, 8, metric, 0.5, D);
  REQUIRE(direct.record.completed == 8);
  REQUIRE(exact.record.completed == 8);
  for (int n = 0; n < 8; ++n)
    CHECK(direct.record.steps[static_cast<std::size_t>(n)].distance ==
          doctest::Approx(exact.record.steps[static_cast<std::size_t>(n)].distance).epsilon(1e-9));
}

TEST_CASE("run_orbit_combo: translation weights rotate without blowup") {
  FrechetMetric metric;
  ExpCombo combo;
  combo.dim = 1;
  combo.gamma = {{cplx{0.0, 1.3}}, {cplx{0.0, -0.7}}, {cplx{0.0, 0.4}}};
  combo.weight = {cplx{0.5, 0.0}, cplx{0.3, 0.2}, cplx{-0.2, 0.6}};
  OrbitResult r = run_orbit_combo(tau1(), combo, 2000, metric, 0.95, 32);
  CHECK(r.record.completed == 2000);
  // Purely imaginary exponents: the orbit is quasi-periodic rather than
  // divergent, so distances stay strictly inside the metric cap.
  for (const auto& step : r.record.steps) CHECK(step.distance < 0.875);
}

TEST_CASE("orbit records carry the seminorm ledger and growth snapshots") {
  FrechetMetric metric;
  TaylorPoly e = exp_of_linear(std::vector<cplx>{2.0}, 40);
  TaylorPoly target = TaylorPoly::zero(1, 40);
  OrbitParams params;
  params.growth_cadence = 2;
  params.growth_radii = {1, 2, 3, 4, 5, 6};
  params.growth_samples = 48;
  OrbitResult r = run_orbit(tau1(), e, 4, metric, target, 0.99, params);
  REQUIRE(r.record.completed == 4);
  for (const auto& step : r.record.steps) {
    REQUIRE(step.seminorms.size() == metric.s_grid.size());
    CHECK(metric.combine(step.seminorms) == doctest::Approx(step.distance));
  }
  REQUIRE(r.record.growth.size() == 2);
  CHECK(r.record.growth[0].step == 2);
  // Translates of e^{2z} keep exponential type 2.
  CHECK(r.record.growth[0].slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("growth_fit recovers exponential types") {
  // e^{2z} at D = 40 over radii 1..6: slope 2 +- 0.05.
  TaylorPoly e2 = exp_of_linear(std::vector<cplx>{2.0}, 40);
  std::vector<double> radii{1, 2, 3, 4, 5, 6};
  GrowthFit fit = growth_fit(e2, radii, 64);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.025));
  CHECK(fit.reliable);

  // Polynomial over decade radii: slope collapses to 0.
  TaylorPoly p = TaylorPoly::zero(1, 12);
  p.set_coeff(std::vector<int>{3}, cplx{1.0, 0.0});
  p.set_coeff(std::vector<int>{1}, cplx{2.0, 0.0});
  std::vector<double> decades;
  for (int d = 4; d <= 10; ++d) decades.push_back(std::pow(10.0, d));
  GrowthFit pfit = growth_fit(p, decades, 32);
  CHECK(std::abs(pfit.slope) <= 0.02);

  // |gamma|_2 = 3 in two variables at D = 40.
  std::vector<cplx> gamma{cplx{3.0 / std::sqrt(2.0), 0.0}, cplx{0.0, 3.0 / std::sqrt(2.0)}};
  TaylorPoly eg = exp_of_linear(gamma, 40);
  std::vector<double> radii2{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  GrowthFit gfit = growth_fit(eg, radii2, 400, 77);
  CHECK(gfit.slope == doctest::Approx(3.0).epsilon(0.034));

  CHECK_THROWS_AS(growth_fit(TaylorPoly::zero(1, 8), radii, 16), std::runtime_error);
}

TEST_CASE("span_density_residual") {
  CurveParams cp;
  cp.grid = 256;
  EigenCurve curve = build_curve(tau1(), {cplx{}}, {cplx{1.0, 0.0}}, cp);

  SUBCASE("M = 1 cannot match a nonzero-degree monomial") {
    SpanDensityParams p;
    p.beta = {2};
    p.samples = 1;
    p.trunc_degree = 12;
    p.seed = 9;
    SpanDensityResult r = span_density_residual(curve, p);
    CHECK(r.final_residual > 1e-3);
  }

  SUBCASE("constants are approximated by near-origin exponentials") {
    SpanDensityParams p;
    p.beta = {0};
    p.samples = 3;
    p.trunc_degree = 12;
    p.window_center = 0.0;
    p.window_halfwidth = 1e-3;
    p.seed = 10;
    SpanDensityResult r = span_density_residual(curve, p);
    CHECK(r.final_residual <= 1e-8);
  }

  SUBCASE("monomial z^2 against 60 exponentials off an excluded arc") {
    SpanDensityParams p;
    p.beta = {2};
    p.samples = 60;
    p.trunc_degree = 12;
    p.excluded_arc_lo = std::numbers::pi / 4;
    p.excluded_arc_hi = std::numbers::pi / 2;
    p.seed = 11;
    p.m_curve = {1, 2, 4, 8, 16, 32, 60};
    SpanDensityResult r = span_density_residual(curve, p);
    CHECK(r.final_residual <= 1e-3);
    for (std::size_t i = 1; i < r.residuals.size(); ++i)
      CHECK(r.residuals[i] <= r.residuals[i - 1] * (1.0 + 1e-9) + 1e-12);
  }

  SUBCASE("unreachable target set") {
    SpanDensityParams p;
    p.beta = {1};
    p.samples = 10;
    p.trunc_degree = 8;
    p.excluded_arc_lo = 0.0;
    p.excluded_arc_hi = 2.0 * std::numbers::pi;  // everything excluded
    p.seed = 12;
    CHECK_THROWS_AS(span_density_residual(curve, p), std::runtime_error);
  }
}
