#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holodyn/norms.hpp"
#include "holodyn/operators.hpp"
#include "holodyn/spectral.hpp"
#include "holodyn/taylor.hpp"

namespace holodyn {

/// Translation-invariant metric surrogate for the seminorm topology:
/// d(f,g) = sum_m 2^{-m} rho(p_{s_m}(f-g)) with rho(t) = t/(1+t) and the
/// fixed dyadic weights (m = 1..M), so distances are comparable across runs.
struct FrechetMetric {
  NormBackend backend;
  std::vector<double> s_grid{0.5, 1.0, 2.0};

  double distance(const TaylorPoly& f, const TaylorPoly& g) const;
  /// The p_{s_m}(f - g) ledger behind the distance.
  std::vector<double> seminorm_ledger(const TaylorPoly& f, const TaylorPoly& g) const;
  /// Same combination applied to precomputed p_{s_m} values.
  double combine(std::span<const double> seminorms) const;
};

struct OrbitStep {
  double distance = 0.0;
  bool visited = false;
  double running_density = 0.0;      // V_n / n
  std::vector<double> seminorms;     // p_{s_m}(state - target) ledger
};

struct GrowthSnapshot {
  int step = 0;
  double slope = 0.0;
  bool reliable = false;
};

struct OrbitRecord {
  std::vector<OrbitStep> steps;  // n = 1..completed
  int requested = 0;
  int completed = 0;
  bool budget_exhausted = false;
  bool contaminated = false;  // translation steps on non-entire input
  std::vector<GrowthSnapshot> growth;  // populated per the snapshot cadence
};

struct OrbitParams {
  int growth_cadence = 0;  // 0: no snapshots
  std::vector<double> growth_radii{1.0, 2.0, 3.0, 4.0};
  int growth_samples = 32;
};

struct DensityEstimate {
  int visits = 0;
  double frequency = 0.0;     // V_N / N
  double liminf_proxy = 0.0;  // min over windows [1..m] of V_m / m
};

struct OrbitResult {
  OrbitRecord record;
  DensityEstimate density;
};

/// Iterates f -> T f and records the metric distance to `target` per step,
/// with the per-step seminorm ledger and growth snapshots at the configured
/// cadence.  Trivial operators are rejected.  Generic symbols on non-entire
/// inputs consume validity (S degrees per step); the orbit stops with a
/// partial record once the budget is exhausted.  Translation orbits have no
/// budget.
OrbitResult run_orbit(const OperatorSymbol& op, const TaylorPoly& f, int horizon,
                      const FrechetMetric& metric, const TaylorPoly& target, double delta,
                      const OrbitParams& params = {});

/// Orbit of an exponential combination, stepped exactly: T sum w_m e^{g_m}
/// = sum w_m Phi(g_m) e^{g_m}, so each step rotates the weights and no
/// truncation error accumulates.  Distances are to 0, evaluated from the
/// materialized coefficients up to eval_degree.
OrbitResult run_orbit_combo(const OperatorSymbol& op, const ExpCombo& combo, int horizon,
                            const FrechetMetric& metric, double delta, int eval_degree = 40,
                            const OrbitParams& params = {});

struct GrowthFit {
  double slope = 0.0;  // exponential-type estimate
  double intercept = 0.0;
  double residual = 0.0;  // rms residual of the log fit
  std::vector<double> radii;
  std::vector<double> log_max;
  bool reliable = false;  // r_max * max(slope, 0) <= valid_degree / 3
};

/// Least-squares fit of log max_{|z|=r} |f| against r over the radius grid.
/// Spheres are sampled with samples_per_radius points (uniform angles in one
/// variable, seeded random sphere points otherwise).  Throws when every
/// sample vanishes.
GrowthFit growth_fit(const TaylorPoly& f, std::span<const double> radii, int samples_per_radius,
                     std::uint64_t seed = 1);

struct SpanDensityParams {
  std::vector<int> beta;          // target monomial z^beta
  int samples = 60;               // M
  int trunc_degree = 12;          // D
  double excluded_arc_lo = 0.0;   // excluded eigenvalue phases [lo, hi)
  double excluded_arc_hi = 0.0;
  double window_center = 0.0;     // sample phases near this value ...
  double window_halfwidth = 0.0;  // ... when halfwidth > 0 (else whole circle)
  std::uint64_t seed = 1;
  std::vector<int> m_curve;       // prefix sizes to report (default: samples)
};

struct SpanDensityResult {
  std::vector<int> m_values;
  std::vector<double> residuals;  // relative l2 residual per prefix size
  double final_residual = 0.0;
};

/// Least-squares projection of z^beta onto span{e^{gamma_i}} in coefficient
/// space, with gamma_i on the eigencurve at admissible phases (unimodular
/// eigenvalues outside the excluded arc).  Residuals are reported for nested
/// prefixes, so they are nonincreasing in M by construction.  Throws when
/// fewer than 2 admissible samples can be drawn.
SpanDensityResult span_density_residual(const EigenCurve& curve, const SpanDensityParams& params);

}  // namespace holodyn
