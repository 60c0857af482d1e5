#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "holodyn/norms.hpp"
#include "holodyn/operators.hpp"
#include "holodyn/taylor.hpp"

namespace holodyn {

struct CurveParams {
  int grid = 256;          // nodes per loop; even
  int max_loops = 8;       // monodromy continuation budget
  double newton_tol = 1e-13;
  int newton_iters = 80;
  double close_tol = 1e-6;
  bool principal_sweep = false;  // sweep phase upward only instead of the
                                 // centered two-sided sweep for open branches
};

/// Parameterized eigenvector family along the complex line gamma0 + t delta:
/// node m carries t_m with Phi(gamma0 + t_m delta) = lambda_m, lambda_m the
/// uniform circle grid, so e^{gamma(lambda)} is an eigenvector for the
/// eigenvalue lambda.  Curves with root-type monodromy close only after
/// `loops` turns and are stored over the full cover; branches that never
/// close (logarithm-type) are stored over one turn with closed == false.
struct EigenCurve {
  OperatorSymbol op;
  std::vector<cplx> gamma0;
  std::vector<cplx> delta;
  int grid = 0;
  int loops = 1;
  bool closed = false;
  std::vector<cplx> t;            // size grid*loops
  std::vector<double> residual;   // |Phi(gamma(t_m)) - lambda_m|
  std::vector<int> flagged;       // near-critical nodes
  double max_residual = 0.0;
  double max_second_difference = 0.0;  // |d^2 t / d theta^2| proxy
  double max_abs_gamma = 0.0;

  int nodes() const { return grid * loops; }
  /// Eigenvalue at node m: e^{2 pi i (m mod grid) / grid}.
  cplx lambda_at(int m) const;
  std::vector<cplx> gamma_at(int m) const;
  /// 1/loops for closed curves (fraction of the eigenvalue circle covered
  /// per parameter turn); 0 marks an open branch.
  double winding() const { return closed ? 1.0 / loops : 0.0; }
};

/// Builds the curve by predictor-corrector continuation: the seed t0 (found
/// on the line when not supplied) is walked to eigenvalue 1, then swept
/// around the circle with Newton correction at every node.  Throws when Phi
/// is constant along the line, no unimodular seed exists on the sampled
/// line, or Newton diverges with step halving exhausted.
EigenCurve build_curve(const OperatorSymbol& op, std::vector<cplx> gamma0,
                       std::vector<cplx> delta, const CurveParams& params = {});

/// Newton-refine the curve parameter to an exact eigenvalue target, starting
/// from the stored node nearest to the target's phase.
cplx curve_parameter_at(const EigenCurve& curve, cplx lambda_target);

struct CircleVector {
  int curve_index = 0;
  int frequency = 0;  // j
  TaylorPoly value;
  int grid = 0;
  double quad_error_estimate = 0.0;  // Richardson halving
};

/// x_j = integral over the (normalized) circle of lambda^j e^{gamma(lambda)}
/// truncated at trunc_degree, by the uniform-node trapezoid rule.  Requires
/// grid >= 8 (|j| + trunc_degree * max|gamma|) / (2 pi); throws otherwise
/// (aliasing guard).
CircleVector circle_vector(const EigenCurve& curve, int j, int trunc_degree);

/// Finite combination y = sum_l a_l x_{k_l, j_l}.
struct X0Term {
  int curve = 0;
  int j = 0;
  cplx a{1.0, 0.0};
};

struct X0Element {
  std::vector<X0Term> terms;
};

/// u_n: the index shift j_l -> j_l - n.
X0Element shift_u(const X0Element& y, int n);

/// Cache of circle vectors shared across materializations.
class CircleVectorCache {
 public:
  explicit CircleVectorCache(std::vector<const EigenCurve*> curves) : curves_(std::move(curves)) {}
  const CircleVector& get(int curve, int j, int trunc_degree);
  double max_quad_error() const { return max_quad_error_; }

 private:
  std::vector<const EigenCurve*> curves_;
  std::map<std::tuple<int, int, int>, CircleVector> cache_;
  double max_quad_error_ = 0.0;
};

TaylorPoly materialize(const X0Element& y, CircleVectorCache& cache, int trunc_degree);

struct FhcParams {
  int n_terms = 10;
  int j_max = 1 << 20;     // per-application budget for the identity checks
  int trunc_degree = 24;
  double ps_param = 1.0;   // fixed p_s parameter for the series diagnostics
  NormBackend backend;
};

struct FhcReport {
  double max_identity_residual = 0.0;
  int n_terms = 0;
  int j_max_used = 0;
  std::vector<double> term_seminorms_forward;  // p_s(T^n y), n = 1..
  std::vector<double> term_seminorms_u;        // p_s(u_n(y)), n = 1..
  double tail_forward = 0.0;                   // sum over the trailing half
  double tail_u = 0.0;
  double decay_ratio_forward = 1.0;            // fitted geometric ratio
  double decay_ratio_u = 1.0;
  double quad_error_estimate = 0.0;
  bool quadrature_dominates = false;
  std::string note;
};

/// Frequent-hypercyclicity-criterion diagnostics for y in X0:
///  (a) max coefficient error of T^j u_n(y) - u_{n-j}(y), j <= min(n, j_max);
///  (b) Cauchy/summability evidence for the series sum T^n y and sum u_n(y)
///      in the fixed p_s seminorm.
/// Summability at finite range is evidence, not proof, and the report says
/// so; when the quadrature error exceeds the identity residuals the report
/// flags that the two scales are inverted.
FhcReport check_fhc_criterion(const OperatorSymbol& op, CircleVectorCache& cache,
                              const X0Element& y, const FhcParams& params);

/// Exact finite combination sum_m w_m e^{<gamma_m, .>}; the representation
/// convolution operators act on without truncation error (T e^gamma =
/// Phi(gamma) e^gamma rotates the weights).
struct ExpCombo {
  int dim = 0;
  std::vector<std::vector<cplx>> gamma;  // one dual vector per node
  std::vector<cplx> weight;

  TaylorPoly materialize(int trunc_degree) const;
};

struct RandomSeriesSpec {
  std::vector<int> curves;  // indices into the curve set
  int j_window = 12;        // |j| <= J
  std::uint64_t seed = 1;
  int max_terms = 1 << 30;  // series truncation K
  /// Test hook: fixed coefficients overriding the gaussian draw for chosen
  /// (curve, j) pairs.  Draws still happen so the stream is unchanged.
  std::vector<std::tuple<int, int, cplx>> forced;
};

struct Candidate {
  TaylorPoly taylor;
  ExpCombo combo;
  std::vector<double> term_seminorms;  // per-term p_s ledger
};

/// Gaussian random series xi = sum g_{k,j} x_{k,j} over the given curves and
/// |j| <= J, independent standard complex gaussians from the seeded
/// generator.  Identical spec => identical bits.
Candidate sample_candidate(const RandomSeriesSpec& spec, CircleVectorCache& cache,
                           std::vector<const EigenCurve*> curves, int trunc_degree,
                           const SeminormFamily& ledger_family, double ledger_param);

}  // namespace holodyn
