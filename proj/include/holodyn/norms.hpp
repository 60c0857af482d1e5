#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holodyn/taylor.hpp"

namespace holodyn {

/// Norm family on homogeneous polynomials.
///
///   bombieri    sqrt(sum_alpha |c_alpha|^2 / multinomial(k; alpha)); the
///               Hilbert-Schmidt norm of the associated symmetric tensor.
///               Satisfies norm(gamma^k) = |gamma|_2^k exactly.
///   coeff_l1    sum_alpha |c_alpha|; the power identity holds with the
///               l1 norm of gamma.
///   sup_sampled max |P(z)| over seeded random points of the Euclidean unit
///               sphere with local refinement; a lower bound for the sup.
enum class NormKind { bombieri, coeff_l1, sup_sampled };

struct NormBackend {
  NormKind kind = NormKind::bombieri;
  // sup_sampled only:
  int sample_count = 512;
  int refine_rounds = 4;
  std::uint64_t seed = 1;
};

const char* norm_kind_name(NormKind kind);

double hom_norm(const HomogeneousPart& p, const NormBackend& backend);

/// The vector norm on dual coefficients for which norm(gamma^k) = |gamma|^k:
/// Euclidean for bombieri / sup_sampled, l1 for coeff_l1.
double dual_vector_norm(std::span<const cplx> gamma, const NormBackend& backend);

enum class SeminormFlavor {
  p_s,  // sum_k s^k ||d^k f(0)/k!||  = sum_k s^k   ||P_k||
  q_r,  // sum_k r^k ||d^k f(0)||     = sum_k r^k k! ||P_k||
};

struct SeminormFamily {
  NormBackend backend;
  SeminormFlavor flavor = SeminormFlavor::p_s;
  std::vector<double> params;  // increasing positive grid
};

struct SeminormValue {
  double value = 0.0;
  double last_term = 0.0;  // tail indicator: magnitude of the top degree term
  int degrees_used = 0;
};

/// Truncated seminorm over degrees <= valid_degree.  Throws on param <= 0.
SeminormValue seminorm(const TaylorPoly& f, const SeminormFamily& family, double param);

struct LimsupEstimate {
  double value = 0.0;
  int window_begin = 0;
  int window_end = 0;  // inclusive
};

/// Exponential-type estimate: max over the trailing `window` degrees of
/// (k! ||P_k||)^(1/k).  Finite-truncation stand-in for
/// limsup_k ||d^k f(0)||^(1/k); requires valid_degree >= 4.
LimsupEstimate limsup_type(const TaylorPoly& f, const NormBackend& backend, int window = 8);

/// Stirling-type contraction constant bound
///   (k+l)^(k+l)/(k+l)! * k!/k^k * l!/l^l,
/// with value 1 when k*l == 0.
double c_kl_bound(int k, int l);

/// The relaxed envelope e^2 sqrt(kl/(k+l)) (1 when k*l == 0).
double c_kl_relaxed(int k, int l);

/// c_eps with c_kl <= c_eps (1+eps)^k for all 0 <= l <= k, computed as the
/// max of c_kl_bound(k,l)/(1+eps)^k over k <= k_max (the tail vanishes).
double c_eps_constant(double eps, int k_max = 400);

/// P_{a^l}: the l-fold directional contraction with the binomial factor
/// baked in, computed as (D_a)^l P / l!.  For homogeneous P of degree k this
/// is binom(k,l) * Pcheck(a^l, x^{k-l}).
TaylorPoly contract_power(const TaylorPoly& p, std::span<const cplx> a, int l);

struct HolomorphyTypeCheck {
  struct Record {
    int k = 0;
    int l = 0;
    double ratio = 0.0;  // max observed ||P_{a^l}|| / (||P|| |a|^l)
    double bound = 0.0;  // envelope c^k
  };
  std::vector<Record> records;
  double envelope_c = 2.0;
  double worst_margin = 0.0;  // max ratio/bound
  bool ok = false;
  int trials = 0;
};

/// Empirical check of the contraction inequality on random homogeneous
/// polynomials (k <= 6, n <= 3): ratios are compared against the envelope
/// c^k with c = 2, which dominates the sharp binomial constant for these
/// backends.  `slack` is the allowed relative excess.
HolomorphyTypeCheck check_holomorphy_type(const NormBackend& backend, int trials,
                                          std::uint64_t seed, double slack = 1e-9);

}  // namespace holodyn
