#pragma once

#include <string>
#include <utility>
#include <vector>

#include "holodyn/norms.hpp"
#include "holodyn/taylor.hpp"

namespace holodyn {

/// Symbol of an operator commuting with translations.
///
/// A generic symbol Phi(gamma) = sum_alpha b_alpha gamma^alpha acts as
/// f -> sum_alpha b_alpha D^alpha f.  Translation by z0 has the infinite-
/// order symbol gamma -> e^{<gamma,z0>} and is applied exactly by Taylor
/// shift, never by truncating the symbol.  Directional derivative D_a is the
/// degree-one special case; scaled identity is the trivial operator every
/// dynamics entry point rejects.
class OperatorSymbol {
 public:
  enum class Kind { generic, translation, directional, scaled_identity };

  /// Default: the zero symbol (trivial); meaningful values come from the
  /// factories below.
  OperatorSymbol() = default;

  static OperatorSymbol generic(int dim, std::vector<std::pair<MultiIndex, cplx>> terms);
  static OperatorSymbol translation(std::vector<cplx> z0);
  static OperatorSymbol directional(std::vector<cplx> a);
  static OperatorSymbol scaled_identity(int dim, cplx lambda);

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  const char* kind_name() const;

  /// Highest symbol degree S; 0 for translation and scaled identity.
  int symbol_degree() const { return degree_; }
  /// Degrees of validity consumed per application (0 for translation).
  int validity_cost() const { return kind_ == Kind::generic ? degree_ : (kind_ == Kind::directional ? 1 : 0); }

  /// Multiple of the identity (constant symbol).
  bool is_trivial() const;

  const std::vector<cplx>& z0() const { return vec_; }
  const std::vector<cplx>& direction() const { return vec_; }
  cplx lambda() const { return lambda_; }
  const std::vector<std::pair<MultiIndex, cplx>>& terms() const { return terms_; }

 private:
  int dim_ = 0;
  Kind kind_ = Kind::generic;
  int degree_ = 0;
  std::vector<cplx> vec_;                             // z0 or a
  cplx lambda_{};                                     // scaled identity
  std::vector<std::pair<MultiIndex, cplx>> terms_;    // generic, canonical order
};

/// T f.  Output validity: exact for entire inputs; otherwise generic symbols
/// consume S degrees (a result with S > valid_degree carries
/// has_information() == false) and translation keeps the degree but marks
/// contamination.
TaylorPoly apply(const OperatorSymbol& op, const TaylorPoly& f);

/// The Borel symbol value Phi(gamma) = (T e^gamma)(0): polynomial evaluation
/// for generic symbols, e^{<gamma,z0>} for translations, <gamma,a> for D_a.
cplx borel_eval(const OperatorSymbol& op, std::span<const cplx> gamma);

/// The functional phi = delta_0 . T with phi(f) = (T f)(0), the convolution
/// representation T f = phi * f.
class FunctionalValue {
 public:
  explicit FunctionalValue(OperatorSymbol op) : op_(std::move(op)) {}
  cplx operator()(const TaylorPoly& f) const;
  const OperatorSymbol& op() const { return op_; }

 private:
  OperatorSymbol op_;
};

FunctionalValue functional_of(const OperatorSymbol& op);

/// Max coefficient error between T(tau_{z0} f) and tau_{z0}(T f) on the
/// common valid range.
double check_commutation(const OperatorSymbol& op, std::span<const cplx> z0, const TaylorPoly& f);

struct RaySearch {
  int directions = 64;
  double t_max = 8.0;
  int t_samples = 160;
  int bisect_iters = 100;
  std::uint64_t seed = 7;
};

struct AlphaEstimate {
  double alpha = 0.0;
  std::vector<cplx> certificate;  // gamma* with |Phi(gamma*)| = 1 when found
  bool found = false;
  std::string note;
};

/// Upper bound on alpha_T = inf{ |gamma| : |Phi(gamma)| = 1 }, with a
/// certificate.  Closed forms for the built-in kinds; for generic symbols a
/// seeded ray search from the origin brackets |Phi| = 1 and bisects.  Throws
/// on trivial operators.
AlphaEstimate alpha_estimate(const OperatorSymbol& op, const RaySearch& params = {});

struct ExpRestrictionReport {
  double q_r_Tf = 0.0;
  double q_r_eps_f = 0.0;
  double c = 0.0;      // measured functional envelope: ||phi_m||' <= c M^m
  double big_m = 0.0;
  double c_eps = 0.0;
  double bound = 0.0;  // c * c_eps * e^{M/r} * q_{r(1+eps)}(f)
  bool holds = false;
  double r = 0.0;
  double eps = 0.0;
};

/// Checks q_r(T f) <= c * c_eps * e^{M/r} * q_{r(1+eps)}(f) with (c, M)
/// measured from the symbol via the coefficient-l1 dual surrogate and c_eps
/// from c_kl_bound.  Seminorms are evaluated in the coeff_l1 backend, the
/// one matching that surrogate.  Throws when r or eps is not positive, or
/// when r(1+eps) is outside the admissible range for f's estimated type.
ExpRestrictionReport verify_exp_restriction(const OperatorSymbol& op, const TaylorPoly& f,
                                            double r, double eps);

struct SliceFit {
  cplx constant{};   // fitted C in C e^{p w}
  cplx rate{};       // fitted p
  double residual = 0.0;  // relative max deviation on the sample circle
  int winding = 0;        // of Phi(w gamma) around 0 along the circle
  bool zero_free = true;  // no near-zero values on the sampled circle
  bool ok = false;        // zero_free, winding 0, residual below tol
  std::string note;
};

/// Fits w -> Phi(w gamma) on |w| = radius against C e^{p w}.  A symbol with
/// zeros on or inside the circle fails the fit (near-zero sample or nonzero
/// winding); zero-freeness is only decided on the sampled set.
SliceFit fit_exponential_slice(const OperatorSymbol& op, std::span<const cplx> gamma,
                               double radius = 1.0, int samples = 256, double tol = 1e-6);

}  // namespace holodyn
