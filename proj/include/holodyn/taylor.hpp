#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "holodyn/multi_index.hpp"

namespace holodyn {

using cplx = std::complex<double>;

/// Degree-truncated Taylor expansion at 0 of an entire function on C^n.
///
/// Coefficients are stored densely in graded-lex order over all indices of
/// degree <= trunc_degree; the coefficient of z^alpha is d^alpha f(0)/alpha!.
///
/// Two pieces of bookkeeping make truncation explicit:
///   * valid_degree: coefficients of degree <= valid_degree are exact given
///     exact inputs.  Operations that consume unknown tail data lower it;
///     valid_degree == -1 means nothing is known (see has_information()).
///   * entire(): the stored coefficients describe the whole function, i.e.
///     every coefficient beyond trunc_degree is zero.  Polynomial
///     constructors set it; truncations of genuinely infinite expansions
///     (exp_of_linear with gamma != 0) do not.  Operations on entire inputs
///     stay exact at every degree, so valid_degree is not lowered for them.
///
/// taylor_shift on a non-entire input mixes unknown tail coefficients into
/// every output degree; the result keeps its nominal valid_degree but is
/// marked contaminated().  The flag propagates through later operations.
///
/// Values are immutable after construction apart from the builder-style
/// set_coeff; all free operations below are pure.
class TaylorPoly {
 public:
  TaylorPoly() = default;

  static TaylorPoly zero(int dim, int trunc_degree);
  static TaylorPoly constant(int dim, int trunc_degree, cplx value);
  static TaylorPoly monomial(int dim, int trunc_degree, std::span<const int> alpha, cplx c);

  int dim() const { return dim_; }
  int trunc_degree() const { return trunc_; }
  int valid_degree() const { return valid_; }
  bool has_information() const { return valid_ >= 0; }
  bool entire() const { return entire_; }
  bool contaminated() const { return contaminated_; }

  const IndexTable& table() const { return *tab_; }
  std::shared_ptr<const IndexTable> table_ptr() const { return tab_; }

  std::span<const cplx> data() const { return c_; }
  std::span<cplx> mutable_data() { return c_; }
  std::span<const cplx> degree_block(int k) const;

  cplx coeff(std::span<const int> alpha) const;
  void set_coeff(std::span<const int> alpha, cplx v);

  void set_valid_degree(int d) { valid_ = d; }
  void set_entire(bool e) { entire_ = e; }
  void set_contaminated(bool c) { contaminated_ = c; }

  /// Degree of the highest nonzero stored coefficient (-1 for zero).
  int stored_degree() const;

 private:
  int dim_ = 0;
  int trunc_ = -1;
  int valid_ = -1;
  bool entire_ = false;
  bool contaminated_ = false;
  std::shared_ptr<const IndexTable> tab_;
  std::vector<cplx> c_;
};

/// Coefficientwise sum.  Truncation and validity are the min of the inputs.
TaylorPoly add(const TaylorPoly& f, const TaylorPoly& g);

/// f + c*g, same metadata rules as add.
TaylorPoly add_scaled(const TaylorPoly& f, cplx c, const TaylorPoly& g);

/// Coefficients multiplied by c; metadata unchanged.
TaylorPoly scale(const TaylorPoly& f, cplx c);

/// sum_i a_i df/dz_i.
TaylorPoly directional_derivative(const TaylorPoly& f, std::span<const cplx> a);

/// D^alpha f with the rule c_beta <- c_{beta+alpha} * (beta+alpha)!/beta!.
TaylorPoly partial_derivative(const TaylorPoly& f, const MultiIndex& alpha);

/// Translation: (tau_{z0} f)(z) = f(z0 + z), by multinomial re-expansion.
/// Exact on entire inputs; otherwise the result is marked contaminated.
TaylorPoly taylor_shift(const TaylorPoly& f, std::span<const cplx> z0);

/// sum over stored indices of c_alpha z^alpha, summed degree by degree.
cplx evaluate(const TaylorPoly& f, std::span<const cplx> z);

/// Taylor series of z -> e^{<gamma,z>} truncated at trunc_degree:
/// the coefficient of z^alpha is gamma^alpha / alpha!.
TaylorPoly exp_of_linear(std::span<const cplx> gamma, int trunc_degree);

/// The degree-k homogeneous component (a copy of the block).
struct HomogeneousPart {
  int dim = 0;
  int degree = 0;
  std::vector<cplx> coeff;  // table order within the degree block
};
HomogeneousPart hom_part(const TaylorPoly& f, int k);

/// max_alpha |f_alpha - g_alpha| over degrees <= up_to_degree.
double max_coeff_diff(const TaylorPoly& f, const TaylorPoly& g, int up_to_degree);

/// max_alpha |f_alpha| over degrees <= up_to_degree.
double max_coeff(const TaylorPoly& f, int up_to_degree);

}  // namespace holodyn
