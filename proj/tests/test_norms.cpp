#include <cmath>
#include <vector>

#include "doctest.h"
#include "holodyn/norms.hpp"
#include "holodyn/rng.hpp"
#include "oracles.hpp"

using namespace holodyn;
using holodyn::testing::random_homogeneous;
using holodyn::testing::random_vector;

namespace {

const NormBackend kBombieri{NormKind::bombieri};
const NormBackend kL1{NormKind::coeff_l1};
const NormBackend kSup{NormKind::sup_sampled, 512, 4, 99};

TaylorPoly linear_power(std::span<const cplx> gamma, int k) {
  // gamma(z)^k as a k-homogeneous polynomial: k! * degree-k part of e^gamma.
  TaylorPoly e = exp_of_linear(gamma, k);
  TaylorPoly out = scale(e, factorial(k));
  const IndexTable& tab = out.table();
  for (int pos = 0; pos < tab.degree_offset(k); ++pos) out.mutable_data()[static_cast<std::size_t>(pos)] = 0.0;
  out.set_entire(true);
  return out;
}

}  // namespace

TEST_CASE("hom_norm: unit monomials and the Bombieri weight oracle") {
  for (int k = 1; k <= 6; ++k) {
    TaylorPoly zk = TaylorPoly::monomial(1, k, std::vector<int>{k}, 1.0);
    CHECK(hom_norm(hom_part(zk, k), kBombieri) == doctest::Approx(1.0).epsilon(1e-14));
  }

  // (3 z1 + 4 z2)^2 expands to 9 z1^2 + 24 z1 z2 + 16 z2^2; with weights
  // alpha!/k! the squared norm is 81 + 576/2 + 256 = 625.
  std::vector<cplx> gamma{3.0, 4.0};
  TaylorPoly p = linear_power(gamma, 2);
  CHECK(p.coeff(std::vector<int>{2, 0}) == cplx{9.0, 0.0});
  CHECK(p.coeff(std::vector<int>{1, 1}) == cplx{24.0, 0.0});
  CHECK(p.coeff(std::vector<int>{0, 2}) == cplx{16.0, 0.0});
  CHECK(hom_norm(hom_part(p, 2), kBombieri) == doctest::Approx(25.0).epsilon(1e-13));

  TaylorPoly z1z2 = TaylorPoly::monomial(2, 2, std::vector<int>{1, 1}, 1.0);
  CHECK(hom_norm(hom_part(z1z2, 2), kL1) == doctest::Approx(1.0));
}

TEST_CASE("power-of-linear identity per backend") {
  Rng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    int n = rng.uniform_int(1, 3);
    int k = rng.uniform_int(1, 10);
    auto gamma = random_vector(rng, n);
    TaylorPoly p = linear_power(gamma, k);
    HomogeneousPart part = hom_part(p, k);

    double b = hom_norm(part, kBombieri);
    CHECK(b == doctest::Approx(std::pow(dual_vector_norm(gamma, kBombieri), k)).epsilon(1e-12));

    double l1 = hom_norm(part, kL1);
    CHECK(l1 == doctest::Approx(std::pow(dual_vector_norm(gamma, kL1), k)).epsilon(1e-12));
  }
  // sup_sampled: lower bound within sampling tolerance of |gamma|_2^k.
  auto gamma = random_vector(rng, 2);
  int k = 4;
  TaylorPoly p = linear_power(gamma, k);
  double truth = std::pow(dual_vector_norm(gamma, kBombieri), k);
  double sampled = hom_norm(hom_part(p, k), kSup);
  CHECK(sampled <= truth * (1.0 + 1e-12));
  CHECK(sampled >= truth * 0.95);
}

TEST_CASE("norm axioms on random pairs") {
  Rng rng(31);
  for (const NormBackend& backend : {kBombieri, kL1}) {
    for (int trial = 0; trial < 10; ++trial) {
      int n = rng.uniform_int(1, 3);
      int k = rng.uniform_int(1, 5);
      TaylorPoly p = random_homogeneous(rng, n, k);
      TaylorPoly q = random_homogeneous(rng, n, k);
      double np = hom_norm(hom_part(p, k), backend);
      double nq = hom_norm(hom_part(q, k), backend);
      CHECK(np >= 0.0);
      cplx c = rng.gaussian();
      CHECK(hom_norm(hom_part(scale(p, c), k), backend) ==
            doctest::Approx(std::abs(c) * np).epsilon(1e-12));
      CHECK(hom_norm(hom_part(add(p, q), k), backend) <= (np + nq) * (1.0 + 1e-12));
    }
  }
  TaylorPoly zero = TaylorPoly::zero(2, 3);
  CHECK(hom_norm(hom_part(zero, 3), kBombieri) == 0.0);
}

TEST_CASE("sup_sampled is below coeff_l1 on the disc (n = 1)") {
  Rng rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    int k = rng.uniform_int(1, 6);
    TaylorPoly p = random_homogeneous(rng, 1, k);
    CHECK(hom_norm(hom_part(p, k), kSup) <= hom_norm(hom_part(p, k), kL1) * (1.0 + 1e-12));
  }
}

TEST_CASE("seminorm closed forms for exponentials") {
  SeminormFamily ps{kBombieri, SeminormFlavor::p_s, {}};
  SeminormFamily qr{kBombieri, SeminormFlavor::q_r, {}};

  CHECK(seminorm(TaylorPoly::zero(1, 5), ps, 1.0).value == 0.0);

  // p_s(e^gamma) = e^{s |gamma|}
  TaylorPoly e = exp_of_linear(std::vector<cplx>{1.0}, 20);
  CHECK(seminorm(e, ps, 2.0).value == doctest::Approx(std::exp(2.0)).epsilon(1e-6));

  // q_r(e^gamma) = 1/(1 - r |gamma|)
  TaylorPoly eh = exp_of_linear(std::vector<cplx>{0.5}, 30);
  CHECK(seminorm(eh, qr, 1.0).value == doctest::Approx(2.0).epsilon(1e-6));

  CHECK_THROWS_AS(seminorm(e, ps, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(seminorm(e, ps, -1.0), std::invalid_argument);
}

TEST_CASE("seminorm monotone in the parameter and subadditive") {
  Rng rng(51);
  SeminormFamily ps{kBombieri, SeminormFlavor::p_s, {}};
  for (int trial = 0; trial < 8; ++trial) {
    TaylorPoly f = holodyn::testing::random_poly(rng, 2, 8);
    TaylorPoly g = holodyn::testing::random_poly(rng, 2, 8);
    double s = rng.uniform(0.2, 1.0);
    double s2 = s + rng.uniform(0.1, 1.0);
    CHECK(seminorm(f, ps, s).value <= seminorm(f, ps, s2).value * (1.0 + 1e-12));
    CHECK(seminorm(add(f, g), ps, s).value <=
          (seminorm(f, ps, s).value + seminorm(g, ps, s).value) * (1.0 + 1e-12));
    cplx c = rng.gaussian();
    CHECK(seminorm(scale(f, c), ps, s).value ==
          doctest::Approx(std::abs(c) * seminorm(f, ps, s).value).epsilon(1e-12));
  }
}

TEST_CASE("q_r partial sums converge geometrically for exponentials") {
  SeminormFamily qr{kBombieri, SeminormFlavor::q_r, {}};
  double r = 0.9, g = 0.7;  // r |gamma| = 0.63
  TaylorPoly e = exp_of_linear(std::vector<cplx>{g}, 40);
  // last_term / previous last_term ~ r |gamma|
  double t1 = seminorm(e, qr, r).last_term;
  TaylorPoly e39 = exp_of_linear(std::vector<cplx>{g}, 39);
  double t0 = seminorm(e39, qr, r).last_term;
  CHECK(t1 / t0 == doctest::Approx(r * g).epsilon(1e-10));
  double closed = 1.0 / (1.0 - r * g);
  CHECK(seminorm(e, qr, r).value == doctest::Approx(closed).epsilon(1e-6));
}

TEST_CASE("limsup_type") {
  // Finite expansion: trailing window all zero.
  TaylorPoly p = TaylorPoly::monomial(1, 25, std::vector<int>{3}, 2.0);
  CHECK(limsup_type(p, kBombieri).value == 0.0);

  // e^gamma with |gamma| = 2: (k! |gamma|^k / k!)^(1/k) = 2 exactly.
  TaylorPoly e2 = exp_of_linear(std::vector<cplx>{2.0}, 25);
  CHECK(limsup_type(e2, kBombieri).value == doctest::Approx(2.0).epsilon(0.05));

  // e^z: every ||d^k f(0)|| = ||z^k|| = 1, so the estimate is 1.
  TaylorPoly e1 = exp_of_linear(std::vector<cplx>{1.0}, 25);
  CHECK(limsup_type(e1, kBombieri).value == doctest::Approx(1.0).epsilon(0.05));

  CHECK_THROWS_AS(limsup_type(TaylorPoly::zero(1, 3), kBombieri), std::invalid_argument);
}

TEST_CASE("c_kl bounds") {
  CHECK(c_kl_bound(1, 0) == 1.0);
  CHECK(c_kl_bound(0, 7) == 1.0);
  CHECK(c_kl_bound(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c_kl_bound(2, 1) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(c_kl_bound(2, 1) <= c_kl_relaxed(2, 1));
  CHECK(c_kl_relaxed(2, 1) == doctest::Approx(std::exp(2.0) * std::sqrt(2.0 / 3.0)).epsilon(1e-12));

  for (int k = 1; k <= 30; ++k)
    for (int l = 1; l <= k; ++l) CHECK(c_kl_bound(k, l) <= c_kl_relaxed(k, l) * (1.0 + 1e-12));

  double ce = c_eps_constant(0.5);
  CHECK(ce >= 1.0);
  for (int k = 0; k <= 40; ++k)
    for (int l = 0; l <= k; ++l)
      CHECK(c_kl_bound(k, l) <= ce * std::pow(1.5, k) * (1.0 + 1e-12));
}

TEST_CASE("contraction examples") {
  // P = z^k, a = 1: P_{a^l} = binom(k,l) z^{k-l}.
  for (int k = 2; k <= 5; ++k) {
    TaylorPoly zk = TaylorPoly::monomial(1, k, std::vector<int>{k}, 1.0);
    for (int l = 0; l <= k; ++l) {
      TaylorPoly q = contract_power(zk, std::vector<cplx>{1.0}, l);
      CHECK(std::abs(q.coeff(std::vector<int>{k - l}) - binomial(k, l)) <= 1e-10);
    }
  }

  // l = 0 is the identity.
  Rng rng(61);
  TaylorPoly p = random_homogeneous(rng, 2, 4);
  CHECK(max_coeff_diff(contract_power(p, std::vector<cplx>{1.0, 2.0}, 0), p, 4) == 0.0);

  // P = gamma(z)^k annihilated along a with gamma(a) = 0.
  std::vector<cplx> gamma{1.0, cplx{0.0, 1.0}};
  std::vector<cplx> a{cplx{0.0, 1.0}, -1.0};  // gamma(a) = i + i*(-1) ... = 0
  TaylorPoly gk = linear_power(gamma, 3);
  for (int l = 1; l <= 3; ++l)
    CHECK(max_coeff(contract_power(gk, a, l), 3) <= 1e-12);
}

TEST_CASE("contraction agrees with the polarization oracle") {
  Rng rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    int n = rng.uniform_int(1, 2);
    int k = rng.uniform_int(2, 5);
    TaylorPoly p = random_homogeneous(rng, n, k);
    auto a = random_vector(rng, n);
    for (int l = 0; l <= k; ++l) {
      TaylorPoly q = contract_power(p, a, l);
      for (int pt = 0; pt < 3; ++pt) {
        auto x = random_vector(rng, n);
        cplx via_impl = evaluate(q, x);
        cplx via_oracle = holodyn::testing::contraction_oracle(p, k, a, l, x);
        CHECK(std::abs(via_impl - via_oracle) <= 1e-9 * (1.0 + std::abs(via_oracle)));
      }
    }
  }
}

TEST_CASE("check_holomorphy_type accepts the exact backends") {
  for (const NormBackend& backend : {kBombieri, kL1}) {
    HolomorphyTypeCheck rep = check_holomorphy_type(backend, 60, 123);
    CHECK(rep.ok);
    CHECK(rep.worst_margin <= 1.0 + 1e-9);
    CHECK(!rep.records.empty());
    for (const auto& rec : rep.records) {
      CHECK(rec.bound == doctest::Approx(std::pow(2.0, rec.k)));
      CHECK(rec.ratio <= rec.bound * (1.0 + 1e-9));
    }
  }
  CHECK_THROWS_AS(check_holomorphy_type(kBombieri, 0, 1), std::invalid_argument);
}
