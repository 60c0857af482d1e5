#include <cmath>
#include <vector>

#include "doctest.h"
#include "holodyn/kernels.hpp"
#include "holodyn/rng.hpp"

using namespace holodyn;
namespace k = holodyn::kernels;

namespace {

std::vector<k::cplx> random_vec(Rng& rng, std::size_t n) {
  std::vector<k::cplx> v(n);
  for (auto& c : v) c = rng.gaussian();
  return v;
}

constexpr std::size_t kSizes[] = {0, 1, 2, 3, 5, 8, 33, 128, 1001};

struct IsaGuard {
  ~IsaGuard() { k::force(k::avx2_supported() ? k::Isa::avx2 : k::Isa::scalar); }
};

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
  if (!k::avx2_supported()) {
    MESSAGE("avx2 not available; equivalence suite reduced to scalar self-check");
    return;
  }
  IsaGuard guard;
  Rng rng(42);
  for (std::size_t n : kSizes) {
    auto x = random_vec(rng, n);
    auto y0 = random_vec(rng, n);
    std::vector<double> w(n);
    for (auto& v : w) v = rng.uniform01() + 0.1;
    k::cplx a = rng.gaussian();

    auto run = [&](k::Isa isa) {
      REQUIRE(k::force(isa));
      struct Out {
        std::vector<k::cplx> add, scale, axpy, mul;
        k::cplx dot;
        double wabs2, asum, mabs, mdiff;
      } o;
      o.add = y0;
      k::cadd(o.add.data(), x.data(), n);
      o.scale = y0;
      k::cscale(o.scale.data(), a, n);
      o.axpy = y0;
      k::caxpy(o.axpy.data(), a, x.data(), n);
      o.mul = y0;
      k::cmul(o.mul.data(), x.data(), n);
      o.dot = k::cdotu(x.data(), y0.data(), n);
      o.wabs2 = k::weighted_abs2(w.data(), x.data(), n);
      o.asum = k::abs_sum(x.data(), n);
      o.mabs = k::max_abs(x.data(), n);
      o.mdiff = k::max_abs_diff(x.data(), y0.data(), n);
      return o;
    };

    auto s = run(k::Isa::scalar);
    auto v = run(k::Isa::avx2);

    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(s.add[i] - v.add[i]) == 0.0);
      CHECK(std::abs(s.scale[i] - v.scale[i]) <= 1e-14 * (1.0 + std::abs(s.scale[i])));
      CHECK(std::abs(s.axpy[i] - v.axpy[i]) <= 1e-14 * (1.0 + std::abs(s.axpy[i])));
      CHECK(std::abs(s.mul[i] - v.mul[i]) <= 1e-14 * (1.0 + std::abs(s.mul[i])));
    }
    CHECK(std::abs(s.dot - v.dot) <= 1e-12 * (1.0 + std::abs(s.dot)));
    CHECK(s.wabs2 == doctest::Approx(v.wabs2).epsilon(1e-12));
    CHECK(s.asum == doctest::Approx(v.asum).epsilon(1e-12));
    CHECK(s.mabs == doctest::Approx(v.mabs).epsilon(1e-13));
    CHECK(s.mdiff == doctest::Approx(v.mdiff).epsilon(1e-13));
  }
}

TEST_CASE("kernel reductions match direct formulas") {
  Rng rng(7);
  auto x = random_vec(rng, 37);
  auto y = random_vec(rng, 37);
  std::vector<double> w(37, 1.0);

  double ref = 0.0;
  for (auto& c : x) ref += std::norm(c);
  CHECK(k::weighted_abs2(w.data(), x.data(), x.size()) == doctest::Approx(ref).epsilon(1e-13));

  k::cplx dot{};
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
  CHECK(std::abs(k::cdotu(x.data(), y.data(), x.size()) - dot) <= 1e-12 * std::abs(dot));
}

TEST_CASE("caxpy is linear in the scalar") {
  Rng rng(11);
  auto x = random_vec(rng, 64);
  k::cplx a = rng.gaussian(), b = rng.gaussian();
  std::vector<k::cplx> y1(64, k::cplx{}), y2(64, k::cplx{});
  k::caxpy(y1.data(), a + b, x.data(), 64);
  k::caxpy(y2.data(), a, x.data(), 64);
  k::caxpy(y2.data(), b, x.data(), 64);
  for (std::size_t i = 0; i < 64; ++i)
    CHECK(std::abs(y1[i] - y2[i]) <= 1e-14 * (1.0 + std::abs(y1[i])));
}
