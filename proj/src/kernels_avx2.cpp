#include "holodyn/kernels.hpp"

#if defined(HOLODYN_BUILD_AVX2)

#include <immintrin.h>

#include <cmath>

// AVX2/FMA kernels: one __m256d holds two complex doubles [re0 im0 re1 im1].
// Complex products use the permute + fmaddsub pattern: with ar/ai broadcast,
// fmaddsub(x, ar, ai * swap(x)) = [xr*ar - xi*ai, xi*ar + xr*ai].

namespace holodyn::kernels {
namespace {

inline __m256d cmul2(__m256d x, __m256d yr, __m256d yi) {
  __m256d swapped = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(swapped, yi));
}

void cadd_v(cplx* y, const cplx* x, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d a = _mm256_loadu_pd(yd + 2 * i);
    __m256d b = _mm256_loadu_pd(xd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(a, b));
  }
  for (; i < n; ++i) y[i] += x[i];
}

void cscale_v(cplx* y, cplx a, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, cmul2(v, ar, ai));
  }
  for (; i < n; ++i) {
    const double re = y[i].real(), im = y[i].imag();
    y[i] = {a.real() * re - a.imag() * im, a.real() * im + a.imag() * re};
  }
}

void caxpy_v(cplx* y, cplx a, const cplx* x, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    __m256d acc = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(acc, cmul2(v, ar, ai)));
  }
  for (; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    y[i] += cplx{a.real() * re - a.imag() * im, a.real() * im + a.imag() * re};
  }
}

void cmul_v(cplx* y, const cplx* x, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d a = _mm256_loadu_pd(yd + 2 * i);
    __m256d b = _mm256_loadu_pd(xd + 2 * i);
    // Per-element complex product: duplicate b's re/im within each lane pair.
    __m256d br = _mm256_permute_pd(b, 0b0000);
    __m256d bi = _mm256_permute_pd(b, 0b1111);
    _mm256_storeu_pd(yd + 2 * i, cmul2(a, br, bi));
  }
  for (; i < n; ++i) {
    const double ar = y[i].real(), ai = y[i].imag();
    const double br = x[i].real(), bi = x[i].imag();
    y[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

cplx cdotu_v(const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d x = _mm256_loadu_pd(ad + 2 * i);
    __m256d y = _mm256_loadu_pd(bd + 2 * i);
    __m256d yr = _mm256_permute_pd(y, 0b0000);
    __m256d yi = _mm256_permute_pd(y, 0b1111);
    acc = _mm256_add_pd(acc, cmul2(x, yr, yi));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sr = lanes[0] + lanes[2];
  double si = lanes[1] + lanes[3];
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    sr += ar * br - ai * bi;
    si += ar * bi + ai * br;
  }
  return {sr, si};
}

double weighted_abs2_v(const double* w, const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    __m128d w2 = _mm_loadu_pd(w + i);
    // [w0 w0 w1 w1]
    __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(w2), 0b01010000);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), ww, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    s += w[i] * (re * re + im * im);
  }
  return s;
}

double abs_sum_v(const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    __m256d sq = _mm256_mul_pd(v, v);
    // [ |x0|^2 |x0|^2 |x1|^2 |x1|^2 ], every value twice.
    __m256d a2 = _mm256_hadd_pd(sq, sq);
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(a2));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = 0.5 * (lanes[0] + lanes[1] + lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    s += std::sqrt(re * re + im * im);
  }
  return s;
}

inline double reduce_max_abs2(__m256d acc, const cplx* x, std::size_t i, std::size_t n,
                              const cplx* y) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = lanes[0];
  for (int l = 1; l < 4; ++l)
    if (lanes[l] > m) m = lanes[l];
  for (; i < n; ++i) {
    const double re = x[i].real() - (y ? y[i].real() : 0.0);
    const double im = x[i].imag() - (y ? y[i].imag() : 0.0);
    const double a2 = re * re + im * im;
    if (a2 > m) m = a2;
  }
  return std::sqrt(m);
}

double max_abs_v(const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xd + 2 * i);
    __m256d sq = _mm256_mul_pd(v, v);
    acc = _mm256_max_pd(acc, _mm256_hadd_pd(sq, sq));
  }
  return reduce_max_abs2(acc, x, i, n, nullptr);
}

double max_abs_diff_v(const cplx* x, const cplx* y, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const auto* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_sub_pd(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(yd + 2 * i));
    __m256d sq = _mm256_mul_pd(v, v);
    acc = _mm256_max_pd(acc, _mm256_hadd_pd(sq, sq));
  }
  return reduce_max_abs2(acc, x, i, n, y);
}

}  // namespace

namespace detail {

const Table* avx2_table() {
  static const Table t{cadd_v,  cscale_v, caxpy_v, cmul_v,       cdotu_v,
                       weighted_abs2_v, abs_sum_v, max_abs_v, max_abs_diff_v};
  return &t;
}

}  // namespace detail
}  // namespace holodyn::kernels

#endif  // HOLODYN_BUILD_AVX2
