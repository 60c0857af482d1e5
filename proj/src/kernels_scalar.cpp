#include <cmath>

#include "holodyn/kernels.hpp"

// Reference kernels.  Written on raw re/im pairs so the arithmetic matches
// the vector variants operation for operation.

namespace holodyn::kernels {
namespace {

void cadd_s(cplx* y, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void cscale_s(cplx* y, cplx a, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double re = y[i].real(), im = y[i].imag();
    y[i] = {ar * re - ai * im, ar * im + ai * re};
  }
}

void caxpy_s(cplx* y, cplx a, const cplx* x, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    y[i] += cplx{ar * re - ai * im, ar * im + ai * re};
  }
}

void cmul_s(cplx* y, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = y[i].real(), ai = y[i].imag();
    const double br = x[i].real(), bi = x[i].imag();
    y[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

cplx cdotu_s(const cplx* a, const cplx* b, std::size_t n) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    sr += ar * br - ai * bi;
    si += ar * bi + ai * br;
  }
  return {sr, si};
}

double weighted_abs2_s(const double* w, const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    s += w[i] * (re * re + im * im);
  }
  return s;
}

double abs_sum_s(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    s += std::sqrt(re * re + im * im);
  }
  return s;
}

double max_abs_s(const cplx* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real(), im = x[i].imag();
    const double a2 = re * re + im * im;
    if (a2 > m) m = a2;
  }
  return std::sqrt(m);
}

double max_abs_diff_s(const cplx* x, const cplx* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real() - y[i].real(), im = x[i].imag() - y[i].imag();
    const double a2 = re * re + im * im;
    if (a2 > m) m = a2;
  }
  return std::sqrt(m);
}

}  // namespace

namespace detail {

const Table& scalar_table() {
  static const Table t{cadd_s,  cscale_s, caxpy_s, cmul_s,       cdotu_s,
                       weighted_abs2_s, abs_sum_s, max_abs_s, max_abs_diff_s};
  return t;
}

}  // namespace detail
}  // namespace holodyn::kernels
