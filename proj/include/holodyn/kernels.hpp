#pragma once

#include <complex>
#include <cstddef>

// Inner-loop primitives on dense complex<double> arrays.  Every entry point
// dispatches at runtime between a scalar reference kernel and an AVX2
// variant; the two are equivalence-tested against each other.  The active
// variant is picked once from cpuid, overridable with HOLODYN_ISA=scalar|avx2
// or kernels::force() in tests.

namespace holodyn::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

Isa active();
const char* isa_name(Isa isa);
bool avx2_supported();
/// Test hook; returns false (and leaves the dispatch alone) when the
/// requested variant is not available on this machine.
bool force(Isa isa);

/// y[i] += x[i]
void cadd(cplx* y, const cplx* x, std::size_t n);
/// y[i] *= a
void cscale(cplx* y, cplx a, std::size_t n);
/// y[i] += a * x[i]
void caxpy(cplx* y, cplx a, const cplx* x, std::size_t n);
/// y[i] *= x[i]
void cmul(cplx* y, const cplx* x, std::size_t n);
/// sum_i a[i] * b[i]  (no conjugation)
cplx cdotu(const cplx* a, const cplx* b, std::size_t n);
/// sum_i w[i] * |x[i]|^2
double weighted_abs2(const double* w, const cplx* x, std::size_t n);
/// sum_i |x[i]|
double abs_sum(const cplx* x, std::size_t n);
/// max_i |x[i]|
double max_abs(const cplx* x, std::size_t n);
/// max_i |x[i] - y[i]|
double max_abs_diff(const cplx* x, const cplx* y, std::size_t n);

namespace detail {

struct Table {
  void (*cadd)(cplx*, const cplx*, std::size_t);
  void (*cscale)(cplx*, cplx, std::size_t);
  void (*caxpy)(cplx*, cplx, const cplx*, std::size_t);
  void (*cmul)(cplx*, const cplx*, std::size_t);
  cplx (*cdotu)(const cplx*, const cplx*, std::size_t);
  double (*weighted_abs2)(const double*, const cplx*, std::size_t);
  double (*abs_sum)(const cplx*, std::size_t);
  double (*max_abs)(const cplx*, std::size_t);
  double (*max_abs_diff)(const cplx*, const cplx*, std::size_t);
};

const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in

}  // namespace detail

}  // namespace holodyn::kernels
