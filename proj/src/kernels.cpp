#include "holodyn/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace holodyn::kernels {

namespace detail {
#if !defined(HOLODYN_BUILD_AVX2)
const Table* avx2_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct Dispatch {
  const detail::Table* table;
  Isa isa;
};

Dispatch resolve() {
  const detail::Table* avx2 = detail::avx2_table();
  bool want_avx2 = avx2 != nullptr && cpu_has_avx2();
  if (const char* env = std::getenv("HOLODYN_ISA")) {
    if (std::strcmp(env, "scalar") == 0) want_avx2 = false;
    // "avx2" keeps the default (only honored when actually supported).
  }
  if (want_avx2) return {avx2, Isa::avx2};
  return {&detail::scalar_table(), Isa::scalar};
}

std::atomic<const detail::Table*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const detail::Table& table() {
  const detail::Table* t = g_table.load(std::memory_order_acquire);
  if (t) return *t;
  Dispatch d = resolve();
  g_isa.store(d.isa, std::memory_order_relaxed);
  g_table.store(d.table, std::memory_order_release);
  return *d.table;
}

}  // namespace

Isa active() {
  table();
  return g_isa.load(std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_supported() { return detail::avx2_table() != nullptr && cpu_has_avx2(); }

bool force(Isa isa) {
  if (isa == Isa::avx2) {
    if (!avx2_supported()) return false;
    g_isa.store(Isa::avx2, std::memory_order_relaxed);
    g_table.store(detail::avx2_table(), std::memory_order_release);
    return true;
  }
  g_isa.store(Isa::scalar, std::memory_order_relaxed);
  g_table.store(&detail::scalar_table(), std::memory_order_release);
  return true;
}

void cadd(cplx* y, const cplx* x, std::size_t n) { table().cadd(y, x, n); }
void cscale(cplx* y, cplx a, std::size_t n) { table().cscale(y, a, n); }
void caxpy(cplx* y, cplx a, const cplx* x, std::size_t n) { table().caxpy(y, a, x, n); }
void cmul(cplx* y, const cplx* x, std::size_t n) { table().cmul(y, x, n); }
cplx cdotu(const cplx* a, const cplx* b, std::size_t n) { return table().cdotu(a, b, n); }
double weighted_abs2(const double* w, const cplx* x, std::size_t n) {
  return table().weighted_abs2(w, x, n);
}
double abs_sum(const cplx* x, std::size_t n) { return table().abs_sum(x, n); }
double max_abs(const cplx* x, std::size_t n) { return table().max_abs(x, n); }
double max_abs_diff(const cplx* x, const cplx* y, std::size_t n) {
  return table().max_abs_diff(x, y, n);
}

}  // namespace holodyn::kernels
