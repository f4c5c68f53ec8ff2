// Runtime-dispatched scalar / AVX2 / AVX-512 kernels. Each variant lives in
// this translation unit behind a function-specific target attribute so the
// whole library can be built without global -mavx flags and still run on
// machines that lack the wider instruction sets.

#include "atlas/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define ATLAS_KERNELS_X86 1
#include <immintrin.h>
#else
#define ATLAS_KERNELS_X86 0
#endif

namespace atlas::kernels {
namespace {

// ============================================================
// Scalar reference
// ============================================================

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void gemv_scalar(const double* a, const double* x, double* y, std::size_t rows,
                 std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * cols, x, cols);
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

#if ATLAS_KERNELS_X86

// ============================================================
// AVX2 + FMA
// ============================================================

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a,
                                                    const double* b,
                                                    std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2,fma"))) void gemv_avx2(const double* a,
                                                   const double* x, double* y,
                                                   std::size_t rows,
                                                   std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(a + r * cols, x, cols);
}

__attribute__((target("avx2"))) double max_abs_diff_avx2(const double* a,
                                                         const double* b,
                                                         std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_max_pd(lo, hi);
  double m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

// ============================================================
// AVX-512F
// ============================================================

__attribute__((target("avx512f"))) double dot_avx512(const double* a,
                                                     const double* b,
                                                     std::size_t n) {
  __m512d acc0 = _mm512_setzero_pd();
  __m512d acc1 = _mm512_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm512_fmadd_pd(_mm512_loadu_pd(a + i), _mm512_loadu_pd(b + i), acc0);
    acc1 = _mm512_fmadd_pd(_mm512_loadu_pd(a + i + 8), _mm512_loadu_pd(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm512_fmadd_pd(_mm512_loadu_pd(a + i), _mm512_loadu_pd(b + i), acc0);
  }
  double s = _mm512_reduce_add_pd(_mm512_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx512f"))) void gemv_avx512(const double* a,
                                                    const double* x, double* y,
                                                    std::size_t rows,
                                                    std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx512(a + r * cols, x, cols);
}

__attribute__((target("avx512f"))) double max_abs_diff_avx512(const double* a,
                                                              const double* b,
                                                              std::size_t n) {
  __m512d acc = _mm512_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m512d d = _mm512_sub_pd(_mm512_loadu_pd(a + i), _mm512_loadu_pd(b + i));
    acc = _mm512_max_pd(acc, _mm512_abs_pd(d));
  }
  double m = _mm512_reduce_max_pd(acc);
  for (; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

#endif  // ATLAS_KERNELS_X86

// ============================================================
// Dispatch
// ============================================================

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t) = dot_scalar;
  void (*gemv)(const double*, const double*, double*, std::size_t, std::size_t) = gemv_scalar;
  double (*max_abs_diff)(const double*, const double*, std::size_t) = max_abs_diff_scalar;
  const char* name = "scalar";
};

bool cpu_has(const std::string& name) {
#if ATLAS_KERNELS_X86
  if (name == "scalar") return true;
  if (name == "avx2") return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (name == "avx512") return __builtin_cpu_supports("avx512f");
  return false;
#else
  return name == "scalar";
#endif
}

bool fill_table(KernelTable& t, const std::string& name) {
  if (!cpu_has(name)) return false;
  if (name == "scalar") {
    t = KernelTable{};
    return true;
  }
#if ATLAS_KERNELS_X86
  if (name == "avx2") {
    t = KernelTable{dot_avx2, gemv_avx2, max_abs_diff_avx2, "avx2"};
    return true;
  }
  if (name == "avx512") {
    t = KernelTable{dot_avx512, gemv_avx512, max_abs_diff_avx512, "avx512"};
    return true;
  }
#endif
  return false;
}

KernelTable g_table;
std::once_flag g_init_once;

void init_table() {
  std::string pick = "scalar";
  if (cpu_has("avx2")) pick = "avx2";
  if (cpu_has("avx512")) pick = "avx512";
  if (const char* env = std::getenv("ATLAS_KERNEL")) {
    if (cpu_has(env))
      pick = env;  // silently falls back to autodetect on bad/unsupported value
  }
  fill_table(g_table, pick);
}

const KernelTable& table() {
  std::call_once(g_init_once, init_table);
  return g_table;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

void gemv(const double* a, const double* x, double* y, std::size_t rows,
          std::size_t cols) {
  table().gemv(a, x, y, rows, cols);
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  return table().max_abs_diff(a, b, n);
}

std::string active_kernel_name() { return table().name; }

bool force_kernel(const std::string& name) {
  std::call_once(g_init_once, init_table);
  KernelTable t;
  if (!fill_table(t, name)) return false;
  g_table = t;
  return true;
}

}  // namespace atlas::kernels
