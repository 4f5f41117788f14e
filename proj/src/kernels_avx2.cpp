#include "rdmfix/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define RDMFIX_HAVE_X86 1
#include <immintrin.h>
#else
#define RDMFIX_HAVE_X86 0
#endif

#include <stdexcept>

namespace rdmfix::kernels::avx2 {

#if RDMFIX_HAVE_X86

namespace {

#define RDMFIX_AVX2 __attribute__((target("avx2,fma")))

RDMFIX_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

bool supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

RDMFIX_AVX2 double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

RDMFIX_AVX2 double shifted_positive_sum(const double* v, std::size_t n, double sigma) {
  const __m256d s = _mm256_set1_pd(sigma);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_max_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), s), zero));
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double d = v[i] - sigma;
    r += d > 0.0 ? d : 0.0;
  }
  return r;
}

RDMFIX_AVX2 void shift_clamp(const double* v, std::size_t n, double sigma, double* out) {
  const __m256d s = _mm256_set1_pd(sigma);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), s), zero));
  for (; i < n; ++i) {
    const double d = v[i] - sigma;
    out[i] = d > 0.0 ? d : 0.0;
  }
}

RDMFIX_AVX2 double negative_part_sum(const double* v, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_min_pd(_mm256_loadu_pd(v + i), zero));
  double r = -hsum(acc);
  for (; i < n; ++i)
    if (v[i] < 0.0) r -= v[i];
  return r;
}

RDMFIX_AVX2 ActiveSum active_above(const double* v, std::size_t n, double sigma) {
  const __m256d s = _mm256_set1_pd(sigma);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d sum = _mm256_setzero_pd();
  __m256d cnt = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d mask = _mm256_cmp_pd(x, s, _CMP_GT_OQ);
    sum = _mm256_add_pd(sum, _mm256_and_pd(mask, x));
    cnt = _mm256_add_pd(cnt, _mm256_and_pd(mask, one));
  }
  ActiveSum r;
  r.sum = hsum(sum);
  r.count = static_cast<std::size_t>(hsum(cnt));
  for (; i < n; ++i) {
    if (v[i] > sigma) {
      ++r.count;
      r.sum += v[i];
    }
  }
  return r;
}

#else

bool supported() { return false; }
[[noreturn]] static void unavailable() { throw std::logic_error("AVX2 kernels not compiled for this target"); }
double sum_sq_diff(const double*, const double*, std::size_t) { unavailable(); }
double shifted_positive_sum(const double*, std::size_t, double) { unavailable(); }
void shift_clamp(const double*, std::size_t, double, double*) { unavailable(); }
double negative_part_sum(const double*, std::size_t) { unavailable(); }
ActiveSum active_above(const double*, std::size_t, double) { unavailable(); }

#endif

}  // namespace rdmfix::kernels::avx2
