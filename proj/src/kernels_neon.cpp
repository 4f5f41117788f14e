#include "rdmfix/kernels.hpp"

#if defined(__aarch64__)
#define RDMFIX_HAVE_NEON 1
#include <arm_neon.h>
#else
#define RDMFIX_HAVE_NEON 0
#endif

#include <stdexcept>

namespace rdmfix::kernels::neon {

#if RDMFIX_HAVE_NEON

// Advanced SIMD is mandatory on AArch64.
bool supported() { return true; }

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vfmaq_f64(acc0, d0, d0);
    acc1 = vfmaq_f64(acc1, d1, d1);
  }
  double r = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    r += d * d;
  }
  return r;
}

double shifted_positive_sum(const double* v, std::size_t n, double sigma) {
  const float64x2_t s = vdupq_n_f64(sigma);
  const float64x2_t zero = vdupq_n_f64(0.0);
  float64x2_t acc = zero;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmaxq_f64(vsubq_f64(vld1q_f64(v + i), s), zero));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = v[i] - sigma;
    r += d > 0.0 ? d : 0.0;
  }
  return r;
}

void shift_clamp(const double* v, std::size_t n, double sigma, double* out) {
  const float64x2_t s = vdupq_n_f64(sigma);
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmaxq_f64(vsubq_f64(vld1q_f64(v + i), s), zero));
  for (; i < n; ++i) {
    const double d = v[i] - sigma;
    out[i] = d > 0.0 ? d : 0.0;
  }
}

double negative_part_sum(const double* v, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  float64x2_t acc = zero;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vminq_f64(vld1q_f64(v + i), zero));
  double r = -vaddvq_f64(acc);
  for (; i < n; ++i)
    if (v[i] < 0.0) r -= v[i];
  return r;
}

ActiveSum active_above(const double* v, std::size_t n, double sigma) {
  const float64x2_t s = vdupq_n_f64(sigma);
  float64x2_t sum = vdupq_n_f64(0.0);
  uint64x2_t cnt = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(v + i);
    const uint64x2_t mask = vcgtq_f64(x, s);
    sum = vaddq_f64(sum, vreinterpretq_f64_u64(vandq_u64(mask, vreinterpretq_u64_f64(x))));
    cnt = vsubq_u64(cnt, mask);  // mask lanes are all-ones (== -1)
  }
  ActiveSum r;
  r.sum = vaddvq_f64(sum);
  r.count = static_cast<std::size_t>(vaddvq_u64(cnt));
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
[[noreturn]] static void unavailable() { throw std::logic_error("NEON kernels not compiled for this target"); }
double sum_sq_diff(const double*, const double*, std::size_t) { unavailable(); }
double shifted_positive_sum(const double*, std::size_t, double) { unavailable(); }
void shift_clamp(const double*, std::size_t, double, double*) { unavailable(); }
double negative_part_sum(const double*, std::size_t) { unavailable(); }
ActiveSum active_above(const double*, std::size_t, double) { unavailable(); }

#endif

}  // namespace rdmfix::kernels::neon
