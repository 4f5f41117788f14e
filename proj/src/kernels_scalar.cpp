#include "rdmfix/kernels.hpp"

#include <algorithm>

namespace rdmfix::kernels::scalar {

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double shifted_positive_sum(const double* v, std::size_t n, double sigma) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::max(v[i] - sigma, 0.0);
  return acc;
}

void shift_clamp(const double* v, std::size_t n, double sigma, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - sigma, 0.0);
}

double negative_part_sum(const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc -= std::min(v[i], 0.0);
  return acc;
}

ActiveSum active_above(const double* v, std::size_t n, double sigma) {
  ActiveSum r;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] > sigma) {
      ++r.count;
      r.sum += v[i];
    }
  }
  return r;
}

}  // namespace rdmfix::kernels::scalar
