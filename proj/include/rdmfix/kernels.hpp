#pragma once

// Data-parallel reductions used on eigenvalue vectors and flattened
// density matrices. Each kernel has a scalar reference implementation and
// vectorized variants; the fastest variant supported by the running CPU is
// picked on first use.

#include <cstddef>
#include <span>
#include <string_view>

namespace rdmfix::kernels {

enum class Backend { Scalar, Avx2, Neon };

// Sum of (a[i] - b[i])^2.
double sum_sq_diff(std::span<const double> a, std::span<const double> b);

// f(sigma) = sum_i max(values[i] - sigma, 0).
double shifted_positive_sum(std::span<const double> values, double sigma);

// out[i] = max(values[i] - sigma, 0).
void shift_clamp(std::span<const double> values, double sigma, std::span<double> out);

// sum_i |min(values[i], 0)|.
double negative_part_sum(std::span<const double> values);

// Number of entries strictly greater than sigma, and their sum.
struct ActiveSum {
  std::size_t count = 0;
  double sum = 0.0;
};
ActiveSum active_above(std::span<const double> values, double sigma);

Backend active_backend();
bool backend_available(Backend b);
// Forces a backend (tests, benchmarking). Throws if unavailable on this CPU.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

// Direct access to individual implementations for equivalence testing.
namespace scalar {
double sum_sq_diff(const double* a, const double* b, std::size_t n);
double shifted_positive_sum(const double* v, std::size_t n, double sigma);
void shift_clamp(const double* v, std::size_t n, double sigma, double* out);
double negative_part_sum(const double* v, std::size_t n);
ActiveSum active_above(const double* v, std::size_t n, double sigma);
}  // namespace scalar

namespace avx2 {
bool supported();
double sum_sq_diff(const double* a, const double* b, std::size_t n);
double shifted_positive_sum(const double* v, std::size_t n, double sigma);
void shift_clamp(const double* v, std::size_t n, double sigma, double* out);
double negative_part_sum(const double* v, std::size_t n);
ActiveSum active_above(const double* v, std::size_t n, double sigma);
}  // namespace avx2

namespace neon {
bool supported();
double sum_sq_diff(const double* a, const double* b, std::size_t n);
double shifted_positive_sum(const double* v, std::size_t n, double sigma);
void shift_clamp(const double* v, std::size_t n, double sigma, double* out);
double negative_part_sum(const double* v, std::size_t n);
ActiveSum active_above(const double* v, std::size_t n, double sigma);
}  // namespace neon

}  // namespace rdmfix::kernels
