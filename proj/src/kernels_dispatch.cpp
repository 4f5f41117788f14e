#include "rdmfix/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rdmfix/errors.hpp"

namespace rdmfix::kernels {

namespace {

struct Table {
  double (*sum_sq_diff)(const double*, const double*, std::size_t);
  double (*shifted_positive_sum)(const double*, std::size_t, double);
  void (*shift_clamp)(const double*, std::size_t, double, double*);
  double (*negative_part_sum)(const double*, std::size_t);
  ActiveSum (*active_above)(const double*, std::size_t, double);
};

constexpr Table kScalar{scalar::sum_sq_diff, scalar::shifted_positive_sum, scalar::shift_clamp,
                        scalar::negative_part_sum, scalar::active_above};
constexpr Table kAvx2{avx2::sum_sq_diff, avx2::shifted_positive_sum, avx2::shift_clamp,
                      avx2::negative_part_sum, avx2::active_above};
constexpr Table kNeon{neon::sum_sq_diff, neon::shifted_positive_sum, neon::shift_clamp,
                      neon::negative_part_sum, neon::active_above};

const Table& table_for(Backend b) {
  switch (b) {
    case Backend::Avx2: return kAvx2;
    case Backend::Neon: return kNeon;
    case Backend::Scalar: break;
  }
  return kScalar;
}

Backend detect() {
  // RDMFIX_KERNELS=scalar pins the reference path.
  if (const char* env = std::getenv("RDMFIX_KERNELS"); env != nullptr && std::string(env) == "scalar")
    return Backend::Scalar;
  if (avx2::supported()) return Backend::Avx2;
  if (neon::supported()) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

const Table& active() { return table_for(current().load(std::memory_order_relaxed)); }

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("kernel operands differ in length");
}

}  // namespace

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  return active().sum_sq_diff(a.data(), b.data(), a.size());
}

double shifted_positive_sum(std::span<const double> values, double sigma) {
  return active().shifted_positive_sum(values.data(), values.size(), sigma);
}

void shift_clamp(std::span<const double> values, double sigma, std::span<double> out) {
  check_same_size(values.size(), out.size());
  active().shift_clamp(values.data(), values.size(), sigma, out.data());
}

double negative_part_sum(std::span<const double> values) {
  return active().negative_part_sum(values.data(), values.size());
}

ActiveSum active_above(std::span<const double> values, double sigma) {
  return active().active_above(values.data(), values.size(), sigma);
}

Backend active_backend() { return current().load(); }

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return avx2::supported();
    case Backend::Neon: return neon::supported();
  }
  return false;
}

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend " + std::string(backend_name(b)) + " unavailable");
  current().store(b);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace rdmfix::kernels
