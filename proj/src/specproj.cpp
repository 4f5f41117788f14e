#include "rdmfix/specproj.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rdmfix/errors.hpp"
#include "rdmfix/kernels.hpp"

namespace rdmfix::specproj {

namespace {

constexpr int kMaxBisection = 400;
constexpr int kMaxAlternations = 500;

std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void check_trace_target(double t) {
  if (!(t >= 0.0)) throw DomainError("trace target must be nonnegative, got " + std::to_string(t));
}

// Given sigma from any root finder, re-solve exactly on the linear piece
// that contains it: sigma = (sum_{lambda > sigma} lambda - T) / #active.
// Accepted only if the active set is unchanged by the refined value.
double polish_root(std::span<const double> eig, double sigma, double t) {
  const auto act = kernels::active_above(eig, sigma);
  if (act.count == 0) return sigma;
  const double refined = (act.sum - t) / static_cast<double>(act.count);
  const auto check = kernels::active_above(eig, refined);
  if (check.count == act.count) return refined;
  return sigma;
}

}  // namespace

SymMatrix SymMatrix::from_upper(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("SymMatrix requires a square matrix");
  SymMatrix s;
  s.m_ = m.triangularView<Eigen::Upper>();
  s.m_.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
  return s;
}

SymMatrix symmetrize(const Matrix& m) {
  if (m.rows() != m.cols())
    throw DimensionError("symmetrize: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  const Eigen::Index n = m.rows();
  SymMatrix s(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

Spectrum decompose(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.full());
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
  // Eigen returns ascending order.
  Spectrum s;
  s.eigenvalues = es.eigenvalues().reverse();
  s.eigenvectors = es.eigenvectors().rowwise().reverse();
  return s;
}

Vector eigenvalues(const SymMatrix& m) {
  if (m.dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.full(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
  return es.eigenvalues().reverse();
}

double min_eigenvalue(const SymMatrix& m) {
  if (m.dim() == 0) return 0.0;
  return eigenvalues(m).minCoeff();
}

SymMatrix reconstruct(const Matrix& u, const Vector& lambda) {
  // Only columns with nonzero weight contribute.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] != 0.0) keep.push_back(i);
  Matrix scaled(u.rows(), static_cast<Eigen::Index>(keep.size()));
  Matrix cols(u.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    cols.col(static_cast<Eigen::Index>(k)) = u.col(keep[k]);
    scaled.col(static_cast<Eigen::Index>(k)) = u.col(keep[k]) * lambda[keep[k]];
  }
  Matrix out = Matrix::Zero(u.rows(), u.rows());
  if (!keep.empty()) out.noalias() = scaled * cols.transpose();
  return symmetrize(out);
}

double shift_function(std::span<const double> eig, double sigma) {
  return kernels::shifted_positive_sum(eig, sigma);
}

ShiftResult shift_root(std::span<const double> eig, double t) {
  check_trace_target(t);
  if (eig.empty()) throw DimensionError("shift_root: empty eigenvalue set");
  const auto [mn, mx] = std::minmax_element(eig.begin(), eig.end());
  ShiftResult r;
  r.shifted_eigenvalues = Vector::Zero(static_cast<Eigen::Index>(eig.size()));
  if (t == 0.0) {
    r.sigma0 = *mx;
    return r;
  }
  double lo = *mn - t;  // f(lo) >= T
  double hi = *mx;      // f(hi) == 0
  const double tol = 1e-12 * std::max(1.0, t);
  double sigma = 0.5 * (lo + hi);
  for (r.iterations = 0; r.iterations < kMaxBisection; ++r.iterations) {
    sigma = 0.5 * (lo + hi);
    const double f = shift_function(eig, sigma);
    if (std::abs(f - t) <= tol || hi - lo <= 1e-14) break;
    if (sigma <= lo || sigma >= hi) break;  // bracket exhausted at this magnitude
    if (f > t)
      lo = sigma;
    else
      hi = sigma;
  }
  r.sigma0 = polish_root(eig, sigma, t);
  kernels::shift_clamp(eig, r.sigma0, {r.shifted_eigenvalues.data(), eig.size()});
  return r;
}

ShiftResult zero_and_shift(std::span<const double> eig, double t) {
  check_trace_target(t);
  if (eig.empty()) throw DimensionError("zero_and_shift: empty eigenvalue set");
  const auto n = static_cast<Eigen::Index>(eig.size());
  ShiftResult r;
  r.shifted_eigenvalues = Vector::Zero(n);
  if (t == 0.0) {
    r.sigma0 = *std::max_element(eig.begin(), eig.end());
    return r;
  }
  // Michelot-style alternation: shift the live entries to restore the sum,
  // zero the ones that went negative and drop them from the live set.
  Vector x = Eigen::Map<const Vector>(eig.data(), n);
  std::vector<bool> live(eig.size(), true);
  double total_shift = 0.0;
  for (r.iterations = 1; r.iterations <= kMaxAlternations; ++r.iterations) {
    std::size_t count = 0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (live[static_cast<std::size_t>(i)]) {
        ++count;
        sum += x[i];
      }
    }
    if (count == 0) break;
    const double shift = (t - sum) / static_cast<double>(count);
    total_shift += shift;
    bool zeroed_any = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!live[static_cast<std::size_t>(i)]) continue;
      x[i] += shift;
      if (x[i] < 0.0) {
        x[i] = 0.0;
        live[static_cast<std::size_t>(i)] = false;
        zeroed_any = true;
      }
    }
    const double trace_err = std::abs(x.sum() - t);
    if (!zeroed_any || trace_err <= 1e-12 * std::max(1.0, t)) break;
  }
  r.iterations = std::min(r.iterations, kMaxAlternations);
  x = x.cwiseMax(0.0);
  r.sigma0 = -total_shift;
  r.shifted_eigenvalues = x;
  return r;
}

ShiftResult shift_eigenvalues(std::span<const double> eig, double t, Strategy strategy) {
  return strategy == Strategy::Bisection ? shift_root(eig, t) : zero_and_shift(eig, t);
}

SymMatrix project_psd(const SymMatrix& m) { return project_psd_trace(m, std::nullopt); }

SymMatrix project_psd_trace(const SymMatrix& m, std::optional<double> t, Strategy strategy) {
  if (t) check_trace_target(*t);
  if (m.dim() == 0) return m;
  if (t && *t == 0.0) return SymMatrix(m.dim());
  return project_psd_trace(decompose(m), t, strategy);
}

SymMatrix project_psd_trace(const Spectrum& s, std::optional<double> t, Strategy strategy) {
  if (t) check_trace_target(*t);
  const auto n = s.eigenvalues.size();
  if (n == 0 || (t && *t == 0.0)) return SymMatrix(static_cast<int>(n));
  Vector shifted;
  if (t)
    shifted = shift_eigenvalues(as_span(s.eigenvalues), *t, strategy).shifted_eigenvalues;
  else
    shifted = s.eigenvalues.cwiseMax(0.0);
  return reconstruct(s.eigenvectors, shifted);
}

}  // namespace rdmfix::specproj
