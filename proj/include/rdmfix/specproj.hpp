#pragma once

// Nearest symmetric positive semidefinite matrix in the Frobenius norm,
// optionally with a prescribed trace.
//
// Without a trace constraint the answer is the positive part of the
// symmetric input (negative eigenvalues clipped). With Tr B = T the
// eigenvalues are shifted by the root sigma0 of
//     f(sigma) = sum_i max(lambda_i - sigma, 0) = T
// and clipped, keeping the eigenvectors of the input.

#include <Eigen/Dense>
#include <optional>
#include <span>

namespace rdmfix::specproj {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Real symmetric matrix. Symmetry is exact: the lower triangle is always a
// mirror of the upper triangle.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Eigen::Index dim) : m_(Matrix::Zero(dim, dim)) {}

  // Takes the upper triangle of `m` and mirrors it.
  static SymMatrix from_upper(const Matrix& m);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& full() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  void set(Eigen::Index i, Eigen::Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  double trace() const { return m_.trace(); }

 private:
  Matrix m_;
};

// Eigenvalues sorted descending, eigenvectors as matching orthonormal columns.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
};

struct ShiftResult {
  double sigma0 = 0.0;
  Vector shifted_eigenvalues;
  int iterations = 0;
};

enum class Strategy { Bisection, ZeroAndShift };

// (M + M^T) / 2. Throws DimensionError for non-square input.
SymMatrix symmetrize(const Matrix& m);

Spectrum decompose(const SymMatrix& m);
Vector eigenvalues(const SymMatrix& m);
SymMatrix reconstruct(const Matrix& eigenvectors, const Vector& eigenvalues);

// f(sigma) for the given eigenvalues.
double shift_function(std::span<const double> eigenvalues, double sigma);

// Root of f(sigma) = T by bisection on [lambda_min - T, lambda_max], followed
// by an exact solve on the final linear piece.
ShiftResult shift_root(std::span<const double> eigenvalues, double trace_target);

// Same fixed point reached by alternately zeroing negative entries and
// shifting the remaining positive ones uniformly to restore the sum.
ShiftResult zero_and_shift(std::span<const double> eigenvalues, double trace_target);

ShiftResult shift_eigenvalues(std::span<const double> eigenvalues, double trace_target, Strategy strategy);

// Plain positive part (no trace constraint).
SymMatrix project_psd(const SymMatrix& m);

SymMatrix project_psd_trace(const SymMatrix& m, std::optional<double> trace_target,
                            Strategy strategy = Strategy::Bisection);

// Same projection from an already computed spectrum of m.
SymMatrix project_psd_trace(const Spectrum& s, std::optional<double> trace_target,
                            Strategy strategy = Strategy::Bisection);

// Smallest eigenvalue; used by diagnostics.
double min_eigenvalue(const SymMatrix& m);

}  // namespace rdmfix::specproj
