#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <string>

#include "rdmfix/errors.hpp"
#include "rdmfix/fixer.hpp"
#include "rdmfix/kernels.hpp"

namespace rdmfix {

namespace {

std::span<const double> flat(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

double negative_eigen_sum(const SymMatrix& m) {
  if (m.dim() == 0) return 0.0;
  const Vector e = specproj::eigenvalues(m);
  return kernels::negative_part_sum({e.data(), static_cast<std::size_t>(e.size())});
}

}  // namespace

void FixConfig::check() const {
  if (!(tol_trace > 0.0) || !(tol_eig > 0.0)) throw DomainError("fixer tolerances must be positive");
  if (max_sweeps < 1) throw DomainError("max_sweeps must be at least 1");
  const std::set<ConditionKind> seen(order.begin(), order.end());
  const std::set<ConditionKind> want{ConditionKind::P, ConditionKind::Q, ConditionKind::G};
  if (seen != want) throw DomainError("order must be a permutation of P, Q, G");
}

double FixReport::max_trace_error() const {
  if (sweeps.empty()) return std::numeric_limits<double>::quiet_NaN();
  double m = 0.0;
  for (double e : sweeps.back().trace_errors)
    if (!std::isnan(e)) m = std::max(m, std::abs(e));
  return m;
}

double FixReport::min_eigenvalue() const {
  if (sweeps.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto& v = sweeps.back().min_eigenvalues;
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double cost_regular(const Spin2RDM& a, const Spin2RDM& b) {
  if (a.L() != b.L()) throw DimensionError("cost_regular: orbital counts differ");
  // Each packed entry stands for four signed four-index entries.
  const double n = 2.0 * a.L();
  return 4.0 * kernels::sum_sq_diff(flat(a.packed()), flat(b.packed())) / (n * n * n * n);
}

double cost_doci(const Doci2RDM& a, const Doci2RDM& b) {
  if (a.L != b.L || a.pi.rows() != b.pi.rows() || a.d.rows() != b.d.rows())
    throw DimensionError("cost_doci: orbital counts differ");
  const double L = a.L;
  return (kernels::sum_sq_diff(flat(a.pi), flat(b.pi)) + kernels::sum_sq_diff(flat(a.d), flat(b.d))) / (2.0 * L * L);
}

double violation_measure(const Spin2RDM& g2) {
  double v = negative_eigen_sum(SymMatrix::from_upper(g2.packed()));
  if (g2.N() < 2) return v;
  const OneRDM rho = contract_one_rdm(g2);
  v += negative_eigen_sum(q_from_p(g2, rho).entries);
  v += negative_eigen_sum(g_from_p(g2, rho).entries);
  return v;
}

double violation_measure(const Doci2RDM& r) {
  double v = negative_eigen_sum(specproj::symmetrize(r.pi));
  v += negative_eigen_sum(doci_condition(ConditionKind::QPi, r).entries);
  v += negative_eigen_sum(doci_condition(ConditionKind::GPi, r).entries);
  for (const auto& blk : g2x2_blocks(r)) v += negative_eigen_sum(blk.entries);
  const ConditionMatrix qd = doci_condition(ConditionKind::QD, r);
  for (int a = 0; a < r.L; ++a) {
    for (int b = a + 1; b < r.L; ++b) {
      v += std::max(0.0, -0.5 * (r.d(a, b) + r.d(b, a)));
      v += std::max(0.0, -qd.entries(a, b));
    }
  }
  return v;
}

}  // namespace rdmfix
