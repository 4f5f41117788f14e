#include <algorithm>
#include <cmath>
#include <limits>

#include "rdmfix/rdm.hpp"

namespace rdmfix {

namespace {

void add_min(ValidationReport& rep, const std::string& name, double value, double tol) {
  rep.checks.push_back({name, value, -tol, value >= -tol});
}

void add_max(ValidationReport& rep, const std::string& name, double value, double limit) {
  rep.checks.push_back({name, value, limit, value <= limit});
}

}  // namespace

bool ValidationReport::all_satisfied() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.satisfied; });
}

std::vector<std::string> ValidationReport::violated() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.satisfied) out.push_back(c.name);
  return out;
}

const ConditionCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double ValidationReport::value(const std::string& name) const {
  const auto* c = find(name);
  return c ? c->value : std::numeric_limits<double>::quiet_NaN();
}

ValidationReport validate(const Spin2RDM& g2, double tol) {
  ValidationReport rep;
  const int N = g2.N();
  add_max(rep, "trace", std::abs(g2.trace() - g2.trace_target()), tol);

  const Vector p_eigs = specproj::eigenvalues(SymMatrix::from_upper(g2.packed()));
  add_min(rep, "min_eig_P", p_eigs.size() ? p_eigs.minCoeff() : 0.0, tol);
  // Full-index eigenvalues are twice the packed ones; bound N (even) or N-1 (odd).
  const double bound = (N % 2 == 0) ? N : N - 1;
  add_max(rep, "max_eig_P", p_eigs.size() ? 2.0 * p_eigs.maxCoeff() : 0.0, bound + tol);

  if (N < 2) return rep;
  const OneRDM rho = contract_one_rdm(g2);
  add_min(rep, "min_eig_Q", specproj::min_eigenvalue(q_from_p(g2, rho).entries), tol);
  add_min(rep, "min_eig_G", specproj::min_eigenvalue(g_from_p(g2, rho).entries), tol);

  const Vector rho_eigs = specproj::eigenvalues(specproj::symmetrize(rho.rho));
  add_min(rep, "rho_min_eig", rho_eigs.minCoeff(), tol);
  add_max(rep, "rho_max_eig", rho_eigs.maxCoeff(), 1.0 + tol);
  return rep;
}

ValidationReport validate(const Doci2RDM& r, double tol) {
  ValidationReport rep;
  const int L = r.L;
  add_max(rep, "trace_Pi", std::abs(r.pi.trace() - r.pi_trace_target()), tol);
  double dsum = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < L; ++a)
    for (int b = 0; b < L; ++b)
      if (a != b) {
        dsum += r.d(a, b);
        dmin = std::min(dmin, r.d(a, b));
      }
  if (L < 2) dmin = 0.0;
  add_max(rep, "sum_D", std::abs(dsum - r.d_sum_target()), tol);
  add_max(rep, "D_diagonal", r.d.diagonal().cwiseAbs().maxCoeff(), tol);
  add_max(rep, "asymmetry", std::max((r.pi - r.pi.transpose()).cwiseAbs().maxCoeff(),
                                     (r.d - r.d.transpose()).cwiseAbs().maxCoeff()),
          tol);

  add_min(rep, "min_eig_Pi", specproj::min_eigenvalue(specproj::symmetrize(r.pi)), tol);
  add_min(rep, "min_D", dmin, tol);
  add_min(rep, "min_eig_QPi", specproj::min_eigenvalue(doci_condition(ConditionKind::QPi, r).entries), tol);

  const ConditionMatrix qd = doci_condition(ConditionKind::QD, r);
  double qdmin = 0.0;
  if (L >= 2) {
    qdmin = std::numeric_limits<double>::infinity();
    for (int a = 0; a < L; ++a)
      for (int b = a + 1; b < L; ++b) qdmin = std::min(qdmin, qd.entries(a, b));
  }
  add_min(rep, "min_QD", qdmin, tol);
  add_min(rep, "min_eig_GPi", specproj::min_eigenvalue(doci_condition(ConditionKind::GPi, r).entries), tol);

  double g2min = std::numeric_limits<double>::infinity();
  for (const auto& blk : g2x2_blocks(r)) g2min = std::min(g2min, specproj::min_eigenvalue(blk.entries));
  if (!std::isfinite(g2min)) g2min = 0.0;
  add_min(rep, "min_eig_G2x2", g2min, tol);

  add_min(rep, "rho_min", r.pi.diagonal().minCoeff(), tol);
  add_max(rep, "rho_max", r.pi.diagonal().maxCoeff(), 1.0 + tol);
  // Undefined for a single pair (D vanishes identically); reported as 0.
  add_max(rep, "rho_consistency", doci_rho_consistency(r), tol);
  return rep;
}

}  // namespace rdmfix
