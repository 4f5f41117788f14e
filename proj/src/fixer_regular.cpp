#include <cmath>
#include <limits>
#include <string>

#include "rdmfix/errors.hpp"
#include "rdmfix/fixer.hpp"
#include "fix_step.hpp"

namespace rdmfix {

namespace {

struct Measured {
  SweepRecord record;
  double score = 0.0;  // max(trace error, -min eigenvalue)
  bool feasible = false;
};

Measured measure(const Spin2RDM& g2, const FixConfig& cfg) {
  Measured m;
  const OneRDM rho = contract_one_rdm(g2);
  const ConditionMatrix p = p_matrix(g2);
  const ConditionMatrix q = q_from_p(g2, rho);
  const ConditionMatrix g = g_from_p(g2, rho);
  m.feasible = true;
  for (const ConditionMatrix* c : {&p, &q, &g}) {
    const double terr = c->trace() - c->trace_target;
    const double mine = specproj::min_eigenvalue(c->entries);
    m.record.conditions.push_back(to_string(c->kind));
    m.record.trace_errors.push_back(terr);
    m.record.min_eigenvalues.push_back(mine);
    m.score = std::max({m.score, std::abs(terr), -mine});
    if (std::abs(terr) > cfg.tol_trace || mine < -cfg.tol_eig) m.feasible = false;
  }
  return m;
}

Spin2RDM project_p(const Spin2RDM& g2, const FixConfig& cfg) {
  ConditionMatrix p = p_matrix(g2);
  if (!detail::fix_condition(p, cfg)) return g2;
  return Spin2RDM(g2.L(), g2.N(), p.entries.full());
}

Spin2RDM project_q(const Spin2RDM& g2, const FixConfig& cfg) {
  // The 1-RDM is always recomputed from the current 2-RDM.
  const OneRDM rho = contract_one_rdm(g2);
  ConditionMatrix q = q_from_p(g2, rho);
  if (!detail::fix_condition(q, cfg)) return g2;
  return p_from_q(q, rho).gamma;
}

Spin2RDM project_g(const Spin2RDM& g2, const FixConfig& cfg) {
  const OneRDM rho = contract_one_rdm(g2);
  ConditionMatrix g = g_from_p(g2, rho);
  if (!detail::fix_condition(g, cfg)) return g2;
  return p_from_g(g).gamma;
}

}  // namespace

FixResult<Spin2RDM> fix_regular(const Spin2RDM& input, const FixConfig& cfg) {
  cfg.check();
  const int N = input.N();
  if (N < 2 || N % 2 != 0) throw DomainError("fix_regular needs an even electron count N >= 2");
  const double target = input.trace_target();
  if (std::abs(input.trace() - target) > 0.1 * target)
    throw DomainError("input 2-RDM trace " + std::to_string(input.trace()) + " is not within 10% of N(N-1) = " +
                      std::to_string(target));

  // Storage symmetrizes on construction, which is the first step of a sweep.
  Spin2RDM current(input.L(), N, input.packed());
  Spin2RDM best = current;
  double best_score = std::numeric_limits<double>::infinity();

  FixReport report;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    const Matrix previous = current.packed();
    for (ConditionKind kind : cfg.order) {
      switch (kind) {
        case ConditionKind::P: current = project_p(current, cfg); break;
        case ConditionKind::Q: current = project_q(current, cfg); break;
        case ConditionKind::G: current = project_g(current, cfg); break;
        default: break;
      }
    }
    Measured m = measure(current, cfg);
    // Full four-index Frobenius norm is twice the packed one.
    m.record.frobenius_change = 2.0 * (current.packed() - previous).norm();
    report.sweeps.push_back(std::move(m.record));
    report.sweeps_used = sweep;
    if (m.score < best_score) {
      best_score = m.score;
      best = current;
    }
    if (m.feasible) {
      report.converged = true;
      best = current;
      break;
    }
  }
  report.final_cost = cost_regular(input, best);
  return {std::move(best), std::move(report)};
}

}  // namespace rdmfix
