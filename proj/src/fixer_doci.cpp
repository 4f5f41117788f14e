#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rdmfix/errors.hpp"
#include "rdmfix/fixer.hpp"
#include "fix_step.hpp"

namespace rdmfix {

namespace {

struct Measured {
  SweepRecord record;
  double score = 0.0;
  bool feasible = false;
};

void push(Measured& m, const char* name, double terr, double mine, const FixConfig& cfg) {
  m.record.conditions.emplace_back(name);
  m.record.trace_errors.push_back(terr);
  m.record.min_eigenvalues.push_back(mine);
  const double t = std::isnan(terr) ? 0.0 : std::abs(terr);
  m.score = std::max({m.score, t, -mine});
  if (t > cfg.tol_trace || mine < -cfg.tol_eig) m.feasible = false;
}

double offdiag_sum(const Matrix& m) { return m.sum() - m.trace(); }

double offdiag_min(const Matrix& m) {
  double v = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b)
      if (a != b) v = std::min(v, m(a, b));
  return m.rows() < 2 ? 0.0 : v;
}

Measured measure(const Doci2RDM& r, const FixConfig& cfg) {
  Measured m;
  m.feasible = true;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  push(m, "Pi", r.pi.trace() - r.pi_trace_target(), specproj::min_eigenvalue(specproj::symmetrize(r.pi)), cfg);
  push(m, "D", offdiag_sum(r.d) - r.d_sum_target(), offdiag_min(r.d), cfg);
  const ConditionMatrix qpi = doci_condition(ConditionKind::QPi, r);
  push(m, "QPi", qpi.trace() - qpi.trace_target, specproj::min_eigenvalue(qpi.entries), cfg);
  const ConditionMatrix qd = doci_condition(ConditionKind::QD, r);
  push(m, "QD", qd.trace() - qd.trace_target, offdiag_min(qd.entries.full()), cfg);
  const ConditionMatrix gpi = doci_condition(ConditionKind::GPi, r);
  push(m, "GPi", gpi.trace() - gpi.trace_target, specproj::min_eigenvalue(gpi.entries), cfg);
  double g2min = std::numeric_limits<double>::infinity();
  for (const auto& blk : g2x2_blocks(r)) g2min = std::min(g2min, specproj::min_eigenvalue(blk.entries));
  if (!std::isfinite(g2min)) g2min = 0.0;
  push(m, "G2x2", nan, g2min, cfg);
  return m;
}

// Off-diagonal entries of D: zero the negative ones and shift the rest
// uniformly until the sum is restored.
Doci2RDM fix_d(const Doci2RDM& r, const FixConfig& cfg) {
  Doci2RDM out = r;
  const int L = r.L;
  if (L < 2 || r.pairs() < 2) {
    out.d.setZero();
    return out;
  }
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(L * (L - 1) / 2));
  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b) upper.push_back(0.5 * (r.d(a, b) + r.d(b, a)));
  double sum = 0.0, lo = 0.0;
  for (double v : upper) {
    sum += 2.0 * v;
    lo = std::min(lo, v);
  }
  if (lo >= -cfg.tol_eig && std::abs(sum - r.d_sum_target()) <= cfg.tol_trace) return out;
  out.d.setZero();
  const auto shifted = specproj::shift_eigenvalues(upper, 0.5 * r.d_sum_target(), cfg.strategy).shifted_eigenvalues;
  Eigen::Index k = 0;
  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b) {
      out.d(a, b) = shifted[k];
      out.d(b, a) = shifted[k];
      ++k;
    }
  return out;
}

Doci2RDM fix_pair_group(const Doci2RDM& r, const FixConfig& cfg) {
  Doci2RDM out = r;
  ConditionMatrix pi;
  pi.kind = ConditionKind::GPi;  // plain L x L matrix, trace stored as is
  pi.entries = specproj::symmetrize(r.pi);
  pi.trace_target = r.pi_trace_target();
  if (detail::fix_condition(pi, cfg)) out.pi = pi.entries.full();
  out = fix_d(out, cfg);
  if (cfg.enforce_rho_consistency) out = enforce_rho_consistency(out);
  return out;
}

Doci2RDM fix_hole_group(const Doci2RDM& r, const FixConfig& cfg) {
  ConditionMatrix qpi = doci_condition(ConditionKind::QPi, r);
  Doci2RDM out = r;
  if (detail::fix_condition(qpi, cfg)) out = doci_invert(ConditionKind::QPi, qpi, r);

  ConditionMatrix qd = doci_condition(ConditionKind::QD, out);
  bool changed = false;
  for (int a = 0; a < out.L; ++a)
    for (int b = a + 1; b < out.L; ++b)
      if (qd.entries(a, b) < -cfg.tol_eig) {
        qd.entries.set(a, b, 0.0);
        changed = true;
      }
  return changed ? doci_invert(ConditionKind::QD, qd, out) : out;
}

Doci2RDM fix_particle_hole_group(const Doci2RDM& r, const FixConfig& cfg) {
  ConditionMatrix gpi = doci_condition(ConditionKind::GPi, r);
  Doci2RDM out = r;
  if (detail::fix_condition(gpi, cfg)) out = doci_invert(ConditionKind::GPi, gpi, r);

  if (cfg.sequential_g2x2) {
    for (int a = 0; a < out.L; ++a) {
      for (int b = a + 1; b < out.L; ++b) {
        ConditionMatrix blk;
        for (auto& c : g2x2_blocks(out))
          if (c.label == std::pair{a, b}) blk = std::move(c);
        if (detail::fix_condition(blk, cfg)) out = doci_invert_g2x2({blk}, out);
      }
    }
    return out;
  }
  // All blocks projected from one snapshot, then reconciled.
  std::vector<ConditionMatrix> blocks = g2x2_blocks(out);
  bool changed = false;
  for (auto& blk : blocks) changed |= detail::fix_condition(blk, cfg);
  return changed ? doci_invert_g2x2(blocks, out) : out;
}

}  // namespace

FixResult<Doci2RDM> fix_doci(const Doci2RDM& input, const FixConfig& cfg) {
  cfg.check();
  if (input.N % 2 != 0 || input.N < 2) throw DomainError("fix_doci needs an even electron count N >= 2");
  if (input.pairs() > input.L) throw DimensionError("more pairs than levels");
  if (input.pi.rows() != input.L || input.pi.cols() != input.L || input.d.rows() != input.L ||
      input.d.cols() != input.L)
    throw DimensionError("Pi and D must be L x L");

  Doci2RDM current = input;
  current.pi = specproj::symmetrize(input.pi).full();
  current.d = specproj::symmetrize(input.d).full();
  current.d.diagonal().setZero();

  Doci2RDM best = current;
  double best_score = std::numeric_limits<double>::infinity();
  FixReport report;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    const Doci2RDM previous = current;
    for (ConditionKind kind : cfg.order) {
      switch (kind) {
        case ConditionKind::P: current = fix_pair_group(current, cfg); break;
        case ConditionKind::Q: current = fix_hole_group(current, cfg); break;
        case ConditionKind::G: current = fix_particle_hole_group(current, cfg); break;
        default: break;
      }
    }
    Measured m = measure(current, cfg);
    const double change = std::sqrt((current.pi - previous.pi).squaredNorm() + (current.d - previous.d).squaredNorm());
    m.record.frobenius_change = change;
    report.sweeps.push_back(std::move(m.record));
    report.sweeps_used = sweep;
    if (m.score < best_score) {
      best_score = m.score;
      best = current;
    }
    if (m.feasible && change <= cfg.tol_eig) {
      report.converged = true;
      best = current;
      break;
    }
  }
  report.final_cost = cost_doci(input, best);
  return {std::move(best), std::move(report)};
}

}  // namespace rdmfix
