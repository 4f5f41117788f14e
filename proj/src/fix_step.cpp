#include "fix_step.hpp"

#include <cmath>

namespace rdmfix::detail {

bool fix_condition(ConditionMatrix& c, const FixConfig& cfg) {
  const specproj::Spectrum s = specproj::decompose(c.entries);
  const bool psd = s.eigenvalues.size() == 0 || s.eigenvalues.minCoeff() >= -cfg.tol_eig;
  const bool traced = !c.has_trace_target() || std::abs(c.trace() - c.trace_target) <= cfg.tol_trace;
  if (psd && traced) return false;
  std::optional<double> target;
  if (c.has_trace_target()) target = c.stored_trace_target();
  c.entries = specproj::project_psd_trace(s, target, cfg.strategy);
  return true;
}

}  // namespace rdmfix::detail
