#pragma once

// Iterative restoration of the trace and 2-positivity (P, Q, G) conditions
// for approximate 2-RDMs.
//
// fix_regular works on a general spin-orbital 2-RDM: each sweep symmetrizes,
// then projects P, Q and G in turn onto the PSD cone with the correct trace,
// mapping Q and G back to the 2-RDM after each projection.
//
// fix_doci works on the seniority-zero (Pi, D) pair and cycles through the
// Pi, D, Q^Pi, Q^D, G^Pi and G2x2 conditions.
//
// Neither routine throws on non-convergence: the last iterate is returned
// with report.converged == false.

#include <array>
#include <vector>

#include "rdmfix/rdm.hpp"
#include "rdmfix/specproj.hpp"

namespace rdmfix {

struct FixConfig {
  double tol_trace = 1e-10;
  double tol_eig = 1e-8;
  int max_sweeps = 500;
  std::array<ConditionKind, 3> order{ConditionKind::P, ConditionKind::Q, ConditionKind::G};
  specproj::Strategy strategy = specproj::Strategy::Bisection;
  bool enforce_rho_consistency = false;  // DOCI only
  bool sequential_g2x2 = false;          // DOCI only

  // Throws DomainError on nonpositive tolerances, max_sweeps < 1 or an order
  // that is not a permutation of P, Q, G.
  void check() const;
};

// One row per sweep, measured on the iterate at the end of the sweep.
struct SweepRecord {
  // Regular: P, Q, G. DOCI: Pi, D, QPi, QD, GPi, G2x2.
  std::vector<std::string> conditions;
  std::vector<double> trace_errors;  // NaN where a condition has no trace
  std::vector<double> min_eigenvalues;
  double frobenius_change = 0.0;
};

struct FixReport {
  int sweeps_used = 0;
  std::vector<SweepRecord> sweeps;
  bool converged = false;
  double final_cost = 0.0;  // cost between input and output

  double max_trace_error() const;
  double min_eigenvalue() const;
};

template <class Rdm>
struct FixResult {
  Rdm rdm;
  FixReport report;
};

FixResult<Spin2RDM> fix_regular(const Spin2RDM& input, const FixConfig& cfg = {});
FixResult<Doci2RDM> fix_doci(const Doci2RDM& input, const FixConfig& cfg = {});

// 1/(2L)^4 sum over all four-index tuples of the squared difference.
double cost_regular(const Spin2RDM& a, const Spin2RDM& b);
// 1/(2L^2) sum_ab [(dPi_ab)^2 + (dD_ab)^2].
double cost_doci(const Doci2RDM& a, const Doci2RDM& b);

// Sum of |negative eigenvalues| over P, Q and G.
double violation_measure(const Spin2RDM& g2);
// Sum of |negative eigenvalues| over Pi, Q^Pi, G^Pi and every G2x2 block,
// plus the negative parts of the entrywise D and Q^D conditions.
double violation_measure(const Doci2RDM& r);

}  // namespace rdmfix
