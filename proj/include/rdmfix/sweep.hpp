#pragma once

// Interaction-strength scans of the picket-fence pairing model: exact and
// pCCD energies, response RDMs, their fixed counterparts and the costs
// between all three.

#include <iosfwd>
#include <string>
#include <vector>

#include "rdmfix/fixer.hpp"
#include "rdmfix/pairing.hpp"

namespace rdmfix::sweep {

enum class Mode { Regular, Doci };

struct SweepOptions {
  int levels = 12;
  int pairs = 6;
  double spacing = 1.0;
  double gmin = -0.6;
  double gmax = 0.0;
  int steps = 25;
  Mode mode = Mode::Doci;
  FixConfig fix;
  double fd_step = 1e-4;
  // Amplitudes of each point start from its neighbour closer to g = 0.
  bool warm_start = true;
  // 0 means hardware concurrency, further capped by RDMFIX_THREADS.
  int threads = 0;

  void check() const;
  std::vector<double> grid() const;
};

struct SweepRow {
  double g = 0.0;
  double e_exact = 0.0;
  double e_pccd = 0.0;
  bool pccd_converged = false;
  double e_fixed = 0.0;
  bool fixer_converged = false;
  double cost_resp_vs_fixed = 0.0;
  double cost_resp_vs_exact = 0.0;
  double cost_fixed_vs_exact = 0.0;
  double violation_initial = 0.0;
  int sweeps_used = 0;
  // extra diagnostics
  double pccd_residual = 0.0;
  double e_response = 0.0;
};

// One full evaluation at a single g.
SweepRow evaluate_point(const SweepOptions& opts, double g, const pairing::ResponseRdms& resp);

std::vector<SweepRow> run_sweep(const SweepOptions& opts);

inline constexpr const char* kCsvVersion = "# rdmfix-sweep v1";
std::string csv_header();
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// Worker count: requested (or hardware) capped by RDMFIX_THREADS and by `work`.
int thread_count(int requested, std::size_t work);

std::string to_string(Mode m);

}  // namespace rdmfix::sweep
