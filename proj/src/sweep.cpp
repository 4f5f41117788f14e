#include "rdmfix/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "rdmfix/errors.hpp"
#include "rdmfix/rdm_io.hpp"

namespace rdmfix::sweep {

std::string to_string(Mode m) { return m == Mode::Regular ? "regular" : "doci"; }

void SweepOptions::check() const {
  if (levels < 1 || pairs < 1 || pairs > levels) throw DomainError("sweep needs 1 <= pairs <= levels");
  if (steps < 1) throw DomainError("sweep needs at least one step");
  if (!std::isfinite(gmin) || !std::isfinite(gmax) || gmax < gmin) throw DomainError("sweep needs finite gmin <= gmax");
  if (!(fd_step > 0.0)) throw DomainError("finite-difference step must be positive");
  fix.check();
}

std::vector<double> SweepOptions::grid() const {
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k)
    g[static_cast<std::size_t>(k)] = steps == 1 ? gmin : gmin + (gmax - gmin) * k / (steps - 1);
  return g;
}

int thread_count(int requested, std::size_t work) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RDMFIX_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  n = std::min<long long>(n, static_cast<long long>(work));
  return std::max(n, 1);
}

SweepRow evaluate_point(const SweepOptions& opts, double g, const pairing::ResponseRdms& resp) {
  const auto model = pairing::PairingModel::picket_fence(opts.levels, opts.pairs, opts.spacing, g);
  SweepRow row;
  row.g = g;
  const auto ground = pairing::exact_ground(model);
  row.e_exact = ground.energy;
  const Doci2RDM exact = pairing::doci_rdms_from_ci(pairing::DociBasis(model.levels(), model.pairs), ground.ci);
  row.e_pccd = resp.state.energy;
  row.pccd_converged = resp.converged;
  row.pccd_residual = resp.state.residual_norm;
  row.e_response = pairing::pairing_energy_from_rdm(model, resp.rdm);

  if (opts.mode == Mode::Doci) {
    row.violation_initial = violation_measure(resp.rdm);
    const auto fixed = fix_doci(resp.rdm, opts.fix);
    row.e_fixed = pairing::pairing_energy_from_rdm(model, fixed.rdm);
    row.fixer_converged = fixed.report.converged;
    row.sweeps_used = fixed.report.sweeps_used;
    row.cost_resp_vs_fixed = cost_doci(resp.rdm, fixed.rdm);
    row.cost_resp_vs_exact = cost_doci(resp.rdm, exact);
    row.cost_fixed_vs_exact = cost_doci(fixed.rdm, exact);
    return row;
  }
  const Spin2RDM resp_spin = embed(resp.rdm);
  const Spin2RDM exact_spin = embed(exact);
  row.violation_initial = violation_measure(resp_spin);
  const auto fixed = fix_regular(resp_spin, opts.fix);
  const Matrix k = spin_hamiltonian_from_doci(pairing::pairing_k_pi(model), pairing::pairing_k_d(model));
  row.e_fixed = energy(fixed.rdm, k);
  row.fixer_converged = fixed.report.converged;
  row.sweeps_used = fixed.report.sweeps_used;
  row.cost_resp_vs_fixed = cost_regular(resp_spin, fixed.rdm);
  row.cost_resp_vs_exact = cost_regular(resp_spin, exact_spin);
  row.cost_fixed_vs_exact = cost_regular(fixed.rdm, exact_spin);
  return row;
}

std::vector<SweepRow> run_sweep(const SweepOptions& opts) {
  opts.check();
  const std::vector<double> gs = opts.grid();
  const std::size_t n = gs.size();

  // pCCD responses in order of increasing |g| so that each point can start
  // from an already solved neighbour.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(gs[a]) < std::abs(gs[b]); });
  std::vector<std::optional<pairing::ResponseRdms>> resp(n);
  pairing::PccdOptions popts;
  for (std::size_t i : order) {
    std::optional<Eigen::MatrixXd> guess;
    if (opts.warm_start) {
      // nearest already-solved neighbour on the side of g = 0
      for (std::size_t j : {i == 0 ? n : i - 1, i + 1}) {
        if (j >= n || !resp[j] || std::abs(gs[j]) > std::abs(gs[i])) continue;
        if (resp[j]->state.converged) guess = resp[j]->state.amplitudes;
      }
    }
    const auto model = pairing::PairingModel::picket_fence(opts.levels, opts.pairs, opts.spacing, gs[i]);
    resp[i] = pairing::response_doci_rdms(model, guess, opts.fd_step, popts);
  }

  std::vector<SweepRow> rows(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = evaluate_point(opts, gs[i], *resp[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nt = thread_count(opts.threads, n);
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string csv_header() {
  return "g,E_exact,E_pccd,pccd_converged,E_fixed,fixer_converged,cost_resp_vs_fixed,cost_resp_vs_exact,"
         "cost_fixed_vs_exact,violation_initial,sweeps_used,pccd_residual,E_response";
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  using io::format_double;
  os << kCsvVersion << '\n' << csv_header() << '\n';
  for (const auto& r : rows) {
    os << format_double(r.g) << ',' << format_double(r.e_exact) << ',' << format_double(r.e_pccd) << ','
       << (r.pccd_converged ? 1 : 0) << ',' << format_double(r.e_fixed) << ',' << (r.fixer_converged ? 1 : 0) << ','
       << format_double(r.cost_resp_vs_fixed) << ',' << format_double(r.cost_resp_vs_exact) << ','
       << format_double(r.cost_fixed_vs_exact) << ',' << format_double(r.violation_initial) << ',' << r.sweeps_used
       << ',' << format_double(r.pccd_residual) << ',' << format_double(r.e_response) << '\n';
  }
}

}  // namespace rdmfix::sweep
