#include <cmath>
#include <limits>
#include <string>

#include "rdmfix/errors.hpp"
#include "rdmfix/pairing.hpp"

namespace rdmfix::pairing {

// Reference |Phi_0> occupies levels 0..o-1; virtual index a maps to level o+a.
// With t_ia the pair-excitation amplitudes, projecting H - E onto Phi_0 and
// Phi_i^a gives
//   E    = H_00 + sum_jb G_jb t_jb
//   R_ia = G_ai + sum_{b!=a} G_ab t_ib + sum_{j!=i} G_ji t_ja
//        + sum_{j!=i, b!=a} G_jb t_ib t_ja + t_ia S_ia
//   S_ia = Delta_ia - sum_b G_ib t_ib - sum_j G_ja t_ja + G_ia t_ia
// where Delta_ia = <Phi_i^a|H|Phi_i^a> - H_00. The doubly excited components
// of the wavefunction are the permanents t_ia t_jb + t_ib t_ja.

namespace {

struct Dims {
  int o;
  int v;
};

Dims dims(const SeniorityZeroHamiltonian& h) {
  if (h.pairs < 1 || h.pairs > h.levels()) throw DomainError("pCCD needs 1 <= pairs <= levels");
  return {h.pairs, h.levels() - h.pairs};
}

void check_amplitudes(const Dims& d, const Eigen::MatrixXd& t) {
  if (t.rows() != d.o || t.cols() != d.v)
    throw DimensionError("amplitudes must be " + std::to_string(d.o) + "x" + std::to_string(d.v));
}

double reference_energy(const SeniorityZeroHamiltonian& h, int o) {
  double e = 0.0;
  for (int i = 0; i < o; ++i) {
    e += h.e[i] + h.pair_hop(i, i);
    for (int j = 0; j < o; ++j)
      if (j != i) e += h.density(i, j);
  }
  return e;
}

double excitation_gap(const SeniorityZeroHamiltonian& h, int o, int i, int lvl_a) {
  double d = (h.e[lvl_a] + h.pair_hop(lvl_a, lvl_a)) - (h.e[i] + h.pair_hop(i, i));
  for (int j = 0; j < o; ++j) {
    if (j == i) continue;
    d += h.density(lvl_a, j) + h.density(j, lvl_a) - h.density(i, j) - h.density(j, i);
  }
  return d;
}

double s_term(const SeniorityZeroHamiltonian& h, const Dims& dm, const Eigen::MatrixXd& t, int i, int a) {
  const auto& G = h.pair_hop;
  const int la = dm.o + a;
  double s = excitation_gap(h, dm.o, i, la) + G(i, la) * t(i, a);
  for (int b = 0; b < dm.v; ++b) s -= G(i, dm.o + b) * t(i, b);
  for (int j = 0; j < dm.o; ++j) s -= G(j, la) * t(j, a);
  return s;
}

}  // namespace

double pccd_energy(const SeniorityZeroHamiltonian& h, const Eigen::MatrixXd& t) {
  const Dims dm = dims(h);
  check_amplitudes(dm, t);
  double e = reference_energy(h, dm.o);
  for (int j = 0; j < dm.o; ++j)
    for (int b = 0; b < dm.v; ++b) e += h.pair_hop(j, dm.o + b) * t(j, b);
  return e;
}

Eigen::MatrixXd pccd_residual(const SeniorityZeroHamiltonian& h, const Eigen::MatrixXd& t) {
  const Dims dm = dims(h);
  check_amplitudes(dm, t);
  const auto& G = h.pair_hop;
  Eigen::MatrixXd r(dm.o, dm.v);
  for (int i = 0; i < dm.o; ++i) {
    for (int a = 0; a < dm.v; ++a) {
      const int la = dm.o + a;
      double v = G(la, i);
      for (int b = 0; b < dm.v; ++b)
        if (b != a) v += G(la, dm.o + b) * t(i, b);
      for (int j = 0; j < dm.o; ++j) {
        if (j == i) continue;
        v += G(j, i) * t(j, a);
        for (int b = 0; b < dm.v; ++b)
          if (b != a) v += G(j, dm.o + b) * t(i, b) * t(j, a);
      }
      v += t(i, a) * s_term(h, dm, t, i, a);
      r(i, a) = v;
    }
  }
  return r;
}

Eigen::MatrixXd pccd_jacobian(const SeniorityZeroHamiltonian& h, const Eigen::MatrixXd& t) {
  const Dims dm = dims(h);
  check_amplitudes(dm, t);
  const auto& G = h.pair_hop;
  const int n = dm.o * dm.v;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  auto idx = [&](int i, int a) { return i * dm.v + a; };
  for (int i = 0; i < dm.o; ++i) {
    for (int a = 0; a < dm.v; ++a) {
      const int row = idx(i, a);
      const int la = dm.o + a;
      // d/dt_ic, c != a
      for (int c = 0; c < dm.v; ++c) {
        if (c == a) continue;
        double v = G(la, dm.o + c);
        for (int j = 0; j < dm.o; ++j)
          if (j != i) v += G(j, dm.o + c) * t(j, a);
        v -= t(i, a) * G(i, dm.o + c);
        J(row, idx(i, c)) += v;
      }
      // d/dt_ka, k != i
      for (int k = 0; k < dm.o; ++k) {
        if (k == i) continue;
        double v = G(k, i);
        for (int b = 0; b < dm.v; ++b)
          if (b != a) v += G(k, dm.o + b) * t(i, b);
        v -= t(i, a) * G(k, la);
        J(row, idx(k, a)) += v;
      }
      // d/dt_ia: S_ia + t_ia dS_ia/dt_ia, dS_ia/dt_ia = -G_ia - G_ia + G_ia
      J(row, row) += s_term(h, dm, t, i, a) - t(i, a) * G(i, la);
    }
  }
  return J;
}

PccdState pccd_solve(const SeniorityZeroHamiltonian& h, const std::optional<Eigen::MatrixXd>& guess,
                     const PccdOptions& opts) {
  const Dims dm = dims(h);
  PccdState st;
  st.occupied = dm.o;
  st.virtuals = dm.v;
  st.amplitudes = guess ? *guess : Eigen::MatrixXd::Zero(dm.o, dm.v);
  check_amplitudes(dm, st.amplitudes);
  const int n = dm.o * dm.v;
  if (n == 0) {
    st.energy = pccd_energy(h, st.amplitudes);
    st.converged = true;
    return st;
  }

  auto flat = [](const Eigen::MatrixXd& m) {
    // row-major flattening to match the Jacobian's (i, a) -> i*v + a
    Eigen::VectorXd v(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index a = 0; a < m.cols(); ++a) v[i * m.cols() + a] = m(i, a);
    return v;
  };

  Eigen::MatrixXd t = st.amplitudes;
  Eigen::MatrixXd r = pccd_residual(h, t);
  double rnorm = r.norm();
  Eigen::MatrixXd best_t = t;
  double best_norm = rnorm;

  int it = 0;
  for (; it < opts.max_iterations && rnorm > opts.tolerance; ++it) {
    const Eigen::MatrixXd J = pccd_jacobian(h, t);
    const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-flat(r));
    if (!step.allFinite()) break;
    Eigen::MatrixXd dt(dm.o, dm.v);
    for (int i = 0; i < dm.o; ++i)
      for (int a = 0; a < dm.v; ++a) dt(i, a) = step[i * dm.v + a];

    double scale = 1.0;
    Eigen::MatrixXd trial = t + dt;
    Eigen::MatrixXd trial_r = pccd_residual(h, trial);
    double trial_norm = trial_r.norm();
    for (int k = 0; k < opts.max_halvings && !(trial_norm < rnorm); ++k) {
      scale *= opts.damping;
      trial = t + scale * dt;
      trial_r = pccd_residual(h, trial);
      trial_norm = trial_r.norm();
    }
    if (!std::isfinite(trial_norm)) break;
    t = std::move(trial);
    r = std::move(trial_r);
    rnorm = trial_norm;
    if (rnorm < best_norm) {
      best_norm = rnorm;
      best_t = t;
    }
  }
  st.iterations = it;
  st.amplitudes = best_t;
  st.residual_norm = best_norm;
  st.converged = best_norm <= opts.tolerance;
  st.energy = pccd_energy(h, best_t);
  return st;
}

PccdState pccd_solve(const PairingModel& m, const std::optional<Eigen::MatrixXd>& guess, const PccdOptions& opts) {
  return pccd_solve(SeniorityZeroHamiltonian::from_model(m), guess, opts);
}

ResponseRdms response_doci_rdms(const PairingModel& m, const std::optional<Eigen::MatrixXd>& guess, double step,
                                const PccdOptions& opts) {
  if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
  const SeniorityZeroHamiltonian base = SeniorityZeroHamiltonian::from_model(m);
  ResponseRdms out;
  out.state = pccd_solve(base, guess, opts);
  out.converged = out.state.converged;
  const int L = m.levels();
  out.rdm = Doci2RDM(L, m.electrons());

  auto energy_at = [&](const SeniorityZeroHamiltonian& h) {
    const PccdState s = pccd_solve(h, out.state.amplitudes, opts);
    if (!s.converged) out.converged = false;
    return s.energy;
  };
  auto central = [&](auto&& perturb) {
    SeniorityZeroHamiltonian hp = base;
    SeniorityZeroHamiltonian hm = base;
    perturb(hp, step);
    perturb(hm, -step);
    return (energy_at(hp) - energy_at(hm)) / (2.0 * step);
  };

  for (int a = 0; a < L; ++a) {
    for (int b = a; b < L; ++b) {
      if (a == b) {
        out.rdm.pi(a, a) = central([&](SeniorityZeroHamiltonian& h, double s) { h.pair_hop(a, a) += s; });
        continue;
      }
      const double pab = 0.5 * central([&](SeniorityZeroHamiltonian& h, double s) {
        h.pair_hop(a, b) += s;
        h.pair_hop(b, a) += s;
      });
      out.rdm.pi(a, b) = pab;
      out.rdm.pi(b, a) = pab;
      const double dab = 0.5 * central([&](SeniorityZeroHamiltonian& h, double s) {
        h.density(a, b) += s;
        h.density(b, a) += s;
      });
      out.rdm.d(a, b) = dab;
      out.rdm.d(b, a) = dab;
    }
  }
  return out;
}

}  // namespace rdmfix::pairing
