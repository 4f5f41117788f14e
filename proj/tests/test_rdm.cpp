#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "rdmfix/errors.hpp"
#include "rdmfix/pairing.hpp"
#include "rdmfix/rdm.hpp"

using namespace rdmfix;

namespace {

struct Sample {
  int L, N;
  std::uint64_t seed;
};

const Sample kSamples[] = {{2, 2, 1}, {3, 2, 2}, {3, 4, 3}, {3, 3, 4}, {4, 4, 5}};

Doci2RDM random_doci_state(int L, int np, std::uint64_t seed) {
  pairing::DociBasis basis(L, np);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.dim()));
  for (auto& x : c) x = g(rng);
  return pairing::doci_rdms_from_ci(basis, c.normalized());
}

// Seniority-zero wavefunction in the full spin-orbital Fock space.
oracle::Wavefunction doci_wavefunction(int L, int np, std::uint64_t seed) {
  pairing::DociBasis basis(L, np);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  oracle::Wavefunction w;
  w.n = 2 * L;
  w.c.resize(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    oracle::Det d = 0;
    for (int a = 0; a < L; ++a)
      if ((basis.config(k) >> a) & 1u) d |= oracle::Det{3} << (2 * a);
    w.dets.push_back(d);
    w.c[static_cast<Eigen::Index>(k)] = g(rng);
  }
  w.c.normalize();
  return w;
}

}  // namespace

TEST_CASE("pair basis indexing") {
  PairBasis b(6);
  CHECK(b.size() == 15);
  for (int k = 0; k < b.size(); ++k) {
    const auto [x, y] = b.pair(k);
    CHECK(x < y);
    CHECK(b.index(x, y) == k);
  }
}

TEST_CASE("four-index accessor antisymmetry") {
  Spin2RDM g(2, 2);
  g.set(0, 1, 2, 3, 0.7);
  CHECK(g(0, 1, 2, 3) == 0.7);
  CHECK(g(1, 0, 2, 3) == -0.7);
  CHECK(g(0, 1, 3, 2) == -0.7);
  CHECK(g(1, 0, 3, 2) == 0.7);
  CHECK(g(2, 3, 0, 1) == 0.7);
  CHECK(g(0, 0, 2, 3) == 0.0);
  g.set(3, 2, 1, 0, 0.2);
  CHECK(g(0, 1, 2, 3) == 0.2);
}

TEST_CASE("full shell") {
  Spin2RDM g(1, 2);
  g.set(0, 1, 0, 1, 1.0);
  CHECK(g.trace() == 2.0);
  const OneRDM rho = contract_one_rdm(g);
  CHECK((rho.rho - Matrix::Identity(2, 2)).norm() < 1e-15);
  CHECK(q_from_p(g, rho).entries.full().norm() < 1e-15);
  CHECK(g_from_p(g, rho).trace() == doctest::Approx(2.0));
  CHECK_THROWS_AS(contract_one_rdm(Spin2RDM(1, 1)), DomainError);
}

TEST_CASE("vacuum Q and G") {
  Spin2RDM g(2, 0);
  OneRDM rho{Matrix::Zero(4, 4)};
  const ConditionMatrix q = q_from_p(g, rho);
  CHECK((q.entries.full() - Matrix::Identity(6, 6)).norm() < 1e-15);
  CHECK(g_from_p(g, rho).entries.full().norm() == 0.0);
}

TEST_CASE("1-RDM, Q and G match second-quantized expectation values") {
  for (const auto& s : kSamples) {
    INFO("L=" << s.L << " N=" << s.N);
    const auto w = oracle::random_wavefunction(s.L, s.N, s.seed);
    if (s.N < 2) continue;
    const Spin2RDM g2 = oracle::spin_rdm(w, s.L, s.N);
    const int n = 2 * s.L;
    CHECK(g2.trace() == doctest::Approx(s.N * (s.N - 1.0)).epsilon(1e-12));
    const OneRDM rho = contract_one_rdm(g2);
    double err = 0.0;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) err = std::max(err, std::abs(rho.rho(a, c) - oracle::rho(w, a, c)));
    CHECK(err < 1e-12);
    CHECK(rho.trace() == doctest::Approx(s.N).epsilon(1e-12));

    const ConditionMatrix q = q_from_p(g2, rho);
    CHECK_FALSE(q.warning);
    err = 0.0;
    for (int p = 0; p < g2.pair_dim(); ++p)
      for (int r = 0; r < g2.pair_dim(); ++r) {
        const auto [a, b] = g2.basis().pair(p);
        const auto [c, d] = g2.basis().pair(r);
        err = std::max(err, std::abs(q.entries(p, r) - oracle::q(w, a, b, c, d)));
      }
    CHECK(err < 1e-12);
    CHECK(q.trace() == doctest::Approx(q.trace_target).epsilon(1e-12));
    CHECK(q.trace_target == (n - s.N) * (n - s.N - 1.0));

    const ConditionMatrix g = g_from_p(g2, rho);
    err = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            err = std::max(err, std::abs(g.entries(a * n + b, c * n + d) - oracle::g(w, a, b, c, d)));
    CHECK(err < 1e-12);
    CHECK(g.trace() == doctest::Approx(s.N * (n - s.N + 1.0)).epsilon(1e-12));

    // pure states satisfy every positivity condition
    CHECK(specproj::min_eigenvalue(p_matrix(g2).entries) > -1e-12);
    CHECK(specproj::min_eigenvalue(q.entries) > -1e-12);
    CHECK(specproj::min_eigenvalue(g.entries) > -1e-12);
  }
}

TEST_CASE("inverse maps compose to identity") {
  for (const auto& s : kSamples) {
    if (s.N < 2) continue;
    INFO("L=" << s.L << " N=" << s.N);
    const Spin2RDM g2 = oracle::spin_rdm(oracle::random_wavefunction(s.L, s.N, s.seed), s.L, s.N);
    const OneRDM rho = contract_one_rdm(g2);
    const Recovered fromq = p_from_q(q_from_p(g2, rho), rho);
    CHECK((fromq.gamma.packed() - g2.packed()).norm() < 1e-12);
    CHECK((fromq.rho.rho - rho.rho).norm() < 1e-12);
    const Recovered fromg = p_from_g(g_from_p(g2, rho));
    CHECK((fromg.gamma.packed() - g2.packed()).norm() < 1e-12);
    CHECK((fromg.rho.rho - rho.rho).norm() < 1e-12);
  }
}

TEST_CASE("degenerate Q contraction needs a fallback 1-RDM") {
  // 2L - N - 1 = 0
  const Spin2RDM g2 = oracle::spin_rdm(oracle::random_wavefunction(2, 3, 9), 2, 3);
  const OneRDM rho = contract_one_rdm(g2);
  const ConditionMatrix q = q_from_p(g2, rho);
  CHECK_THROWS_AS(p_from_q(q), DomainError);
  CHECK((p_from_q(q, rho).gamma.packed() - g2.packed()).norm() < 1e-12);
}

TEST_CASE("Q inverse is linear in the perturbation") {
  const Spin2RDM g2 = oracle::spin_rdm(oracle::random_wavefunction(3, 2, 12), 3, 2);
  const OneRDM rho = contract_one_rdm(g2);
  ConditionMatrix q = q_from_p(g2, rho);
  const Recovered base = p_from_q(q);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix e = Matrix::Zero(q.entries.dim(), q.entries.dim());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = i; j < e.cols(); ++j) e(i, j) = e(j, i) = d(rng);
  ConditionMatrix q1 = q, q2 = q;
  q1.entries = specproj::SymMatrix::from_upper(q.entries.full() + 1e-3 * e);
  q2.entries = specproj::SymMatrix::from_upper(q.entries.full() + 2e-3 * e);
  const Matrix d1 = p_from_q(q1).gamma.packed() - base.gamma.packed();
  const Matrix d2 = p_from_q(q2).gamma.packed() - base.gamma.packed();
  CHECK((d2 - 2.0 * d1).norm() < 1e-12);
  CHECK(d1.norm() > 1e-4);
}

TEST_CASE("G inverse output is exactly antisymmetric") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d(0.0, 1.0);
  ConditionMatrix g;
  g.kind = ConditionKind::G;
  g.L = 2;
  g.N = 2;
  Matrix m(16, 16);
  for (auto& x : m.reshaped()) x = d(rng);
  g.entries = specproj::symmetrize(m);
  const Spin2RDM out = p_from_g(g).gamma;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int e = 0; e < 4; ++e) {
          CHECK(out(a, b, c, e) == -out(b, a, c, e));
          CHECK(out(a, b, c, e) == out(c, e, a, b));
        }
}

TEST_CASE("embedding matches a seniority-zero wavefunction") {
  for (auto [L, np] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 2}}) {
    INFO("L=" << L << " Np=" << np);
    const auto w = doci_wavefunction(L, np, 40 + L);
    const Doci2RDM r = random_doci_state(L, np, 40 + L);
    const Spin2RDM want = oracle::spin_rdm(w, L, 2 * np);
    CHECK((embed(r).packed() - want.packed()).norm() < 1e-12);
    const Doci2RDM back = extract_doci(embed(r));
    CHECK((back.pi - r.pi).norm() < 1e-14);
    CHECK((back.d - r.d).norm() < 1e-14);
    CHECK(off_seniority_magnitude(embed(r)) == 0.0);
  }
}

TEST_CASE("embedded P spectrum contains the Pi spectrum") {
  const Doci2RDM r = random_doci_state(4, 2, 3);
  const Vector pe = specproj::eigenvalues(p_matrix(embed(r)).entries);
  const Vector pie = specproj::eigenvalues(specproj::symmetrize(r.pi));
  for (double l : pie) {
    double best = 1e9;
    for (double m : pe) best = std::min(best, std::abs(l - m));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("DOCI condition matrices on a single configuration") {
  Doci2RDM r(2, 2);
  r.pi(0, 0) = 1.0;
  const auto qpi = doci_condition(ConditionKind::QPi, r);
  CHECK(qpi.entries(0, 0) == 0.0);
  CHECK(qpi.entries(1, 1) == 1.0);
  const auto gpi = doci_condition(ConditionKind::GPi, r);
  CHECK(gpi.entries(0, 0) == 1.0);
  CHECK(gpi.entries(1, 1) == 0.0);
  const auto blocks = g2x2_blocks(r);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].entries(0, 0) == 1.0);
  CHECK(blocks[0].entries(1, 1) == 0.0);
  CHECK(blocks[0].entries(0, 1) == 0.0);
  // inverse of Q^Pi = diag(0, 1)
  Doci2RDM ctx(2, 2);
  const Doci2RDM back = doci_invert(ConditionKind::QPi, qpi, ctx);
  CHECK(back.pi(0, 0) == 1.0);
  CHECK(back.pi(1, 1) == 0.0);
  CHECK(doci_conditions(r).size() == 4);
}

TEST_CASE("DOCI traces and inverses on wavefunction RDMs") {
  for (auto [L, np] : {std::pair{4, 2}, {5, 2}, {6, 3}}) {
    const Doci2RDM r = random_doci_state(L, np, 100 + L);
    CHECK(r.pi.trace() == doctest::Approx(np).epsilon(1e-12));
    CHECK(r.d.sum() == doctest::Approx(np * (np - 1.0)).epsilon(1e-12));
    for (ConditionKind k : {ConditionKind::QPi, ConditionKind::QD, ConditionKind::GPi}) {
      const ConditionMatrix c = doci_condition(k, r);
      INFO(to_string(k));
      CHECK(c.trace() == doctest::Approx(c.trace_target).epsilon(1e-12));
      const Doci2RDM back = doci_invert(k, c, r);
      CHECK((back.pi - r.pi).norm() < 1e-12);
      CHECK((back.d - r.d).norm() < 1e-12);
    }
    CHECK(doci_condition(ConditionKind::QPi, r).trace_target == L - np);
    CHECK(doci_condition(ConditionKind::QD, r).trace_target == (L - np) * (L - np - 1.0));
    CHECK(doci_condition(ConditionKind::GPi, r).trace_target == np);
    const Doci2RDM back = doci_invert_g2x2(g2x2_blocks(r), r);
    CHECK((back.pi - r.pi).norm() < 1e-12);
    CHECK((back.d - r.d).norm() < 1e-12);
    CHECK(doci_rho_consistency(r) < 1e-12);
  }
}

TEST_CASE("G2x2 reconciliation with perturbed blocks stays close") {
  const Doci2RDM r = random_doci_state(5, 2, 77);
  auto blocks = g2x2_blocks(r);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d(0.0, 1e-4);
  for (auto& b : blocks) {
    b.entries.set(0, 0, b.entries(0, 0) + d(rng));
    b.entries.set(0, 1, b.entries(0, 1) + d(rng));
    b.entries.set(1, 1, b.entries(1, 1) + d(rng));
  }
  const Doci2RDM out = doci_invert_g2x2(blocks, r);
  const auto again = g2x2_blocks(out);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    CHECK((again[k].entries.full() - blocks[k].entries.full()).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("rho consistency enforcement") {
  Doci2RDM r = random_doci_state(5, 3, 9);
  r.d(0, 1) += 0.05;
  r.d(1, 0) += 0.05;
  r.d(2, 3) -= 0.05;
  r.d(3, 2) -= 0.05;
  CHECK(doci_rho_consistency(r) > 1e-3);
  const Doci2RDM fixed = enforce_rho_consistency(r);
  CHECK(doci_rho_consistency(fixed) < doci_rho_consistency(r));
  CHECK((fixed.d - fixed.d.transpose()).norm() == 0.0);
}

TEST_CASE("energies") {
  const auto m = pairing::PairingModel{{1.0, 2.0}, 0.0, 1};
  Doci2RDM r(2, 2);
  r.pi(0, 0) = 1.0;
  CHECK(doci_energy(r, pairing::pairing_k_pi(m), pairing::pairing_k_d(m)) == doctest::Approx(2.0));

  const auto m5 = pairing::PairingModel{{1.0, 2.0}, -0.5, 1};
  const Doci2RDM ex = pairing::exact_doci_rdms(m5);
  const double want = 2.5 - std::sqrt(1.25);
  CHECK(doci_energy(ex, pairing::pairing_k_pi(m5), pairing::pairing_k_d(m5)) == doctest::Approx(want).epsilon(1e-12));
  const Matrix k = spin_hamiltonian_from_doci(pairing::pairing_k_pi(m5), pairing::pairing_k_d(m5));
  CHECK(energy(embed(ex), k) == doctest::Approx(want).epsilon(1e-12));

  // general K^D contributes through D
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d(0.0, 1.0);
  const Doci2RDM rr = random_doci_state(5, 2, 6);
  Matrix kpi(5, 5), kd(5, 5);
  for (auto& x : kpi.reshaped()) x = d(rng);
  for (auto& x : kd.reshaped()) x = d(rng);
  CHECK(energy(embed(rr), spin_hamiltonian_from_doci(kpi, kd)) ==
        doctest::Approx(doci_energy(rr, kpi, kd)).epsilon(1e-12));
  const auto m6 = pairing::PairingModel::picket_fence(5, 2, 1.0, -0.3);
  CHECK(doci_energy(rr, pairing::pairing_k_pi(m6), pairing::pairing_k_d(m6)) ==
        doctest::Approx(pairing::pairing_energy_from_rdm(m6, rr)).epsilon(1e-12));
}
