#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "rdmfix/errors.hpp"
#include "rdmfix/fixer.hpp"
#include "rdmfix/pairing.hpp"

using namespace rdmfix;

namespace {

Doci2RDM exact(int L, int np, double g) {
  return pairing::exact_doci_rdms(pairing::PairingModel::picket_fence(L, np, 1.0, g));
}

// Maximally mixed seniority-zero ensemble.
Doci2RDM uniform(int L, int np) {
  Doci2RDM r(L, 2 * np);
  r.pi = Matrix::Identity(L, L) * (double(np) / L);
  if (L > 1) {
    r.d = Matrix::Constant(L, L, double(np) * (np - 1) / (double(L) * (L - 1)));
    r.d.diagonal().setZero();
  }
  return r;
}

Doci2RDM mix(const Doci2RDM& a, const Doci2RDM& b, double w) {
  Doci2RDM r = a;
  r.pi = (1 - w) * a.pi + w * b.pi;
  r.d = (1 - w) * a.d + w * b.d;
  return r;
}

Doci2RDM noisy(Doci2RDM r, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, scale);
  for (int a = 0; a < r.L; ++a)
    for (int b = a; b < r.L; ++b) {
      const double x = d(rng), y = d(rng);
      r.pi(a, b) += x;
      if (a != b) {
        r.pi(b, a) += x;
        r.d(a, b) += y;
        r.d(b, a) += y;
      }
    }
  return r;
}

std::array<ConditionKind, 3> order(const char* s) {
  std::array<ConditionKind, 3> o{};
  for (int i = 0; i < 3; ++i) o[i] = s[i] == 'P' ? ConditionKind::P : s[i] == 'Q' ? ConditionKind::Q : ConditionKind::G;
  return o;
}

const char* kOrders[] = {"PQG", "PGQ", "QPG", "QGP", "GPQ", "GQP"};

}  // namespace

TEST_CASE("validate accepts exact pairing RDMs over a range of g") {
  for (double g = -1.0; g <= 1.0 + 1e-9; g += 0.25) {
    INFO("g=" << g);
    const Doci2RDM r = exact(8, 4, g);
    const auto rep = validate(r, 1e-10);
    CHECK(rep.all_satisfied());
    CHECK(violation_measure(r) <= 1e-10);
    CHECK(validate(embed(r), 1e-10).all_satisfied());
  }
}

TEST_CASE("validate reports exactly the one broken condition") {
  const Doci2RDM base = mix(exact(6, 3, -0.4), uniform(6, 3), 0.5);
  REQUIRE(validate(base).all_satisfied());

  Doci2RDM r = base;
  r.d(0, 1) += 0.01;
  r.d(1, 0) += 0.01;
  r.d(2, 3) -= 0.01;
  r.d(3, 2) -= 0.01;
  CHECK(validate(r).violated() == std::vector<std::string>{"rho_consistency"});

  const Spin2RDM s = embed(base);
  REQUIRE(validate(s).all_satisfied());
  const Spin2RDM scaled(s.L(), s.N(), s.packed() * (1.0 + 1e-4));
  CHECK(validate(scaled).violated() == std::vector<std::string>{"trace"});
  CHECK(validate(scaled).value("trace") == doctest::Approx(1e-4 * s.trace_target()).epsilon(1e-6));
}

TEST_CASE("validate reports injected defects") {
  Doci2RDM r = exact(6, 3, -0.3);
  Eigen::SelfAdjointEigenSolver<Matrix> es(r.pi);
  const Vector v = es.eigenvectors().col(0);
  r.pi += (-0.1 - es.eigenvalues()[0]) * v * v.transpose();
  CHECK(validate(r).value("min_eig_Pi") == doctest::Approx(-0.1).epsilon(1e-10));
  CHECK(violation_measure(r) >= 0.1);

  Doci2RDM big = exact(6, 3, -0.3);
  big.pi(2, 2) = 1.2;
  const auto rep = validate(big);
  CHECK_FALSE(rep.find("rho_max")->satisfied);
  CHECK(rep.value("trace_Pi") > 0.0);
}

TEST_CASE("violation measure adds negative eigenvalues") {
  Doci2RDM r = mix(exact(6, 3, -0.3), uniform(6, 3), 0.5);
  const double before = violation_measure(r);
  CHECK(before == 0.0);
  // an eigenvalue of -0.2 in Pi
  Eigen::SelfAdjointEigenSolver<Matrix> es(r.pi);
  const Vector v = es.eigenvectors().col(0);
  Doci2RDM s = r;
  s.pi += (-0.2 - es.eigenvalues()[0]) * v * v.transpose();
  const double after = violation_measure(s);
  CHECK(after >= 0.2 - 1e-12);
}

TEST_CASE("costs") {
  const Doci2RDM a = exact(5, 2, -0.3);
  CHECK(cost_doci(a, a) == 0.0);
  Doci2RDM b = a;
  b.pi(1, 3) += 0.01;
  CHECK(cost_doci(a, b) == doctest::Approx(1e-4 / 50.0).epsilon(1e-12));
  const Doci2RDM c = exact(5, 2, 0.2);
  CHECK(cost_doci(a, c) == cost_doci(c, a));
  // (2L)^4 sum over four-index tuples: each packed entry stands for 4 tuples
  const Spin2RDM sa = embed(a), sc = embed(c);
  double full = 0.0;
  for (int p = 0; p < 10; ++p)
    for (int q = 0; q < 10; ++q)
      for (int r = 0; r < 10; ++r)
        for (int t = 0; t < 10; ++t) full += std::pow(sa(p, q, r, t) - sc(p, q, r, t), 2);
  CHECK(cost_regular(sa, sc) == doctest::Approx(full / 1e4).epsilon(1e-12));
  CHECK_THROWS_AS(cost_doci(a, exact(6, 2, 0.1)), DimensionError);
}

TEST_CASE("fix config checks") {
  FixConfig c;
  c.tol_eig = 0;
  CHECK_THROWS_AS(c.check(), DomainError);
  c = {};
  c.max_sweeps = 0;
  CHECK_THROWS_AS(c.check(), DomainError);
  c = {};
  c.order = {ConditionKind::P, ConditionKind::P, ConditionKind::G};
  CHECK_THROWS_AS(c.check(), DomainError);
  CHECK_THROWS_AS(fix_regular(embed(exact(4, 2, 0.1)) , [] {
    FixConfig f;
    f.tol_trace = -1;
    return f;
  }()), DomainError);
}

TEST_CASE("regular fixer preconditions") {
  Spin2RDM s = embed(exact(4, 2, -0.2));
  CHECK_THROWS_AS(fix_regular(Spin2RDM(s.L(), s.N(), s.packed() * 1.5)), DomainError);
  CHECK_THROWS_AS(fix_regular(Spin2RDM(4, 3)), DomainError);
  CHECK_THROWS_AS(fix_doci(Doci2RDM(4, 3)), DomainError);
}

TEST_CASE("exact RDMs pass through both fixers unchanged") {
  const Doci2RDM r = exact(12, 6, -0.2);
  const auto fd = fix_doci(r);
  CHECK(fd.report.converged);
  CHECK(fd.report.sweeps_used == 1);
  CHECK(std::sqrt((fd.rdm.pi - r.pi).squaredNorm() + (fd.rdm.d - r.d).squaredNorm()) <= 1e-9);
  const Doci2RDM small = exact(6, 3, 0.3);
  const auto fr = fix_regular(embed(small));
  CHECK(fr.report.converged);
  CHECK(fr.report.sweeps_used == 1);
  CHECK((fr.rdm.packed() - embed(small).packed()).norm() <= 1e-9);
}

TEST_CASE("two-level DOCI input") {
  Doci2RDM r(2, 2);
  r.pi << 1.0, 0.5, 0.5, 0.0;
  const auto out = fix_doci(r);
  CHECK(out.report.converged);
  CHECK(out.rdm.pi.trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(specproj::min_eigenvalue(specproj::symmetrize(out.rdm.pi)) >= -1e-8);
  for (const auto& b : g2x2_blocks(out.rdm)) CHECK(specproj::min_eigenvalue(b.entries) >= -1e-8);
  CHECK(validate(out.rdm).all_satisfied());
}

TEST_CASE("noisy DOCI input is repaired close to the original") {
  const double scale = 1e-3;
  const Doci2RDM ex = exact(8, 4, -0.3);
  const Doci2RDM in = noisy(ex, scale, 3);
  CHECK(violation_measure(in) > 0.0);
  const auto out = fix_doci(in);
  CHECK(out.report.converged);
  CHECK(validate(out.rdm).violated() == std::vector<std::string>{"rho_consistency"});
  CHECK(cost_doci(in, out.rdm) <= 10 * scale * scale);
  CHECK(out.report.final_cost == cost_doci(in, out.rdm));
  // triangle inequality on the induced norms
  CHECK(std::sqrt(cost_doci(in, out.rdm)) <=
        std::sqrt(cost_doci(in, ex)) + std::sqrt(cost_doci(ex, out.rdm)) + 1e-15);
  // idempotent
  const auto again = fix_doci(out.rdm);
  CHECK(std::sqrt((again.rdm.pi - out.rdm.pi).squaredNorm() + (again.rdm.d - out.rdm.d).squaredNorm()) <= 1e-8);

  const auto last = out.report.sweeps.back();
  CHECK(last.conditions.size() == 6);
  CHECK(last.frobenius_change <= 1e-8);
}

TEST_CASE("DOCI fixer options") {
  const Doci2RDM in = noisy(exact(6, 3, -0.4), 2e-3, 17);
  FixConfig seq;
  seq.sequential_g2x2 = true;
  const auto a = fix_doci(in, seq);
  CHECK(a.report.converged);
  FixConfig rho;
  rho.enforce_rho_consistency = true;
  rho.max_sweeps = 2000;
  const auto b = fix_doci(in, rho);
  CHECK(doci_rho_consistency(b.rdm) < doci_rho_consistency(fix_doci(in).rdm));
  FixConfig zs;
  zs.strategy = specproj::Strategy::ZeroAndShift;
  const auto c = fix_doci(in, zs);
  const auto d = fix_doci(in);
  CHECK(c.report.converged);
  CHECK(cost_doci(c.rdm, d.rdm) < 1e-14);
}

TEST_CASE("regular fixer on noisy embedded input keeps the seniority structure") {
  const double scale = 1e-3;
  const Doci2RDM ex = exact(5, 2, -0.3);
  const Spin2RDM in = embed(noisy(ex, scale, 21));
  CHECK(violation_measure(in) > 0.0);
  const auto out = fix_regular(in);
  CHECK(out.report.converged);
  CHECK(validate(out.rdm).all_satisfied());
  CHECK(std::abs(out.rdm.trace() - out.rdm.trace_target()) <= 1e-10);
  CHECK(cost_regular(in, out.rdm) <= 10 * scale * scale);
  CHECK(off_seniority_magnitude(out.rdm) <= 1e-6);
  const auto again = fix_regular(out.rdm);
  CHECK(2.0 * (again.rdm.packed() - out.rdm.packed()).norm() <= 1e-8);
}

TEST_CASE("regular fixer on a general noisy RDM") {
  const Spin2RDM ex = oracle::spin_rdm(oracle::random_wavefunction(3, 2, 31), 3, 2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, 1e-2);
  Matrix e(ex.pair_dim(), ex.pair_dim());
  for (auto& x : e.reshaped()) x = d(rng);
  const Spin2RDM in(3, 2, ex.packed() + e);
  const auto out = fix_regular(in);
  CHECK(out.report.converged);
  CHECK(out.report.max_trace_error() <= 1e-10);
  CHECK(out.report.min_eigenvalue() >= -1e-8);
  CHECK(validate(out.rdm).all_satisfied());
}

TEST_CASE("condition order hardly matters") {
  const auto m = pairing::PairingModel::picket_fence(8, 4, 1.0, -0.4);
  const Doci2RDM resp = pairing::response_doci_rdms(m).rdm;
  std::vector<Doci2RDM> outs;
  for (const char* o : kOrders) {
    FixConfig c;
    c.order = order(o);
    const auto r = fix_doci(resp, c);
    INFO(o);
    CHECK(r.report.converged);
    outs.push_back(r.rdm);
  }
  for (const auto& x : outs) CHECK(cost_doci(x, outs.front()) <= 1e-4);

  const Spin2RDM sresp = embed(pairing::response_doci_rdms(pairing::PairingModel::picket_fence(4, 2, 1.0, -0.6)).rdm);
  std::vector<Spin2RDM> souts;
  for (const char* o : kOrders) {
    FixConfig c;
    c.order = order(o);
    const auto r = fix_regular(sresp, c);
    INFO(o);
    CHECK(r.report.converged);
    souts.push_back(r.rdm);
  }
  for (const auto& x : souts) CHECK(cost_regular(x, souts.front()) <= 1e-4);
}

TEST_CASE("non-convergence returns the best iterate with a flag") {
  const Doci2RDM in = noisy(exact(6, 3, -0.3), 5e-2, 2);
  FixConfig c;
  c.max_sweeps = 1;
  const auto r = fix_doci(in, c);
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.sweeps_used == 1);
  CHECK(r.report.sweeps.size() == 1);
}

TEST_CASE("fixed pCCD response energy sits above the exact energy") {
  const auto m = pairing::PairingModel::picket_fence(12, 6, 1.0, -0.5);
  const auto resp = pairing::response_doci_rdms(m);
  REQUIRE(resp.converged);
  const auto out = fix_doci(resp.rdm);
  CHECK(out.report.converged);
  CHECK(pairing::pairing_energy_from_rdm(m, out.rdm) >= pairing::exact_ground(m).energy);
}
