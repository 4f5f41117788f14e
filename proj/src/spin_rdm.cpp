#include <cmath>
#include <limits>
#include <string>

#include "rdmfix/errors.hpp"
#include "rdmfix/rdm.hpp"

namespace rdmfix {

namespace {

// Antisymmetric four-index read from a pair-basis matrix.
double antisym_get(const Matrix& packed, const PairBasis& basis, int a, int b, int c, int d) {
  if (a == b || c == d) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -sign;
  }
  if (c > d) {
    std::swap(c, d);
    sign = -sign;
  }
  return sign * packed(basis.index(a, b), basis.index(c, d));
}

void check_dims(int L, int N) {
  if (L < 1) throw DimensionError("spatial orbital count must be positive");
  if (N < 0 || N > 2 * L) throw DimensionError("electron count " + std::to_string(N) + " incompatible with L=" + std::to_string(L));
}

void check_rho(const OneRDM& rho, int n) {
  if (rho.rho.rows() != n || rho.rho.cols() != n)
    throw DimensionError("1-RDM must be " + std::to_string(n) + "x" + std::to_string(n));
}

inline double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

PairBasis::PairBasis(int spin_orbitals) : n_(spin_orbitals) {
  pairs_.reserve(static_cast<std::size_t>(size()));
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b) pairs_.emplace_back(a, b);
}

Spin2RDM::Spin2RDM(int L, int N) : L_(L), N_(N), basis_(2 * L) {
  check_dims(L, N);
  packed_ = Matrix::Zero(basis_.size(), basis_.size());
}

Spin2RDM::Spin2RDM(int L, int N, const Matrix& packed) : Spin2RDM(L, N) {
  if (packed.rows() != basis_.size() || packed.cols() != basis_.size())
    throw DimensionError("packed 2-RDM must be " + std::to_string(basis_.size()) + " square");
  packed_ = specproj::symmetrize(packed).full();
}

double Spin2RDM::operator()(int alpha, int beta, int gamma, int delta) const {
  return antisym_get(packed_, basis_, alpha, beta, gamma, delta);
}

void Spin2RDM::set(int alpha, int beta, int gamma, int delta, double v) {
  if (alpha == beta || gamma == delta) return;
  double sign = 1.0;
  if (alpha > beta) {
    std::swap(alpha, beta);
    sign = -sign;
  }
  if (gamma > delta) {
    std::swap(gamma, delta);
    sign = -sign;
  }
  set_packed(basis_.index(alpha, beta), basis_.index(gamma, delta), sign * v);
}

std::string to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::P: return "P";
    case ConditionKind::Q: return "Q";
    case ConditionKind::G: return "G";
    case ConditionKind::QPi: return "QPi";
    case ConditionKind::QD: return "QD";
    case ConditionKind::GPi: return "GPi";
    case ConditionKind::G2x2: return "G2x2";
  }
  return "?";
}

double trace_target(ConditionKind kind, int L, int N) {
  const double n = 2.0 * L;
  const double np = N / 2.0;
  switch (kind) {
    case ConditionKind::P: return static_cast<double>(N) * (N - 1);
    case ConditionKind::Q: return (n - N) * (n - N - 1);
    case ConditionKind::G: return N * (n - N + 1);
    case ConditionKind::QPi: return L - np;
    case ConditionKind::QD: return (L - np) * (L - np - 1);
    case ConditionKind::GPi: return np;
    case ConditionKind::G2x2: return std::numeric_limits<double>::quiet_NaN();
  }
  return 0.0;
}

double ConditionMatrix::trace() const {
  switch (kind) {
    case ConditionKind::P:
    case ConditionKind::Q: return 2.0 * entries.trace();
    case ConditionKind::QD: return entries.full().sum() - entries.trace();
    default: return entries.trace();
  }
}

double ConditionMatrix::stored_trace_target() const {
  if (kind == ConditionKind::P || kind == ConditionKind::Q) return 0.5 * trace_target;
  return trace_target;
}

bool ConditionMatrix::has_trace_target() const { return kind != ConditionKind::G2x2; }

OneRDM contract_one_rdm(const Spin2RDM& g2) {
  if (g2.N() < 2) throw DomainError("1-RDM contraction needs N >= 2 (divides by N-1)");
  const int n = g2.spin_orbitals();
  OneRDM out{Matrix::Zero(n, n)};
  const double scale = 1.0 / (g2.N() - 1);
  for (int a = 0; a < n; ++a) {
    for (int c = a; c < n; ++c) {
      double acc = 0.0;
      for (int b = 0; b < n; ++b) acc += g2(a, b, c, b);
      out.rho(a, c) = acc * scale;
      out.rho(c, a) = acc * scale;
    }
  }
  return out;
}

ConditionMatrix p_matrix(const Spin2RDM& g2) {
  ConditionMatrix c;
  c.kind = ConditionKind::P;
  c.L = g2.L();
  c.N = g2.N();
  c.entries = SymMatrix::from_upper(g2.packed());
  c.trace_target = trace_target(ConditionKind::P, g2.L(), g2.N());
  return c;
}

ConditionMatrix q_from_p(const Spin2RDM& g2, const OneRDM& rho) {
  const int n = g2.spin_orbitals();
  check_rho(rho, n);
  const PairBasis& basis = g2.basis();
  const int k = basis.size();
  const Matrix& r = rho.rho;
  ConditionMatrix c;
  c.kind = ConditionKind::Q;
  c.L = g2.L();
  c.N = g2.N();
  c.trace_target = trace_target(ConditionKind::Q, g2.L(), g2.N());
  c.entries = SymMatrix(k);
  for (int p = 0; p < k; ++p) {
    const auto [a, b] = basis.pair(p);
    for (int q = p; q < k; ++q) {
      const auto [g, d] = basis.pair(q);
      // With a < b and g < d the term delta_ad delta_bg never fires.
      double v = g2.packed()(p, q) + kron(b, d) * kron(a, g);
      v += -kron(b, d) * r(a, g) + kron(a, d) * r(b, g) + kron(b, g) * r(a, d) - kron(a, g) * r(b, d);
      c.entries.set(p, q, v);
    }
  }
  if (g2.N() >= 2) {
    const double mismatch = (contract_one_rdm(g2).rho - r).cwiseAbs().maxCoeff();
    if (mismatch > 1e-8) c.warning = "1-RDM differs from contraction of 2-RDM by " + std::to_string(mismatch);
  }
  return c;
}

ConditionMatrix g_from_p(const Spin2RDM& g2, const OneRDM& rho) {
  const int n = g2.spin_orbitals();
  check_rho(rho, n);
  const Matrix& r = rho.rho;
  ConditionMatrix c;
  c.kind = ConditionKind::G;
  c.L = g2.L();
  c.N = g2.N();
  c.trace_target = trace_target(ConditionKind::G, g2.L(), g2.N());
  c.entries = SymMatrix(n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int row = a * n + b;
      for (int g = 0; g < n; ++g) {
        for (int d = 0; d < n; ++d) {
          const int col = g * n + d;
          if (col < row) continue;
          c.entries.set(row, col, kron(b, d) * r(a, g) - g2(a, d, g, b));
        }
      }
    }
  }
  if (g2.N() >= 2) {
    const double mismatch = (contract_one_rdm(g2).rho - r).cwiseAbs().maxCoeff();
    if (mismatch > 1e-8) c.warning = "1-RDM differs from contraction of 2-RDM by " + std::to_string(mismatch);
  }
  return c;
}

Recovered p_from_q(const ConditionMatrix& q, const std::optional<OneRDM>& fallback_rho) {
  if (q.kind != ConditionKind::Q) throw DimensionError("p_from_q expects a Q matrix");
  const int n = 2 * q.L;
  const PairBasis basis(n);
  if (q.entries.dim() != basis.size()) throw DimensionError("Q matrix does not match the pair basis");
  const Matrix& qm = q.entries.full();

  OneRDM rho{Matrix::Zero(n, n)};
  const int denom = n - q.N - 1;
  if (denom == 0) {
    if (!fallback_rho) throw DomainError("Q contraction is degenerate (2L-N-1 = 0) and no fallback 1-RDM given");
    check_rho(*fallback_rho, n);
    rho = *fallback_rho;
  } else {
    // sum_beta Q_{a beta g beta} = (2L-N-1)(delta_ag - rho_ag)
    for (int a = 0; a < n; ++a) {
      for (int g = a; g < n; ++g) {
        double acc = 0.0;
        for (int b = 0; b < n; ++b) acc += antisym_get(qm, basis, a, b, g, b);
        const double v = kron(a, g) - acc / denom;
        rho.rho(a, g) = v;
        rho.rho(g, a) = v;
      }
    }
  }

  Spin2RDM gamma(q.L, q.N);
  const Matrix& r = rho.rho;
  for (int p = 0; p < basis.size(); ++p) {
    const auto [a, b] = basis.pair(p);
    for (int s = p; s < basis.size(); ++s) {
      const auto [g, d] = basis.pair(s);
      double v = qm(p, s) - kron(b, d) * kron(a, g);
      v += kron(b, d) * r(a, g) - kron(a, d) * r(b, g) - kron(b, g) * r(a, d) + kron(a, g) * r(b, d);
      gamma.set_packed(p, s, v);
    }
  }
  return {std::move(gamma), std::move(rho)};
}

Recovered p_from_g(const ConditionMatrix& g) {
  if (g.kind != ConditionKind::G) throw DimensionError("p_from_g expects a G matrix");
  const int n = 2 * g.L;
  if (g.entries.dim() != n * n) throw DimensionError("G matrix must be (2L)^2 square");
  const Matrix& gm = g.entries.full();
  auto at = [&](int a, int b, int c, int d) { return gm(a * n + b, c * n + d); };

  // sum_beta G_{a beta g beta} = (2L-N+1) rho_ag
  const double denom = n - g.N + 1;
  OneRDM rho{Matrix::Zero(n, n)};
  for (int a = 0; a < n; ++a) {
    for (int c = a; c < n; ++c) {
      double acc = 0.0;
      for (int b = 0; b < n; ++b) acc += at(a, b, c, b);
      rho.rho(a, c) = acc / denom;
      rho.rho(c, a) = acc / denom;
    }
  }
  const Matrix& r = rho.rho;
  // Gamma_{x y z w} = delta_{w y} rho_{x z} - G_{x w z y}
  auto raw = [&](int x, int y, int z, int w) { return kron(w, y) * r(x, z) - at(x, w, z, y); };

  Spin2RDM gamma(g.L, g.N);
  const PairBasis& basis = gamma.basis();
  Matrix packed(basis.size(), basis.size());
  for (int p = 0; p < basis.size(); ++p) {
    const auto [a, b] = basis.pair(p);
    for (int s = 0; s < basis.size(); ++s) {
      const auto [c, d] = basis.pair(s);
      packed(p, s) = 0.25 * (raw(a, b, c, d) - raw(b, a, c, d) - raw(a, b, d, c) + raw(b, a, d, c));
    }
  }
  gamma = Spin2RDM(g.L, g.N, packed);
  return {std::move(gamma), std::move(rho)};
}

Spin2RDM embed(const Doci2RDM& r) {
  Spin2RDM g2(r.L, r.N);
  for (int a = 0; a < r.L; ++a) {
    for (int b = a; b < r.L; ++b) {
      g2.set(spin_up(a), spin_down(a), spin_up(b), spin_down(b), 0.5 * (r.pi(a, b) + r.pi(b, a)));
      if (a == b) continue;
      const double dab = 0.5 * (r.d(a, b) + r.d(b, a));
      for (int x : {spin_up(a), spin_down(a)})
        for (int y : {spin_up(b), spin_down(b)}) g2.set(x, y, x, y, dab);
    }
  }
  return g2;
}

Doci2RDM extract_doci(const Spin2RDM& g2) {
  if (g2.N() % 2 != 0) throw DomainError("seniority-zero 2-RDM needs an even electron count");
  Doci2RDM r(g2.L(), g2.N());
  for (int a = 0; a < r.L; ++a) {
    for (int b = 0; b < r.L; ++b) {
      r.pi(a, b) = g2(spin_up(a), spin_down(a), spin_up(b), spin_down(b));
      if (a == b) continue;
      double acc = 0.0;
      for (int x : {spin_up(a), spin_down(a)})
        for (int y : {spin_up(b), spin_down(b)}) acc += g2(x, y, x, y);
      r.d(a, b) = 0.25 * acc;
    }
  }
  return r;
}

double off_seniority_magnitude(const Spin2RDM& g2) {
  const PairBasis& basis = g2.basis();
  auto is_pair = [](std::pair<int, int> p) { return p.first / 2 == p.second / 2; };
  double acc = 0.0;
  for (int p = 0; p < basis.size(); ++p) {
    const bool pp = is_pair(basis.pair(p));
    for (int q = 0; q < basis.size(); ++q) {
      if (p == q) continue;
      if (pp && is_pair(basis.pair(q))) continue;
      acc += std::abs(g2.packed()(p, q));
    }
  }
  return acc;
}

double energy(const Spin2RDM& g2, const Matrix& k_packed) {
  if (k_packed.rows() != g2.pair_dim() || k_packed.cols() != g2.pair_dim())
    throw DimensionError("reduced Hamiltonian does not match the pair basis");
  return 2.0 * g2.packed().cwiseProduct(k_packed).sum();
}

Matrix spin_hamiltonian_from_doci(const Matrix& k_pi, const Matrix& k_d) {
  const Eigen::Index L = k_pi.rows();
  if (k_pi.cols() != L || k_d.rows() != L || k_d.cols() != L)
    throw DimensionError("K^Pi and K^D must be L x L");
  const PairBasis basis(static_cast<int>(2 * L));
  Matrix k = Matrix::Zero(basis.size(), basis.size());
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      const int p = basis.index(spin_up(a), spin_down(a));
      const int q = basis.index(spin_up(b), spin_down(b));
      k(p, q) = 0.25 * (k_pi(a, b) + k_pi(b, a));
      if (a >= b) continue;
      const double kd = 0.125 * (k_d(a, b) + k_d(b, a));
      for (int x : {spin_up(a), spin_down(a)})
        for (int y : {spin_up(b), spin_down(b)}) {
          const int s = basis.index(x, y);
          k(s, s) = kd;
        }
    }
  }
  return k;
}

}  // namespace rdmfix
