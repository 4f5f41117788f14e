#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "rdmfix/errors.hpp"
#include "rdmfix/pairing.hpp"

namespace rdmfix::pairing {

void PairingModel::check() const {
  if (pairs < 1 || pairs > levels())
    throw DomainError("pair count " + std::to_string(pairs) + " must lie in [1, " + std::to_string(levels()) + "]");
  for (double e : eps)
    if (!std::isfinite(e)) throw DomainError("single-particle energies must be finite");
  if (!std::isfinite(g)) throw DomainError("interaction strength must be finite");
}

PairingModel PairingModel::picket_fence(int levels, int pairs, double spacing, double g) {
  PairingModel m;
  m.eps.resize(static_cast<std::size_t>(std::max(levels, 0)));
  for (int p = 0; p < levels; ++p) m.eps[static_cast<std::size_t>(p)] = (p + 1) * spacing;
  m.g = g;
  m.pairs = pairs;
  m.check();
  return m;
}

SeniorityZeroHamiltonian SeniorityZeroHamiltonian::from_model(const PairingModel& m) {
  m.check();
  const int L = m.levels();
  SeniorityZeroHamiltonian h;
  h.e.resize(L);
  for (int p = 0; p < L; ++p) h.e[p] = 2.0 * m.eps[static_cast<std::size_t>(p)];
  h.pair_hop = Eigen::MatrixXd::Constant(L, L, m.g);
  h.density = Eigen::MatrixXd::Zero(L, L);
  h.pairs = m.pairs;
  return h;
}

DociBasis::DociBasis(int levels, int pairs) : levels_(levels), pairs_(pairs) {
  if (levels < 1 || levels > 63) throw DomainError("DOCI basis supports 1..63 levels");
  if (pairs < 0 || pairs > levels) throw DomainError("pair count out of range");
  if (pairs == 0) {
    configs_.push_back(0);
    return;
  }
  // Gosper's hack: next larger integer with the same popcount.
  std::uint64_t v = (std::uint64_t{1} << pairs) - 1;
  const std::uint64_t limit = std::uint64_t{1} << levels;
  while (v < limit) {
    configs_.push_back(v);
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
}

std::size_t DociBasis::find(std::uint64_t mask) const {
  const auto it = std::lower_bound(configs_.begin(), configs_.end(), mask);
  if (it == configs_.end() || *it != mask) return configs_.size();
  return static_cast<std::size_t>(it - configs_.begin());
}

namespace {

void check_dense(std::size_t dim) {
  if (dim > kMaxDenseDim)
    throw DomainError("DOCI dimension " + std::to_string(dim) + " exceeds dense limit " + std::to_string(kMaxDenseDim));
}

bool occupied(std::uint64_t mask, int p) { return (mask >> p) & 1u; }

}  // namespace

Eigen::MatrixXd build_hamiltonian(const SeniorityZeroHamiltonian& h, const DociBasis& basis) {
  const int L = h.levels();
  if (L != basis.levels() || h.pair_hop.rows() != L || h.pair_hop.cols() != L || h.density.rows() != L ||
      h.density.cols() != L)
    throw DimensionError("Hamiltonian and basis level counts differ");
  check_dense(basis.dim());
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const std::uint64_t mask = basis.config(static_cast<std::size_t>(k));
    double diag = 0.0;
    for (int p = 0; p < L; ++p) {
      if (!occupied(mask, p)) continue;
      diag += h.e[p] + h.pair_hop(p, p);
      for (int q = 0; q < L; ++q)
        if (q != p && occupied(mask, q)) diag += h.density(p, q);
    }
    H(k, k) = diag;
    // S+_p S_q moves the pair on q to the empty level p.
    for (int q = 0; q < L; ++q) {
      if (!occupied(mask, q)) continue;
      for (int p = 0; p < L; ++p) {
        if (occupied(mask, p)) continue;
        const std::uint64_t target = (mask & ~(std::uint64_t{1} << q)) | (std::uint64_t{1} << p);
        const auto j = static_cast<Eigen::Index>(basis.find(target));
        H(j, k) += h.pair_hop(p, q);
      }
    }
  }
  return 0.5 * (H + H.transpose());
}

Eigen::MatrixXd build_hamiltonian(const PairingModel& m) {
  m.check();
  return build_hamiltonian(SeniorityZeroHamiltonian::from_model(m), DociBasis(m.levels(), m.pairs));
}

namespace {

std::vector<ExactGround> diagonalize(const Eigen::MatrixXd& H, bool ground_only) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("pairing Hamiltonian diagonalization failed");
  std::vector<ExactGround> out;
  const Eigen::Index count = ground_only ? 1 : H.rows();
  for (Eigen::Index k = 0; k < count; ++k) {
    ExactGround g;
    g.energy = es.eigenvalues()[k];
    g.ci = es.eigenvectors().col(k).normalized();
    for (Eigen::Index i = 0; i < g.ci.size(); ++i) {
      if (std::abs(g.ci[i]) > 1e-14) {
        if (g.ci[i] < 0.0) g.ci = -g.ci;
        break;
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

ExactGround exact_ground(const SeniorityZeroHamiltonian& h) {
  return diagonalize(build_hamiltonian(h, DociBasis(h.levels(), h.pairs)), true).front();
}

ExactGround exact_ground(const PairingModel& m) { return diagonalize(build_hamiltonian(m), true).front(); }

std::vector<ExactGround> exact_spectrum(const PairingModel& m) { return diagonalize(build_hamiltonian(m), false); }

Doci2RDM doci_rdms_from_ci(const DociBasis& basis, const Eigen::VectorXd& ci) {
  if (static_cast<std::size_t>(ci.size()) != basis.dim()) throw DimensionError("CI vector does not match the basis");
  const int L = basis.levels();
  Doci2RDM r(L, 2 * basis.pairs());
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const std::uint64_t mask = basis.config(k);
    const double ck = ci[static_cast<Eigen::Index>(k)];
    for (int b = 0; b < L; ++b) {
      if (!occupied(mask, b)) continue;
      r.pi(b, b) += ck * ck;
      for (int a = 0; a < L; ++a) {
        if (a == b) continue;
        if (occupied(mask, a)) {
          r.d(a, b) += ck * ck;
        } else {
          // <S+_a S_b>: K -> K - b + a
          const std::uint64_t target = (mask & ~(std::uint64_t{1} << b)) | (std::uint64_t{1} << a);
          r.pi(a, b) += ci[static_cast<Eigen::Index>(basis.find(target))] * ck;
        }
      }
    }
  }
  r.pi = 0.5 * (r.pi + r.pi.transpose()).eval();
  r.d = 0.5 * (r.d + r.d.transpose()).eval();
  return r;
}

Doci2RDM exact_doci_rdms(const PairingModel& m) {
  const ExactGround g = exact_ground(m);
  return doci_rdms_from_ci(DociBasis(m.levels(), m.pairs), g.ci);
}

double pairing_energy_from_rdm(const PairingModel& m, const Doci2RDM& r) {
  if (r.L != m.levels()) throw DimensionError("RDM and model level counts differ");
  double e = m.g * r.pi.sum();
  for (int a = 0; a < r.L; ++a) e += 2.0 * m.eps[static_cast<std::size_t>(a)] * r.pi(a, a);
  return e;
}

Eigen::MatrixXd pairing_k_pi(const PairingModel& m) {
  const int L = m.levels();
  Eigen::MatrixXd k = Eigen::MatrixXd::Constant(L, L, m.g);
  for (int a = 0; a < L; ++a) k(a, a) += 2.0 * m.eps[static_cast<std::size_t>(a)];
  return k;
}

Eigen::MatrixXd pairing_k_d(const PairingModel& m) { return Eigen::MatrixXd::Zero(m.levels(), m.levels()); }

}  // namespace rdmfix::pairing
