#pragma once

// Reduced density matrices and the 2-positivity condition matrices.
//
// Spin orbitals are numbered 2a (a up) and 2a+1 (a down) for spatial
// orbital a = 0..L-1. A two-particle object over n = 2L spin orbitals is
// stored on the antisymmetric pair basis {(alpha, beta) : alpha < beta} of
// size n(n-1)/2; the four-index accessor expands the antisymmetry signs.
//
// Traces follow the physics convention sum_{alpha beta} Gamma_{alpha beta
// alpha beta} = N(N-1), which is twice the trace of the packed matrix.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdmfix/specproj.hpp"

namespace rdmfix {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using specproj::SymMatrix;

// Index map for ordered pairs alpha < beta over n spin orbitals.
class PairBasis {
 public:
  explicit PairBasis(int spin_orbitals);

  int spin_orbitals() const { return n_; }
  int size() const { return n_ * (n_ - 1) / 2; }
  // Requires alpha < beta.
  int index(int alpha, int beta) const { return alpha * n_ - alpha * (alpha + 1) / 2 + (beta - alpha - 1); }
  std::pair<int, int> pair(int k) const { return pairs_[static_cast<std::size_t>(k)]; }

 private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
};

inline int spin_up(int a) { return 2 * a; }
inline int spin_down(int a) { return 2 * a + 1; }

struct OneRDM {
  Matrix rho;  // 2L x 2L, symmetric
  double trace() const { return rho.trace(); }
};

class Spin2RDM {
 public:
  Spin2RDM(int L, int N);
  // `packed` must be the K x K pair-basis matrix; it is symmetrized.
  Spin2RDM(int L, int N, const Matrix& packed);

  int L() const { return L_; }
  int N() const { return N_; }
  int spin_orbitals() const { return 2 * L_; }
  int pair_dim() const { return basis_.size(); }
  const PairBasis& basis() const { return basis_; }

  const Matrix& packed() const { return packed_; }
  // Sets the pair-basis entry and its transpose.
  void set_packed(int p, int q, double v) {
    packed_(p, q) = v;
    packed_(q, p) = v;
  }

  // Gamma_{alpha beta gamma delta} with antisymmetry signs; zero when an
  // index repeats within a pair.
  double operator()(int alpha, int beta, int gamma, int delta) const;
  // Writes Gamma_{alpha beta gamma delta} and every entry related to it by
  // the symmetry of the 2-RDM.
  void set(int alpha, int beta, int gamma, int delta, double v);

  double trace() const { return 2.0 * packed_.trace(); }
  double trace_target() const { return static_cast<double>(N_) * (N_ - 1); }

 private:
  int L_;
  int N_;
  PairBasis basis_;
  Matrix packed_;
};

// Seniority-zero 2-RDM: pair matrix Pi_{ab} = <S+_a S_b> and exchange
// matrix D_{ab} = <n_a n_b> (a != b), D_{aa} = 0.
struct Doci2RDM {
  int L = 0;
  int N = 0;
  Matrix pi;
  Matrix d;

  Doci2RDM() = default;
  Doci2RDM(int L_, int N_) : L(L_), N(N_), pi(Matrix::Zero(L_, L_)), d(Matrix::Zero(L_, L_)) {}

  int pairs() const { return N / 2; }
  double pi_trace_target() const { return pairs(); }
  double d_sum_target() const { return static_cast<double>(pairs()) * (pairs() - 1); }
};

enum class ConditionKind { P, Q, G, QPi, QD, GPi, G2x2 };
std::string to_string(ConditionKind k);

struct ConditionMatrix {
  ConditionKind kind = ConditionKind::P;
  int L = 0;
  int N = 0;
  // P, Q: pair basis. G: composite index alpha*2L + beta. DOCI kinds: L x L
  // (Q^D diagonal is zero and ignored). G2x2: 2 x 2 for `label`.
  SymMatrix entries;
  // Physics-convention trace target; NaN for kinds without one (G2x2).
  double trace_target = 0.0;
  std::pair<int, int> label{-1, -1};
  std::optional<std::string> warning;

  // Physics-convention trace of `entries` (packed trace doubled for P/Q,
  // sum of all entries for Q^D).
  double trace() const;
  // Trace target expressed for the stored matrix (what a projection must hit).
  double stored_trace_target() const;
  bool has_trace_target() const;
};

double trace_target(ConditionKind kind, int L, int N);

// rho_{alpha gamma} = (1/(N-1)) sum_beta Gamma_{alpha beta gamma beta}.
OneRDM contract_one_rdm(const Spin2RDM& g2);

ConditionMatrix p_matrix(const Spin2RDM& g2);
ConditionMatrix q_from_p(const Spin2RDM& g2, const OneRDM& rho);
ConditionMatrix g_from_p(const Spin2RDM& g2, const OneRDM& rho);

struct Recovered {
  Spin2RDM gamma;
  OneRDM rho;
};

// Inverse of the Q map. `fallback_rho` is used when 2L - N - 1 == 0.
Recovered p_from_q(const ConditionMatrix& q, const std::optional<OneRDM>& fallback_rho = std::nullopt);
// Inverse of the G map; the result is re-antisymmetrized.
Recovered p_from_g(const ConditionMatrix& g);

// Q^Pi, Q^D, G^Pi followed by the L(L-1)/2 G2x2 blocks (a < b, row-major).
std::vector<ConditionMatrix> doci_conditions(const Doci2RDM& r);
ConditionMatrix doci_condition(ConditionKind kind, const Doci2RDM& r);
std::vector<ConditionMatrix> g2x2_blocks(const Doci2RDM& r);

// Maps a (projected) Q^Pi, Q^D or G^Pi back onto the DOCI 2-RDM. Entries not
// determined by `c` are taken from `context`.
Doci2RDM doci_invert(ConditionKind kind, const ConditionMatrix& c, const Doci2RDM& context);
// Reconciles a full family of (projected) G2x2 blocks: Pi_aa takes the mean
// of its L-1 per-block proposals, D_ab the mean of its two diagonal-derived
// proposals, Pi_ab the off-diagonal entry.
Doci2RDM doci_invert_g2x2(const std::vector<ConditionMatrix>& blocks, const Doci2RDM& context);

// rho_a from the D row sums, (1/(N/2 - 1)) sum_b D_ab. Undefined for N/2 == 1.
Vector doci_rho_from_d(const Doci2RDM& r);
double doci_rho_consistency(const Doci2RDM& r);
// Rescales D rows toward rho-consistency with Pi_aa (symmetrized).
Doci2RDM enforce_rho_consistency(const Doci2RDM& r);

// Seniority-zero 2-RDM expanded into the spin-orbital pair basis.
Spin2RDM embed(const Doci2RDM& r);
// Reads Pi and D back out of a spin-orbital 2-RDM (D averaged over its four
// spin blocks).
Doci2RDM extract_doci(const Spin2RDM& g2);
// Sum of |entries| of the packed matrix outside the seniority-zero pattern.
double off_seniority_magnitude(const Spin2RDM& g2);

struct ConditionCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool satisfied = true;
};

struct ValidationReport {
  std::vector<ConditionCheck> checks;
  bool all_satisfied() const;
  std::vector<std::string> violated() const;
  const ConditionCheck* find(const std::string& name) const;
  double value(const std::string& name) const;
};

ValidationReport validate(const Spin2RDM& g2, double tol = 1e-8);
ValidationReport validate(const Doci2RDM& r, double tol = 1e-8);

// E = 1/2 sum Gamma K over all four indices, with K given on the pair basis
// (antisymmetrized reduced Hamiltonian) = 2 <Gamma, K>_packed.
double energy(const Spin2RDM& g2, const Matrix& k_packed);
// E = sum_ab (K^Pi_ab Pi_ab + K^D_ab D_ab); K^D diagonal ignored.
double doci_energy(const Doci2RDM& r, const Matrix& k_pi, const Matrix& k_d);
// Pair-basis reduced Hamiltonian reproducing doci_energy on embedded RDMs.
Matrix spin_hamiltonian_from_doci(const Matrix& k_pi, const Matrix& k_d);

}  // namespace rdmfix
