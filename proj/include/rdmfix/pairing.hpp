#pragma once

// Reduced BCS (Richardson) pairing Hamiltonian
//     H = sum_p eps_p (n_p,up + n_p,down) + g sum_pq S+_p S_q
// restricted to the seniority-zero sector, where it is exact for the ground
// state. Provides an exact diagonalization oracle and the pair coupled
// cluster doubles (pCCD / AP1roG) projected solution with its response
// 2-RDM.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "rdmfix/rdm.hpp"

namespace rdmfix::pairing {

struct PairingModel {
  std::vector<double> eps;  // single-particle energies, one per level
  double g = 0.0;
  int pairs = 1;

  int levels() const { return static_cast<int>(eps.size()); }
  int electrons() const { return 2 * pairs; }
  // Throws DomainError unless 1 <= pairs <= levels and every eps is finite.
  void check() const;

  // eps_p = (p + 1) * spacing, p = 0..L-1.
  static PairingModel picket_fence(int levels, int pairs, double spacing, double g);
};

// General seniority-zero Hamiltonian
//     H = sum_p e_p N_p + sum_pq G_pq S+_p S_q + sum_{p != q} W_pq N_p N_q
// with N_p the pair occupation of level p. The pairing model is the special
// case e_p = 2 eps_p, G_pq = g, W = 0. The extra couplings make the energy
// differentiable with respect to every Pi and D element.
struct SeniorityZeroHamiltonian {
  Eigen::VectorXd e;
  Eigen::MatrixXd pair_hop;  // G, symmetric
  Eigen::MatrixXd density;   // W, symmetric, zero diagonal
  int pairs = 1;

  int levels() const { return static_cast<int>(e.size()); }
  static SeniorityZeroHamiltonian from_model(const PairingModel& m);
};

// Np-subsets of L levels as bitmasks, ascending numeric order.
class DociBasis {
 public:
  DociBasis(int levels, int pairs);

  int levels() const { return levels_; }
  int pairs() const { return pairs_; }
  std::size_t dim() const { return configs_.size(); }
  const std::vector<std::uint64_t>& configurations() const { return configs_; }
  std::uint64_t config(std::size_t i) const { return configs_[i]; }
  // Position of a configuration, or dim() if absent.
  std::size_t find(std::uint64_t mask) const;

 private:
  int levels_;
  int pairs_;
  std::vector<std::uint64_t> configs_;
};

inline constexpr std::size_t kMaxDenseDim = 100000;

Eigen::MatrixXd build_hamiltonian(const SeniorityZeroHamiltonian& h, const DociBasis& basis);
Eigen::MatrixXd build_hamiltonian(const PairingModel& m);

struct ExactGround {
  double energy = 0.0;
  Eigen::VectorXd ci;  // normalized, first nonzero component positive
};

ExactGround exact_ground(const PairingModel& m);
ExactGround exact_ground(const SeniorityZeroHamiltonian& h);
// All eigenpairs, ascending energy. Used for variational spot checks.
std::vector<ExactGround> exact_spectrum(const PairingModel& m);

// Pi and D of a CI vector on the DOCI basis.
Doci2RDM doci_rdms_from_ci(const DociBasis& basis, const Eigen::VectorXd& ci);
Doci2RDM exact_doci_rdms(const PairingModel& m);

struct PccdOptions {
  int max_iterations = 200;
  double tolerance = 1e-12;
  double damping = 0.5;
  int max_halvings = 30;
};

struct PccdState {
  int occupied = 0;
  int virtuals = 0;
  Eigen::MatrixXd amplitudes;  // occupied x virtual, c_i^a
  double energy = 0.0;
  bool converged = false;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Residuals of the projected equations <Phi_i^a| H - E |Psi> at amplitudes t,
// and the analytic Jacobian.
Eigen::MatrixXd pccd_residual(const SeniorityZeroHamiltonian& h, const Eigen::MatrixXd& t);
Eigen::MatrixXd pccd_jacobian(const SeniorityZeroHamiltonian& h, const Eigen::MatrixXd& t);
double pccd_energy(const SeniorityZeroHamiltonian& h, const Eigen::MatrixXd& t);

PccdState pccd_solve(const SeniorityZeroHamiltonian& h, const std::optional<Eigen::MatrixXd>& guess = std::nullopt,
                     const PccdOptions& opts = {});
PccdState pccd_solve(const PairingModel& m, const std::optional<Eigen::MatrixXd>& guess = std::nullopt,
                     const PccdOptions& opts = {});

struct ResponseRdms {
  Doci2RDM rdm;
  PccdState state;  // unperturbed solution
  bool converged = false;
};

// Pi = dE/dK^Pi and D = dE/dK^D by central differences of the pCCD energy.
ResponseRdms response_doci_rdms(const PairingModel& m, const std::optional<Eigen::MatrixXd>& guess = std::nullopt,
                                double step = 1e-4, const PccdOptions& opts = {});

// E = 2 sum_a eps_a Pi_aa + g sum_ab Pi_ab.
double pairing_energy_from_rdm(const PairingModel& m, const Doci2RDM& r);

// K^Pi and K^D of the pairing model for doci_energy.
Eigen::MatrixXd pairing_k_pi(const PairingModel& m);
Eigen::MatrixXd pairing_k_d(const PairingModel& m);

}  // namespace rdmfix::pairing
