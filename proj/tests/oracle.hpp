#pragma once

// Brute-force second-quantized reference values, independent of the
// library's closed-form maps.

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rdmfix/rdm.hpp"

namespace oracle {

using Det = std::uint64_t;

struct State {
  Det det;
  double sign;
};

inline std::optional<State> annihilate(int p, State s) {
  const Det bit = Det{1} << p;
  if (!(s.det & bit)) return std::nullopt;
  if (std::popcount(s.det & (bit - 1)) % 2) s.sign = -s.sign;
  s.det ^= bit;
  return s;
}

inline std::optional<State> create(int p, State s) {
  const Det bit = Det{1} << p;
  if (s.det & bit) return std::nullopt;
  if (std::popcount(s.det & (bit - 1)) % 2) s.sign = -s.sign;
  s.det |= bit;
  return s;
}

// Operator string applied right to left: ops[k] = {orbital, is_creation};
// the last element acts first.
struct Op {
  int p;
  bool dagger;
};

struct Wavefunction {
  int n = 0;  // spin orbitals
  std::vector<Det> dets;
  Eigen::VectorXd c;

  double expect(const std::vector<Op>& ops) const {
    double v = 0.0;
    for (std::size_t j = 0; j < dets.size(); ++j) {
      std::optional<State> s = State{dets[j], 1.0};
      for (auto it = ops.rbegin(); it != ops.rend() && s; ++it) s = it->dagger ? create(it->p, *s) : annihilate(it->p, *s);
      if (!s) continue;
      for (std::size_t i = 0; i < dets.size(); ++i)
        if (dets[i] == s->det) v += c[static_cast<Eigen::Index>(i)] * s->sign * c[static_cast<Eigen::Index>(j)];
    }
    return v;
  }
};

// Random normalized real wavefunction of N electrons in 2L spin orbitals.
inline Wavefunction random_wavefunction(int L, int N, std::uint64_t seed) {
  Wavefunction w;
  w.n = 2 * L;
  for (Det d = 0; d < (Det{1} << w.n); ++d)
    if (std::popcount(d) == N) w.dets.push_back(d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  w.c.resize(static_cast<Eigen::Index>(w.dets.size()));
  for (auto& x : w.c) x = g(rng);
  w.c.normalize();
  return w;
}

// Gamma_{abcd} = <a+_a a+_b a_d a_c>
inline double gamma(const Wavefunction& w, int a, int b, int c, int d) {
  return w.expect({{a, true}, {b, true}, {d, false}, {c, false}});
}
inline double rho(const Wavefunction& w, int a, int c) { return w.expect({{a, true}, {c, false}}); }
// Q_{abcd} = <a_b a_a a+_c a+_d>
inline double q(const Wavefunction& w, int a, int b, int c, int d) {
  return w.expect({{b, false}, {a, false}, {c, true}, {d, true}});
}
// G_{abcd} = <a+_a a_b a+_d a_c>
inline double g(const Wavefunction& w, int a, int b, int c, int d) {
  return w.expect({{a, true}, {b, false}, {d, true}, {c, false}});
}

inline rdmfix::Spin2RDM spin_rdm(const Wavefunction& w, int L, int N) {
  rdmfix::Spin2RDM out(L, N);
  const auto& basis = out.basis();
  for (int p = 0; p < basis.size(); ++p)
    for (int r = p; r < basis.size(); ++r) {
      const auto [a, b] = basis.pair(p);
      const auto [c, d] = basis.pair(r);
      out.set_packed(p, r, gamma(w, a, b, c, d));
    }
  return out;
}

}  // namespace oracle
