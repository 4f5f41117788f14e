#include <cmath>
#include <string>

#include "rdmfix/errors.hpp"
#include "rdmfix/rdm.hpp"

namespace rdmfix {

namespace {

void check_doci(const Doci2RDM& r) {
  if (r.L < 1) throw DimensionError("DOCI 2-RDM needs L >= 1");
  if (r.pi.rows() != r.L || r.pi.cols() != r.L || r.d.rows() != r.L || r.d.cols() != r.L)
    throw DimensionError("Pi and D must be L x L with L=" + std::to_string(r.L));
}

ConditionMatrix make(ConditionKind kind, const Doci2RDM& r, SymMatrix m) {
  ConditionMatrix c;
  c.kind = kind;
  c.L = r.L;
  c.N = r.N;
  c.entries = std::move(m);
  c.trace_target = trace_target(kind, r.L, r.N);
  return c;
}

double sym(const Matrix& m, int a, int b) { return 0.5 * (m(a, b) + m(b, a)); }

}  // namespace

ConditionMatrix doci_condition(ConditionKind kind, const Doci2RDM& r) {
  check_doci(r);
  const int L = r.L;
  SymMatrix m(L);
  switch (kind) {
    case ConditionKind::P:
      for (int a = 0; a < L; ++a)
        for (int b = a; b < L; ++b) m.set(a, b, sym(r.pi, a, b));
      break;
    case ConditionKind::QPi:
      for (int a = 0; a < L; ++a)
        for (int b = a; b < L; ++b) m.set(a, b, (a == b ? 1.0 - 2.0 * r.pi(a, a) : 0.0) + sym(r.pi, a, b));
      break;
    case ConditionKind::QD:
      for (int a = 0; a < L; ++a)
        for (int b = a + 1; b < L; ++b) m.set(a, b, sym(r.d, a, b) + 1.0 - r.pi(a, a) - r.pi(b, b));
      break;
    case ConditionKind::GPi:
      for (int a = 0; a < L; ++a)
        for (int b = a; b < L; ++b) m.set(a, b, a == b ? r.pi(a, a) : sym(r.d, a, b));
      break;
    default:
      throw DimensionError("doci_condition: kind " + to_string(kind) + " is not an L x L DOCI condition");
  }
  ConditionMatrix c = make(kind, r, std::move(m));
  if (kind == ConditionKind::P) c.trace_target = r.pi_trace_target();
  return c;
}

std::vector<ConditionMatrix> g2x2_blocks(const Doci2RDM& r) {
  check_doci(r);
  std::vector<ConditionMatrix> out;
  out.reserve(static_cast<std::size_t>(r.L * (r.L - 1) / 2));
  for (int a = 0; a < r.L; ++a) {
    for (int b = a + 1; b < r.L; ++b) {
      const double dab = sym(r.d, a, b);
      SymMatrix m(2);
      m.set(0, 0, r.pi(a, a) - dab);
      m.set(0, 1, sym(r.pi, a, b));
      m.set(1, 1, r.pi(b, b) - dab);
      ConditionMatrix c = make(ConditionKind::G2x2, r, std::move(m));
      c.label = {a, b};
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<ConditionMatrix> doci_conditions(const Doci2RDM& r) {
  std::vector<ConditionMatrix> out;
  out.push_back(doci_condition(ConditionKind::QPi, r));
  out.push_back(doci_condition(ConditionKind::QD, r));
  out.push_back(doci_condition(ConditionKind::GPi, r));
  for (auto& c : g2x2_blocks(r)) out.push_back(std::move(c));
  return out;
}

Doci2RDM doci_invert(ConditionKind kind, const ConditionMatrix& c, const Doci2RDM& context) {
  check_doci(context);
  if (c.kind != kind) throw DimensionError("condition kind mismatch in doci_invert");
  if (kind == ConditionKind::G2x2) return doci_invert_g2x2({c}, context);
  const int L = context.L;
  if (c.entries.dim() != L) throw DimensionError("condition matrix must be L x L");
  const Matrix& m = c.entries.full();
  Doci2RDM out = context;
  switch (kind) {
    case ConditionKind::P:
      out.pi = m;
      break;
    case ConditionKind::QPi:
      for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b) out.pi(a, b) = a == b ? 1.0 - m(a, a) : m(a, b);
      break;
    case ConditionKind::QD:
      for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b)
          out.d(a, b) = a == b ? 0.0 : m(a, b) - 1.0 + context.pi(a, a) + context.pi(b, b);
      break;
    case ConditionKind::GPi:
      for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b) {
          if (a == b) {
            out.pi(a, a) = m(a, a);
            out.d(a, a) = 0.0;
          } else {
            out.d(a, b) = m(a, b);
          }
        }
      break;
    default:
      throw DimensionError("doci_invert: unsupported kind " + to_string(kind));
  }
  return out;
}

Doci2RDM doci_invert_g2x2(const std::vector<ConditionMatrix>& blocks, const Doci2RDM& context) {
  check_doci(context);
  const int L = context.L;
  Doci2RDM out = context;
  if (blocks.empty()) return out;

  Vector diag_sum = Vector::Zero(L);
  Eigen::VectorXi diag_count = Eigen::VectorXi::Zero(L);
  for (const auto& c : blocks) {
    if (c.kind != ConditionKind::G2x2 || c.entries.dim() != 2) throw DimensionError("expected 2x2 G blocks");
    const auto [a, b] = c.label;
    if (a < 0 || b >= L || a >= b) throw DimensionError("G2x2 block label out of range");
    const double dab = sym(context.d, a, b);
    diag_sum[a] += c.entries(0, 0) + dab;
    diag_sum[b] += c.entries(1, 1) + dab;
    ++diag_count[a];
    ++diag_count[b];
    out.pi(a, b) = c.entries(0, 1);
    out.pi(b, a) = c.entries(0, 1);
  }
  for (int a = 0; a < L; ++a)
    if (diag_count[a] > 0) out.pi(a, a) = diag_sum[a] / diag_count[a];
  for (const auto& c : blocks) {
    const auto [a, b] = c.label;
    const double dab = 0.5 * ((out.pi(a, a) - c.entries(0, 0)) + (out.pi(b, b) - c.entries(1, 1)));
    out.d(a, b) = dab;
    out.d(b, a) = dab;
  }
  return out;
}

Vector doci_rho_from_d(const Doci2RDM& r) {
  check_doci(r);
  if (r.pairs() <= 1) throw DomainError("rho from D is undefined for a single pair");
  Vector rho(r.L);
  for (int a = 0; a < r.L; ++a) {
    double acc = 0.0;
    for (int b = 0; b < r.L; ++b)
      if (b != a) acc += r.d(a, b);
    rho[a] = acc / (r.pairs() - 1);
  }
  return rho;
}

double doci_rho_consistency(const Doci2RDM& r) {
  if (r.pairs() <= 1) return 0.0;
  return (r.pi.diagonal() - doci_rho_from_d(r)).norm();
}

Doci2RDM enforce_rho_consistency(const Doci2RDM& r) {
  check_doci(r);
  if (r.pairs() <= 1 || r.L < 2) return r;
  Doci2RDM out = r;
  Matrix shifted = r.d;
  for (int a = 0; a < r.L; ++a) {
    double row = 0.0;
    for (int c = 0; c < r.L; ++c)
      if (c != a) row += r.d(a, c);
    const double delta = (r.pi(a, a) * (r.pairs() - 1) - row) / (r.L - 1);
    for (int b = 0; b < r.L; ++b)
      if (b != a) shifted(a, b) += delta;
  }
  out.d = 0.5 * (shifted + shifted.transpose());
  out.d.diagonal().setZero();
  return out;
}

double doci_energy(const Doci2RDM& r, const Matrix& k_pi, const Matrix& k_d) {
  check_doci(r);
  if (k_pi.rows() != r.L || k_pi.cols() != r.L || k_d.rows() != r.L || k_d.cols() != r.L)
    throw DimensionError("K^Pi and K^D must be L x L");
  double e = r.pi.cwiseProduct(k_pi).sum();
  for (int a = 0; a < r.L; ++a)
    for (int b = 0; b < r.L; ++b)
      if (a != b) e += k_d(a, b) * r.d(a, b);
  return e;
}

}  // namespace rdmfix
