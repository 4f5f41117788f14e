#include "rdmfix/rdm_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace rdmfix::io {

namespace {

constexpr const char* kTag = "RDMFIX-RDM";
constexpr int kVersion = 1;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, int line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError(line, "malformed number '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) throw ParseError(line, "malformed integer '" + tok + "'");
  return v;
}

// Reads the next non-blank, non-comment line; returns false at end of input.
bool next_line(std::istream& is, std::string& line, int& lineno) {
  while (std::getline(is, line)) {
    ++lineno;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return true;
  }
  return false;
}

void write_header(std::ostream& os, Representation rep, int L, int N) {
  os << kTag << ' ' << kVersion << ' ' << to_string(rep) << ' ' << L << ' ' << N << '\n';
}

}  // namespace

std::string to_string(Representation r) { return r == Representation::Spin ? "SPIN" : "DOCI"; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_rdm(std::ostream& os, const Spin2RDM& g2) {
  write_header(os, Representation::Spin, g2.L(), g2.N());
  const PairBasis& basis = g2.basis();
  for (int p = 0; p < basis.size(); ++p) {
    const auto [a, b] = basis.pair(p);
    for (int q = p; q < basis.size(); ++q) {
      const double v = g2.packed()(p, q);
      if (v == 0.0) continue;
      const auto [c, d] = basis.pair(q);
      os << a << ' ' << b << ' ' << c << ' ' << d << ' ' << format_double(v) << '\n';
    }
  }
  os << "END\n";
}

void write_rdm(std::ostream& os, const Doci2RDM& r) {
  write_header(os, Representation::Doci, r.L, r.N);
  for (const Matrix* m : {&r.pi, &r.d}) {
    for (int a = 0; a < r.L; ++a) {
      for (int b = 0; b < r.L; ++b) os << (b ? " " : "") << format_double((*m)(a, b));
      os << '\n';
    }
  }
  os << "END\n";
}

void write_rdm(std::ostream& os, const RdmFile& f) {
  if (f.spin)
    write_rdm(os, *f.spin);
  else
    write_rdm(os, *f.doci);
}

RdmFile read_rdm(std::istream& is) {
  std::string line;
  int lineno = 0;
  if (!next_line(is, line, lineno)) throw ParseError(lineno, "empty input, expected header");
  const auto head = split(line);
  if (head.size() != 5 || head[0] != kTag) throw ParseError(lineno, "expected '" + std::string(kTag) + " 1 <SPIN|DOCI> L N'");
  if (parse_int(head[1], lineno) != kVersion) throw ParseError(lineno, "unsupported format version " + head[1]);
  RdmFile f;
  if (head[2] == "SPIN")
    f.representation = Representation::Spin;
  else if (head[2] == "DOCI")
    f.representation = Representation::Doci;
  else
    throw ParseError(lineno, "unknown representation tag '" + head[2] + "'");
  const int L = parse_int(head[3], lineno);
  const int N = parse_int(head[4], lineno);
  if (L < 1 || N < 0 || N > 2 * L) throw ParseError(lineno, "invalid dimensions L=" + head[3] + " N=" + head[4]);

  if (f.representation == Representation::Doci) {
    if (N % 2 != 0) throw ParseError(lineno, "DOCI representation needs even N");
    Doci2RDM r(L, N);
    for (Matrix* m : {&r.pi, &r.d}) {
      for (int a = 0; a < L; ++a) {
        if (!next_line(is, line, lineno)) throw ParseError(lineno, "unexpected end of input in matrix row");
        const auto tok = split(line);
        if (static_cast<int>(tok.size()) != L)
          throw ParseError(lineno, "expected " + std::to_string(L) + " values, found " + std::to_string(tok.size()));
        for (int b = 0; b < L; ++b) (*m)(a, b) = parse_double(tok[static_cast<std::size_t>(b)], lineno);
      }
    }
    if (!next_line(is, line, lineno) || split(line) != std::vector<std::string>{"END"})
      throw ParseError(lineno, "expected END after DOCI payload");
    f.doci = std::move(r);
    return f;
  }

  Spin2RDM g2(L, N);
  const int n = 2 * L;
  bool ended = false;
  while (next_line(is, line, lineno)) {
    const auto tok = split(line);
    if (tok.size() == 1 && tok[0] == "END") {
      ended = true;
      break;
    }
    if (tok.size() != 5) throw ParseError(lineno, "expected 'alpha beta gamma delta value'");
    const int a = parse_int(tok[0], lineno);
    const int b = parse_int(tok[1], lineno);
    const int c = parse_int(tok[2], lineno);
    const int d = parse_int(tok[3], lineno);
    for (int x : {a, b, c, d})
      if (x < 0 || x >= n) throw ParseError(lineno, "spin-orbital index out of range");
    if (!(a < b) || !(c < d)) throw ParseError(lineno, "indices must satisfy alpha < beta and gamma < delta");
    if (std::pair{a, b} > std::pair{c, d}) throw ParseError(lineno, "pair (alpha,beta) must not exceed (gamma,delta)");
    g2.set_packed(g2.basis().index(a, b), g2.basis().index(c, d), parse_double(tok[4], lineno));
  }
  if (!ended) throw ParseError(lineno, "unexpected end of input, missing END");
  f.spin = std::move(g2);
  return f;
}

void write_rdm_file(const std::string& path, const RdmFile& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_rdm(os, f);
  if (!os) throw std::runtime_error("failed writing " + path);
}

RdmFile read_rdm_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_rdm(is);
}

}  // namespace rdmfix::io
