#pragma once

// Text format for 2-RDMs.
//
//   # optional comment lines
//   RDMFIX-RDM 1 <SPIN|DOCI> <L> <N>
//   ...payload...
//   END
//
// SPIN payload: one line "alpha beta gamma delta value" per nonzero entry
// with alpha < beta, gamma < delta and (alpha, beta) <= (gamma, delta).
// DOCI payload: L rows of Pi followed by L rows of D.
// Values are written with 17 significant digits so a write/read cycle
// reproduces every double exactly.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "rdmfix/rdm.hpp"

namespace rdmfix::io {

enum class Representation { Spin, Doci };

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct RdmFile {
  Representation representation = Representation::Doci;
  std::optional<Spin2RDM> spin;
  std::optional<Doci2RDM> doci;

  int L() const { return spin ? spin->L() : doci->L; }
  int N() const { return spin ? spin->N() : doci->N; }
};

std::string format_double(double v);

void write_rdm(std::ostream& os, const Spin2RDM& g2);
void write_rdm(std::ostream& os, const Doci2RDM& r);
void write_rdm(std::ostream& os, const RdmFile& f);
RdmFile read_rdm(std::istream& is);

void write_rdm_file(const std::string& path, const RdmFile& f);
RdmFile read_rdm_file(const std::string& path);

std::string to_string(Representation r);

}  // namespace rdmfix::io
