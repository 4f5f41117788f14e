#include "rdmfix/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <random>

#include "rdmfix/errors.hpp"
#include "rdmfix/fixer.hpp"
#include "rdmfix/pairing.hpp"
#include "rdmfix/rdm_io.hpp"
#include "rdmfix/sweep.hpp"

namespace rdmfix::cli {

namespace {

using nlohmann::json;

// Any non-finite value is written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::array<ConditionKind, 3> parse_order(const std::string& s) {
  if (s.size() != 3) throw DomainError("--order must be a permutation of PQG, got '" + s + "'");
  std::array<ConditionKind, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    switch (std::toupper(static_cast<unsigned char>(s[i]))) {
      case 'P': out[i] = ConditionKind::P; break;
      case 'Q': out[i] = ConditionKind::Q; break;
      case 'G': out[i] = ConditionKind::G; break;
      default: throw DomainError("--order must be a permutation of PQG, got '" + s + "'");
    }
  }
  return out;
}

json report_json(const FixReport& r) {
  json sweeps = json::array();
  for (const auto& s : r.sweeps) {
    json row;
    for (std::size_t i = 0; i < s.conditions.size(); ++i)
      row[s.conditions[i]] = {{"trace_error", num(s.trace_errors[i])}, {"min_eigenvalue", num(s.min_eigenvalues[i])}};
    sweeps.push_back({{"conditions", row}, {"frobenius_change", num(s.frobenius_change)}});
  }
  json last = json::object();
  if (!r.sweeps.empty()) last = sweeps.back()["conditions"];
  return {{"converged", r.converged},
          {"sweeps_used", r.sweeps_used},
          {"cost", num(r.final_cost)},
          {"max_trace_error", num(r.max_trace_error())},
          {"min_eigenvalue", num(r.min_eigenvalue())},
          {"final", last},
          {"sweeps", sweeps}};
}

json validation_json(const ValidationReport& v) {
  json out = json::object();
  for (const auto& c : v.checks) out[c.name] = {{"value", num(c.value)}, {"limit", num(c.limit)}, {"ok", c.satisfied}};
  return out;
}

struct FixArgs {
  std::string input, output, report, mode, order = "PQG", strategy = "bisection";
  double tol = 1e-8, tol_trace = 1e-10;
  int max_sweeps = 500;
  bool enforce_rho = false, sequential_g2x2 = false;
};

int cmd_fix(const FixArgs& a, std::ostream& out) {
  io::RdmFile f = io::read_rdm_file(a.input);
  const std::string want = f.representation == io::Representation::Spin ? "regular" : "doci";
  const std::string mode = a.mode.empty() ? want : a.mode;
  if (mode != want)
    throw DomainError("mode " + mode + " needs a " + (mode == "regular" ? "SPIN" : "DOCI") + " file, got " +
                      io::to_string(f.representation));
  FixConfig cfg;
  cfg.tol_eig = a.tol;
  cfg.tol_trace = a.tol_trace;
  cfg.max_sweeps = a.max_sweeps;
  cfg.order = parse_order(a.order);
  cfg.strategy = a.strategy == "zero-and-shift" ? specproj::Strategy::ZeroAndShift : specproj::Strategy::Bisection;
  cfg.enforce_rho_consistency = a.enforce_rho;
  cfg.sequential_g2x2 = a.sequential_g2x2;

  json rep;
  FixReport report;
  io::RdmFile result;
  result.representation = f.representation;
  if (f.spin) {
    auto r = fix_regular(*f.spin, cfg);
    rep["violation_before"] = num(violation_measure(*f.spin));
    rep["violation_after"] = num(violation_measure(r.rdm));
    rep["validation"] = validation_json(validate(r.rdm, cfg.tol_eig));
    result.spin = std::move(r.rdm);
    report = std::move(r.report);
  } else {
    auto r = fix_doci(*f.doci, cfg);
    rep["violation_before"] = num(violation_measure(*f.doci));
    rep["violation_after"] = num(violation_measure(r.rdm));
    rep["validation"] = validation_json(validate(r.rdm, cfg.tol_eig));
    result.doci = std::move(r.rdm);
    report = std::move(r.report);
  }
  io::write_rdm_file(a.output, result);
  json body = report_json(report);
  body["mode"] = mode;
  body["L"] = f.L();
  body["N"] = f.N();
  body.update(rep);
  if (a.report.empty()) {
    out << body.dump(2) << '\n';
  } else {
    std::ofstream os(a.report);
    if (!os) throw std::runtime_error("cannot open " + a.report + " for writing");
    os << body.dump(2) << '\n';
  }
  out << (report.converged ? "converged" : "not converged") << " after " << report.sweeps_used
      << " sweeps, cost " << io::format_double(report.final_cost) << '\n';
  return report.converged ? kOk : kNotConverged;
}

int cmd_validate(const std::string& input, double tol, std::ostream& out) {
  const io::RdmFile f = io::read_rdm_file(input);
  const ValidationReport v = f.spin ? validate(*f.spin, tol) : validate(*f.doci, tol);
  for (const auto& c : v.checks)
    out << c.name << ' ' << io::format_double(c.value) << " limit " << io::format_double(c.limit) << ' '
        << (c.satisfied ? "ok" : "VIOLATED") << '\n';
  out << "violation_measure " << io::format_double(f.spin ? violation_measure(*f.spin) : violation_measure(*f.doci))
      << '\n';
  if (v.all_satisfied()) {
    out << "all conditions satisfied\n";
    return kOk;
  }
  out << "violated:";
  for (const auto& name : v.violated()) out << ' ' << name;
  out << '\n';
  return kNotConverged;
}

struct ModelArgs {
  int levels = 12;
  int pairs = 6;
  double spacing = 1.0;
  double g = 0.0;
};

void add_model_flags(CLI::App* app, ModelArgs& m) {
  app->add_option("--levels", m.levels, "number of levels L")->capture_default_str();
  app->add_option("--pairs", m.pairs, "number of pairs N/2")->capture_default_str();
  app->add_option("--spacing", m.spacing, "level spacing")->capture_default_str();
}

struct GenArgs {
  ModelArgs model;
  std::string kind = "exact", rep = "doci", output;
  double noise = 1e-3;
  std::uint64_t seed = 1;
};

Doci2RDM add_noise(Doci2RDM r, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  for (int a = 0; a < r.L; ++a) {
    for (int b = a; b < r.L; ++b) {
      const double x = dist(rng);
      r.pi(a, b) += x;
      if (a != b) r.pi(b, a) += x;
    }
  }
  for (int a = 0; a < r.L; ++a) {
    for (int b = a + 1; b < r.L; ++b) {
      const double x = dist(rng);
      r.d(a, b) += x;
      r.d(b, a) += x;
    }
  }
  return r;
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const auto m = pairing::PairingModel::picket_fence(a.model.levels, a.model.pairs, a.model.spacing, a.model.g);
  Doci2RDM r;
  bool ok = true;
  if (a.kind == "exact") {
    r = pairing::exact_doci_rdms(m);
  } else if (a.kind == "noisy") {
    r = add_noise(pairing::exact_doci_rdms(m), a.noise, a.seed);
  } else {
    const auto resp = pairing::response_doci_rdms(m);
    r = resp.rdm;
    ok = resp.converged;
  }
  io::RdmFile f;
  if (a.rep == "spin") {
    f.representation = io::Representation::Spin;
    f.spin = embed(r);
  } else {
    f.representation = io::Representation::Doci;
    f.doci = std::move(r);
  }
  io::write_rdm_file(a.output, f);
  if (!ok) out << "warning: pCCD did not converge; response RDM written from the best iterate\n";
  return kOk;
}

struct SweepArgs {
  ModelArgs model;
  double gmin = -0.6, gmax = 0.0;
  int steps = 25;
  std::string mode = "doci", output;
  bool cold = false;
  int max_sweeps = 500;
  double tol = 1e-8, tol_trace = 1e-10;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  sweep::SweepOptions o;
  o.levels = a.model.levels;
  o.pairs = a.model.pairs;
  o.spacing = a.model.spacing;
  o.gmin = a.gmin;
  o.gmax = a.gmax;
  o.steps = a.steps;
  o.mode = a.mode == "regular" ? sweep::Mode::Regular : sweep::Mode::Doci;
  o.warm_start = !a.cold;
  o.fix.max_sweeps = a.max_sweeps;
  o.fix.tol_eig = a.tol;
  o.fix.tol_trace = a.tol_trace;
  const auto rows = sweep::run_sweep(o);
  std::ofstream os(a.output);
  if (!os) throw std::runtime_error("cannot open " + a.output + " for writing");
  sweep::write_csv(os, rows);
  out << "wrote " << rows.size() << " rows to " << a.output << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restore N-representability conditions of approximate 2-RDMs"};
  app.require_subcommand(1);

  FixArgs fa;
  auto* fix = app.add_subcommand("fix", "fix an RDM file");
  fix->add_option("input", fa.input, "input RDM file")->required();
  fix->add_option("--mode", fa.mode, "regular (SPIN files) or doci (DOCI files); default from the file")
      ->check(CLI::IsMember({"regular", "doci"}));
  fix->add_option("--tol", fa.tol, "eigenvalue and convergence tolerance")->capture_default_str();
  fix->add_option("--tol-trace", fa.tol_trace, "trace tolerance")->capture_default_str();
  fix->add_option("--max-sweeps", fa.max_sweeps, "sweep limit")->capture_default_str();
  fix->add_option("--order", fa.order, "condition order, permutation of PQG")->capture_default_str();
  fix->add_option("--strategy", fa.strategy, "trace-constrained projection")
      ->check(CLI::IsMember({"bisection", "zero-and-shift"}))
      ->capture_default_str();
  fix->add_flag("--enforce-rho", fa.enforce_rho, "DOCI: rescale D rows toward rho consistency");
  fix->add_flag("--sequential-g2x2", fa.sequential_g2x2, "DOCI: project 2x2 blocks one after another");
  fix->add_option("-o,--output", fa.output, "output RDM file")->required();
  fix->add_option("--report", fa.report, "JSON report path (stdout if omitted)");

  std::string vin;
  double vtol = 1e-8;
  auto* val = app.add_subcommand("validate", "check every condition of an RDM file");
  val->add_option("input", vin, "input RDM file")->required();
  val->add_option("--tol", vtol, "tolerance")->capture_default_str();

  SweepArgs sa;
  auto* sw = app.add_subcommand("sweep", "scan the picket-fence pairing model over g");
  add_model_flags(sw, sa.model);
  sw->add_option("--gmin", sa.gmin)->capture_default_str();
  sw->add_option("--gmax", sa.gmax)->capture_default_str();
  sw->add_option("--steps", sa.steps)->capture_default_str();
  sw->add_option("--mode", sa.mode)->check(CLI::IsMember({"regular", "doci"}))->capture_default_str();
  sw->add_flag("--cold", sa.cold, "start every pCCD solve from zero amplitudes");
  sw->add_option("--max-sweeps", sa.max_sweeps)->capture_default_str();
  sw->add_option("--tol", sa.tol)->capture_default_str();
  sw->add_option("--tol-trace", sa.tol_trace)->capture_default_str();
  sw->add_option("csv", sa.output, "output CSV path")->required();

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "generate a test RDM from the pairing model");
  gen->add_option("--kind", ga.kind)->check(CLI::IsMember({"exact", "response", "noisy"}))->capture_default_str();
  add_model_flags(gen, ga.model);
  gen->add_option("--g", ga.model.g, "interaction strength")->capture_default_str();
  gen->add_option("--noise", ga.noise, "noise scale for --kind noisy")->capture_default_str();
  gen->add_option("--seed", ga.seed)->capture_default_str();
  gen->add_option("--rep", ga.rep, "output representation")
      ->check(CLI::IsMember({"doci", "spin"}))
      ->capture_default_str();
  gen->add_option("-o,--output", ga.output, "output RDM file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*fix) return cmd_fix(fa, out);
    if (*val) return cmd_validate(vin, vtol, out);
    if (*sw) return cmd_sweep(sa, out);
    if (*gen) return cmd_gen(ga, out);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace rdmfix::cli
