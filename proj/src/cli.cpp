#include "conecalc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "conecalc/error.hpp"
#include "conecalc/io.hpp"
#include "conecalc/sampling.hpp"
#include "conecalc/suites.hpp"

namespace conecalc::cli {

namespace {

struct Globals {
  double tol = kDecisionMargin;
  std::uint64_t seed = 0;
  int restarts = 16;
  bool json = false;
  bool timings = false;

  OracleOptions oracle() const {
    OracleOptions o;
    o.margin = tol;
    o.seed = seed;
    o.restarts = restarts;
    return o;
  }
};

int exit_for(Status s) {
  switch (s) {
    case Status::Member: return kExitMember;
    case Status::NotMember: return kExitNotMember;
    case Status::Inconclusive: return kExitInconclusive;
  }
  return kExitError;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  f << text;
}

Dims infer_dims(const CMat& x, const std::vector<int>& given) {
  if (x.rows() != x.cols()) throw Error(ErrorCode::DimError, "field 'payload': matrix must be square");
  if (given.size() == 2) {
    if (given[0] * given[1] != x.rows()) {
      throw Error(ErrorCode::DimError, "--dims " + std::to_string(given[0]) + "," + std::to_string(given[1]) +
                                           " does not match a " + std::to_string(x.rows()) + "x" +
                                           std::to_string(x.rows()) + " matrix");
    }
    return {given[0], given[1]};
  }
  const int d = static_cast<int>(x.rows());
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
  if (n * n != d) throw Error(ErrorCode::DimError, "field 'payload.rows': not a square dimension; pass --dims");
  return {n, n};
}

int cmd_check(const Globals& g, const std::string& cone_text, const std::string& input,
              const std::vector<int>& dims_flag, std::ostream& out) {
  const ConeId cone = ConeId::parse(cone_text);
  const Document doc = load_document(input);
  const OracleOptions opts = g.oracle();
  Verdict v;
  Dims dims{0, 0};
  if (doc.kind == DocKind::Map) {
    dims = {doc.map->dim(), doc.map->dim()};
    v = check_map(cone, *doc.map, opts);
  } else {
    const CMat x = to_matrix(doc);
    dims = infer_dims(x, dims_flag);
    v = check_matrix(cone, x, dims, opts);
  }
  if (g.json) {
    Json j = {{"cone", cone.name()},
              {"input", input},
              {"dims", {dims.first, dims.second}},
              {"seed", g.seed},
              {"tol", g.tol},
              {"verdict", verdict_to_json(v)}};
    out << j.dump(2) << "\n";
  } else {
    out << cone.name() << ": " << to_string(v.status) << "\n";
    out << "margin: " << fmt(v.margin) << "\n";
    if (v.certificate) out << "certificate: " << v.certificate->kind << "\n";
    if (v.witness) out << "witness value: " << fmt(v.witness->value) << "\n";
    if (!v.note.empty()) out << "note: " << v.note << "\n";
  }
  return exit_for(v.status);
}

int cmd_convert(const std::string& input, const std::string& to, const std::string& output, std::ostream& out,
                std::ostream& err) {
  const Document doc = load_document(input);
  const LinMap phi = to_map(doc);
  const LinMap rebuilt = LinMap::from_kraus(kraus_from_choi(phi), std::numeric_limits<double>::infinity());
  const double residual = (rebuilt.choi() - phi.choi()).norm();
  Document converted = map_document(phi, to);
  converted.meta = doc.meta;
  write_output(emit_document(converted), output, out);
  (output.empty() ? err : out) << "round-trip residual: " << fmt(residual) << "\n";
  return kExitMember;
}

int cmd_verify(const Globals& g, const std::string& suite, int n, int trials, std::ostream& out) {
  SuiteOptions so;
  so.n = n;
  so.trials = trials;
  so.seed = g.seed;
  so.oracle = g.oracle();
  const SuiteResult r = run_suite(suite, so);
  if (g.json) {
    out << suite_to_json(r, g.timings).dump(2) << "\n";
  } else {
    out << suite_to_text(r, g.timings);
  }
  return r.passed() ? kExitMember : kExitNotMember;
}

Document make_document(const std::string& what, int n, int k, double lambda, std::uint64_t seed) {
  Rng rng(seed, 0x3A4Eu);
  if (what == "E") return matrix_document(max_entangled(n));
  if (what == "F") return matrix_document(swap_operator(n));
  if (what == "I") return matrix_document(identity(n * n));
  if (what == "identity") return map_document(identity_map(n));
  if (what == "transpose") return map_document(transpose_map(n));
  if (what == "trace") return map_document(trace_map(n));
  if (what == "reduction") return map_document(reduction_map(n, lambda));
  if (what == "random-cp") return map_document(random_cp_map(n, rng));
  if (what == "random-map") return map_document(random_map(n, rng));
  if (what == "random-hermitian") return map_document(random_hermitian_map(n, rng));
  const std::pair<const char*, SystemTag> systems[] = {
      {"naive", SystemTag::Naive}, {"omin", SystemTag::OMIN},   {"omax", SystemTag::OMAX},
      {"omink", SystemTag::OMINk}, {"omaxk", SystemTag::OMAXk}, {"ppt", SystemTag::PPTSys}};
  for (const auto& [name, tag] : systems) {
    if (what == name) return osystem_document(OSystem::canonical(tag, n, k));
  }
  throw Error(ErrorCode::Unsupported, "make: unknown object '" + what + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Membership oracles and verification suites for cones of maps on M_n", "conecalc"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "decision margin")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for all randomness")->envname("CONECALC_SEED")->capture_default_str();
  app.add_option("--restarts", g.restarts, "restarts for the product-vector searches")->capture_default_str();
  app.add_flag("--json", g.json, "structured output");
  app.add_flag("--timings", g.timings, "include wall-clock timings in reports");

  std::string cone;
  std::string input;
  std::vector<int> dims;
  auto* check = app.add_subcommand("check", "test a matrix or map document against a cone");
  check->add_option("cone", cone, "psd, ppt, blockpos, sep, cp, cocp, posmaps, sp, kpos:k, ksp:k, schmidtbp:k")
      ->required();
  check->add_option("input", input, "matrix or map document")->required();
  check->add_option("--dims", dims, "bipartition m,n of a matrix input")->delimiter(',')->expected(2);

  std::string to = "choi";
  std::string output;
  auto* convert = app.add_subcommand("convert", "convert a map between Choi and Kraus form");
  convert->add_option("input", input, "map or Choi matrix document")->required();
  convert->add_option("--to", to, "choi or kraus")->check(CLI::IsMember({"choi", "kraus"}));
  convert->add_option("-o,--output", output, "output file (default stdout)");

  std::string suite;
  int n = 0;
  int trials = 0;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "L21 P32 C33 P41 T42 L51 C52 T53 P61 T62 or all")->required();
  verify->add_option("--n", n, "matrix size (default per suite)");
  verify->add_option("--trials", trials, "trials per check (default per suite)");

  std::string what;
  int k = 1;
  double lambda = 0.5;
  auto* make = app.add_subcommand("make", "write a named matrix, map or operator system");
  make->add_option("what", what,
                   "E F I identity transpose trace reduction random-cp random-map random-hermitian "
                   "naive omin omax omink omaxk ppt")
      ->required();
  make->add_option("--n", n, "matrix size")->required();
  make->add_option("--k", k, "level for omink/omaxk");
  make->add_option("--lambda", lambda, "parameter of the reduction map");
  make->add_option("-o,--output", output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitMember : kExitUsage;
  }

  try {
    if (*check) return cmd_check(g, cone, input, dims, out);
    if (*convert) return cmd_convert(input, to, output, out, err);
    if (*verify) return cmd_verify(g, suite, n, trials, out);
    if (*make) {
      Document doc = make_document(what, n, k, lambda, g.seed);
      doc.meta.seed = g.seed;
      write_output(emit_document(doc), output, out);
      return kExitMember;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace conecalc::cli
