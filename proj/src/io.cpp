#include "conecalc/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "conecalc/error.hpp"

namespace conecalc {

namespace {

const char* const kKindNames[] = {"matrix", "map", "gencone", "osystem", "report"};

DocKind kind_from_string(const std::string& s) {
  for (int i = 0; i < 5; ++i) {
    if (s == kKindNames[i]) return static_cast<DocKind>(i);
  }
  throw Error(ErrorCode::ParseError, "field 'kind': unknown document kind '" + s + "'");
}

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError, "missing field '" + path + "." + key + "'");
  }
  return j.at(key);
}

int int_field(const Json& j, const char* key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number_integer()) throw Error(ErrorCode::ParseError, "field '" + path + "." + key + "' must be an integer");
  return v.get<int>();
}

bool is_square_of(int d, int& n) {
  for (n = 1; n * n < d; ++n) {
  }
  return n * n == d;
}

struct SystemName {
  const char* name;
  SystemTag tag;
};
const SystemName kSystems[] = {{"Naive", SystemTag::Naive},   {"OMIN", SystemTag::OMIN},
                               {"OMAX", SystemTag::OMAX},     {"OMINk", SystemTag::OMINk},
                               {"OMAXk", SystemTag::OMAXk},   {"PPTSys", SystemTag::PPTSys}};

Json meta_to_json(const DocMeta& m) {
  Json tol = Json::object();
  for (const auto& [k, v] : m.tolerances) tol[k] = v;
  return {{"format_version", m.format_version}, {"seed", m.seed}, {"tolerances", tol}};
}

DocMeta meta_from_json(const Json& j) {
  DocMeta m;
  m.format_version = int_field(j, "format_version", "meta");
  if (m.format_version > kFormatVersion) {
    throw Error(ErrorCode::ParseError, "field 'meta.format_version': unsupported version " +
                                           std::to_string(m.format_version));
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw Error(ErrorCode::ParseError, "field 'meta.seed' must be an integer");
    }
    m.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    for (const auto& [k, v] : j.at("tolerances").items()) {
      if (!v.is_number()) throw Error(ErrorCode::ParseError, "field 'meta.tolerances." + k + "' must be a number");
      m.tolerances[k] = v.get<double>();
    }
  }
  return m;
}

Json gens_to_json(const std::vector<CMat>& gens) {
  Json arr = Json::array();
  for (const CMat& g : gens) arr.push_back(matrix_to_json(g));
  return arr;
}

std::vector<CMat> gens_from_json(const Json& j, const std::string& path, int dim) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "field '" + path + "' must be an array");
  std::vector<CMat> gens;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = path + "[" + std::to_string(i) + "]";
    CMat g = matrix_from_json(j[i], f);
    if (g.rows() != dim || g.cols() != dim) {
      throw Error(ErrorCode::DimError, "field '" + f + "': expected " + std::to_string(dim) + "x" +
                                           std::to_string(dim) + ", got " + std::to_string(g.rows()) + "x" +
                                           std::to_string(g.cols()));
    }
    gens.push_back(std::move(g));
  }
  return gens;
}

Json payload_of(const Document& doc) {
  switch (doc.kind) {
    case DocKind::Matrix: {
      Json p = matrix_to_json(doc.matrix);
      p["hermitian"] = doc.matrix.rows() == doc.matrix.cols() && hermitian_defect(doc.matrix) <= kHermitianTol;
      return p;
    }
    case DocKind::Map: {
      const LinMap& phi = doc.map.value();
      Json p = {{"n", phi.dim()}, {"rep", doc.rep}};
      if (doc.rep == "kraus") {
        const std::vector<KrausPair> pairs = phi.kraus() ? *phi.kraus() : kraus_from_choi(phi);
        Json arr = Json::array();
        for (const KrausPair& kp : pairs) arr.push_back({{"a", matrix_to_json(kp.a)}, {"b", matrix_to_json(kp.b)}});
        p["kraus"] = arr;
      } else {
        p["choi"] = matrix_to_json(phi.choi());
      }
      return p;
    }
    case DocKind::GenCone: return {{"dim", doc.dim}, {"generators", gens_to_json(doc.gens)}};
    case DocKind::OSystem: {
      Json p = {{"n", doc.n}, {"system", doc.system}};
      if (doc.system == "Generated" || doc.system == "DualGenerated") {
        p["generators"] = gens_to_json(doc.gens);
      } else {
        p["k"] = doc.k;
      }
      return p;
    }
    case DocKind::Report: return doc.report;
  }
  return {};
}

void load_payload(Document& doc, const Json& p) {
  switch (doc.kind) {
    case DocKind::Matrix:
      doc.matrix = matrix_from_json(p, "payload");
      doc.hermitian = doc.matrix.rows() == doc.matrix.cols() && hermitian_defect(doc.matrix) <= kHermitianTol;
      return;
    case DocKind::Map: {
      const int n = int_field(p, "n", "payload");
      const Json& rep = field(p, "rep", "payload");
      if (!rep.is_string()) throw Error(ErrorCode::ParseError, "field 'payload.rep' must be a string");
      doc.rep = rep.get<std::string>();
      if (doc.rep == "choi") {
        CMat c = matrix_from_json(field(p, "choi", "payload"), "payload.choi");
        if (c.rows() != n * n || c.cols() != n * n) {
          throw Error(ErrorCode::DimError, "field 'payload.choi': expected " + std::to_string(n * n) + "x" +
                                               std::to_string(n * n) + " for n = " + std::to_string(n));
        }
        doc.map = LinMap::from_choi(std::move(c));
      } else if (doc.rep == "kraus") {
        const Json& arr = field(p, "kraus", "payload");
        if (!arr.is_array() || arr.empty()) throw Error(ErrorCode::ParseError, "field 'payload.kraus' must be a nonempty array");
        std::vector<KrausPair> pairs;
        for (std::size_t i = 0; i < arr.size(); ++i) {
          const std::string f = "payload.kraus[" + std::to_string(i) + "]";
          KrausPair kp{matrix_from_json(field(arr[i], "a", f), f + ".a"),
                       matrix_from_json(field(arr[i], "b", f), f + ".b")};
          for (const auto& [name, m] : {std::pair<const char*, const CMat*>{"a", &kp.a}, {"b", &kp.b}}) {
            if (m->rows() != n || m->cols() != n) {
              throw Error(ErrorCode::DimError, "field '" + f + "." + name + "': expected " + std::to_string(n) +
                                                   "x" + std::to_string(n));
            }
          }
          pairs.push_back(std::move(kp));
        }
        doc.map = LinMap::from_kraus(std::move(pairs));
      } else {
        throw Error(ErrorCode::ParseError, "field 'payload.rep': expected \"choi\" or \"kraus\"");
      }
      return;
    }
    case DocKind::GenCone:
      doc.dim = int_field(p, "dim", "payload");
      if (doc.dim < 1) throw Error(ErrorCode::DimError, "field 'payload.dim' must be positive");
      doc.gens = gens_from_json(field(p, "generators", "payload"), "payload.generators", doc.dim);
      return;
    case DocKind::OSystem: {
      doc.n = int_field(p, "n", "payload");
      if (doc.n < 1) throw Error(ErrorCode::DimError, "field 'payload.n' must be positive");
      const Json& s = field(p, "system", "payload");
      if (!s.is_string()) throw Error(ErrorCode::ParseError, "field 'payload.system' must be a string");
      doc.system = s.get<std::string>();
      if (doc.system == "Generated" || doc.system == "DualGenerated") {
        doc.gens = gens_from_json(field(p, "generators", "payload"), "payload.generators", doc.n * doc.n);
      } else {
        doc.k = p.contains("k") ? int_field(p, "k", "payload") : 1;
        to_osystem(doc);  // validates the tag and k
      }
      return;
    }
    case DocKind::Report:
      doc.report = p;
      return;
  }
}

}  // namespace

std::string_view to_string(DocKind kind) { return kKindNames[static_cast<int>(kind)]; }

Json matrix_to_json(const CMat& x) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back({x(i, j).real(), x(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"rows", x.rows()}, {"cols", x.cols()}, {"entries", rows}};
}

CMat matrix_from_json(const Json& j, const std::string& f) {
  const int rows = int_field(j, "rows", f);
  const int cols = int_field(j, "cols", f);
  if (rows < 1 || cols < 1) throw Error(ErrorCode::DimError, "field '" + f + "': rows and cols must be positive");
  const Json& entries = field(j, "entries", f);
  if (!entries.is_array() || static_cast<int>(entries.size()) != rows) {
    throw Error(ErrorCode::DimError, "field '" + f + ".entries': expected " + std::to_string(rows) + " rows");
  }
  CMat x(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Json& row = entries[static_cast<std::size_t>(r)];
    const std::string rf = f + ".entries[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw Error(ErrorCode::DimError, "field '" + rf + "': expected " + std::to_string(cols) + " entries");
    }
    for (int c = 0; c < cols; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(ErrorCode::ParseError, "field '" + rf + "[" + std::to_string(c) + "]' must be [re, im]");
      }
      x(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return x;
}

Document parse_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  Document doc;
  const Json& kind = field(j, "kind", "");
  if (!kind.is_string()) throw Error(ErrorCode::ParseError, "field 'kind' must be a string");
  doc.kind = kind_from_string(kind.get<std::string>());
  doc.meta = meta_from_json(field(j, "meta", ""));
  try {
    load_payload(doc, field(j, "payload", ""));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("payload: ") + e.what());
  }
  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

std::string emit_document(const Document& doc) {
  const Json j = {{"kind", std::string(to_string(doc.kind))}, {"meta", meta_to_json(doc.meta)},
                  {"payload", payload_of(doc)}};
  return j.dump(2) + "\n";
}

void save_document(const Document& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << emit_document(doc);
}

Document matrix_document(const CMat& x) {
  Document d;
  d.kind = DocKind::Matrix;
  d.matrix = x;
  d.hermitian = x.rows() == x.cols() && hermitian_defect(x) <= kHermitianTol;
  return d;
}

Document map_document(const LinMap& phi, std::string rep) {
  if (rep != "choi" && rep != "kraus") throw Error(ErrorCode::ParseError, "rep must be choi or kraus");
  Document d;
  d.kind = DocKind::Map;
  d.map = phi;
  d.rep = std::move(rep);
  return d;
}

Document gencone_document(const GenCone& cone) {
  Document d;
  d.kind = DocKind::GenCone;
  d.dim = cone.dim();
  d.gens = cone.gens();
  return d;
}

Document osystem_document(const OSystem& sys) {
  Document d;
  d.kind = DocKind::OSystem;
  d.n = sys.n();
  d.k = sys.k();
  switch (sys.kind()) {
    case OSystem::Kind::Generated: d.system = "Generated"; d.gens = sys.cone().gens(); break;
    case OSystem::Kind::DualGenerated: d.system = "DualGenerated"; d.gens = sys.cone().gens(); break;
    case OSystem::Kind::Canonical:
      for (const SystemName& s : kSystems) {
        if (s.tag == sys.tag()) d.system = s.name;
      }
      break;
  }
  return d;
}

Document report_document(Json report) {
  Document d;
  d.kind = DocKind::Report;
  d.report = std::move(report);
  return d;
}

OSystem to_osystem(const Document& doc) {
  if (doc.kind != DocKind::OSystem) throw Error(ErrorCode::ParseError, "expected an osystem document");
  if (doc.system == "Generated") return OSystem::generated(doc.n, GenCone(doc.n * doc.n, doc.gens));
  if (doc.system == "DualGenerated") return OSystem::dual_of(doc.n, GenCone(doc.n * doc.n, doc.gens));
  for (const SystemName& s : kSystems) {
    if (doc.system == s.name) return OSystem::canonical(s.tag, doc.n, doc.k);
  }
  throw Error(ErrorCode::ParseError, "field 'payload.system': unknown system '" + doc.system + "'");
}

CMat to_matrix(const Document& doc) {
  if (doc.kind == DocKind::Matrix) return doc.matrix;
  if (doc.kind == DocKind::Map) return doc.map->choi();
  throw Error(ErrorCode::ParseError, "expected a matrix or map document, got " + std::string(to_string(doc.kind)));
}

LinMap to_map(const Document& doc) {
  if (doc.kind == DocKind::Map) return *doc.map;
  if (doc.kind == DocKind::Matrix) {
    int n = 0;
    if (doc.matrix.rows() != doc.matrix.cols() || !is_square_of(static_cast<int>(doc.matrix.rows()), n)) {
      throw Error(ErrorCode::DimError, "field 'payload': a Choi matrix must be n^2 x n^2");
    }
    return LinMap::from_choi(doc.matrix);
  }
  throw Error(ErrorCode::ParseError, "expected a map or matrix document, got " + std::string(to_string(doc.kind)));
}

Json verdict_to_json(const Verdict& v) {
  Json j = {{"status", std::string(to_string(v.status))},
            {"margin", v.margin},
            {"evidence", {{"restarts", v.evidence.restarts},
                          {"iterations", v.evidence.iterations},
                          {"samples", v.evidence.samples}}}};
  if (!v.note.empty()) j["note"] = v.note;
  if (v.certificate) {
    Json c = {{"kind", v.certificate->kind}, {"values", v.certificate->values}, {"residual", v.certificate->residual}};
    if (v.certificate->matrix) c["matrix"] = matrix_to_json(*v.certificate->matrix);
    j["certificate"] = c;
  }
  if (v.witness) {
    Json w = {{"value", v.witness->value}, {"matrix", matrix_to_json(v.witness->matrix)}};
    if (v.witness->vector) w["vector"] = matrix_to_json(*v.witness->vector);
    j["witness"] = w;
  }
  return j;
}

Json report_to_json(const PropertyReport& rep) {
  Json viols = Json::array();
  for (const Violation& v : rep.violations) {
    Json inputs = Json::array();
    for (const CMat& m : v.inputs) inputs.push_back(matrix_to_json(m));
    Json jv = {{"trial", v.trial}, {"detail", v.detail}, {"margin", v.margin}, {"inputs", inputs}};
    if (v.witness) jv["witness"] = {{"value", v.witness->value}, {"matrix", matrix_to_json(v.witness->matrix)}};
    viols.push_back(std::move(jv));
  }
  Json metrics = Json::array();
  for (const auto& [k, v] : rep.metrics) metrics.push_back({k, v});
  return {{"property", rep.property},
          {"trials", rep.trials},
          {"seed", rep.seed},
          {"inconclusive", rep.inconclusive},
          {"consistent", rep.consistent},
          {"status", std::string(to_string(rep.status()))},
          {"violations", viols},
          {"metrics", metrics}};
}

}  // namespace conecalc
