#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conecalc/choi.hpp"
#include "conecalc/cones.hpp"
#include "conecalc/mapcone.hpp"
#include "conecalc/opsys.hpp"
#include "conecalc/verdict.hpp"

namespace conecalc {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

enum class DocKind { Matrix, Map, GenCone, OSystem, Report };
std::string_view to_string(DocKind kind);

struct DocMeta {
  int format_version = kFormatVersion;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
};

// Parsed form of an on-disk document. Only the payload matching `kind` is
// populated. Matrix entries are stored as [re, im] pairs, row-major.
struct Document {
  DocKind kind = DocKind::Matrix;
  DocMeta meta;

  CMat matrix;  // Matrix
  bool hermitian = false;  // Matrix; recomputed on parse and emit

  std::optional<LinMap> map;  // Map
  std::string rep = "choi";   // Map: "choi" or "kraus"

  std::vector<CMat> gens;  // GenCone, or the C_n generators of a generated OSystem
  int dim = 0;             // GenCone

  std::string system;  // OSystem: Naive, OMIN, OMAX, OMINk, OMAXk, PPTSys, Generated
  int n = 0;           // OSystem
  int k = 1;           // OSystem

  Json report;  // Report
};

/// Throws ParseError (with the line of a syntax error) or DimError (naming
/// the offending field, e.g. "payload.entries[2]").
Document parse_document(std::string_view text);
Document load_document(const std::string& path);
/// Canonical form: sorted keys, two-space indent, shortest round-trip
/// decimal floats, trailing newline.
std::string emit_document(const Document& doc);
void save_document(const Document& doc, const std::string& path);

Document matrix_document(const CMat& x);
Document map_document(const LinMap& phi, std::string rep = "choi");
Document gencone_document(const GenCone& cone);
Document osystem_document(const OSystem& sys);
Document report_document(Json report);

/// Builds the system a document describes. Throws ParseError.
OSystem to_osystem(const Document& doc);
/// Matrix document as a matrix, or map document as its Choi matrix.
CMat to_matrix(const Document& doc);
/// Map document, or a square matrix document read as a Choi matrix.
LinMap to_map(const Document& doc);

Json matrix_to_json(const CMat& x);
/// `field` names the JSON path in DimError messages.
CMat matrix_from_json(const Json& j, const std::string& field);

Json verdict_to_json(const Verdict& v);
Json report_to_json(const PropertyReport& rep);

}  // namespace conecalc
