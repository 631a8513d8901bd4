#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "symcat/enriched.hpp"
#include "symcat/equinet.hpp"
#include "symcat/fincat.hpp"
#include "symcat/optdyn.hpp"
#include "symcat/sobj.hpp"
#include "symcat/symgrp.hpp"
#include "symcat/topo.hpp"

namespace symcat::cli {

using nlohmann::json;

inline const std::vector<std::string>& document_kinds() {
  static const std::vector<std::string> kinds{
      "category",         "functor", "nat",        "cat_action", "group",   "action",
      "representation",   "enriched_object", "model", "tying",  "complex", "filtration",
      "diagram",          "simplicial_object", "trajectory", "report"};
  return kinds;
}

struct Document {
  std::string kind;
  std::string path;
  std::string sha256;
  json payload;
};

std::string sha256_hex(const std::string& bytes);

/// ParseError on bad JSON; SchemaError on a missing or unknown kind, a bad
/// version or a missing payload.
Document parse_document(const std::string& text, const std::string& path = "<memory>");
/// As parse_document, reading `path` (UsageError if unreadable).
Document load_document(const std::string& path);
/// SchemaError unless `doc.kind == kind`.
void expect_kind(const Document& doc, const std::string& kind);

json make_document(const std::string& kind, json payload);

// Decoders raise SchemaError naming the offending field. They never run law
// checks; callers validate eagerly and report failures.
fincat::FinCategory decode_category(const json& p);
fincat::FunctorData decode_functor(const json& p, const fincat::FinCategory& src, const fincat::FinCategory& dst);
fincat::NatTransformData decode_nat(const json& p, const fincat::FinCategory& src, const fincat::FinCategory& dst);
fincat::GroupActionOnCat decode_cat_action(const json& p, const fincat::FinCategory& c);
symgrp::GroupPtr decode_group(const json& p);
symgrp::SetAction decode_action(const json& p);
symgrp::Representation decode_representation(const json& p);
enriched::EnrichedObject decode_enriched_object(const json& p);
equinet::DenseModel decode_model(const json& p);
equinet::TyingPattern decode_tying(const json& p);
topo::SimplicialComplex decode_complex(const json& p);
topo::Filtration decode_filtration(const json& p);
topo::PersistenceDiagram decode_diagram(const json& p);
sobj::SimplicialObjectData decode_simplicial(const json& p);
optdyn::Trajectory decode_trajectory(const json& p);

json encode_category(const fincat::FinCategory& c);
json encode_functor(const fincat::FunctorData& f, const fincat::FinCategory& src, const fincat::FinCategory& dst);
json encode_group(const symgrp::FinGroup& g);
json encode_representation(const symgrp::Representation& r);
json encode_model(const equinet::DenseModel& m);
json encode_tying(const equinet::TyingPattern& t);
json encode_diagram(const topo::PersistenceDiagram& d);
json encode_vector(const Vector& v);
json encode_matrix(const Matrix& m);  // row-major nested arrays
/// Non-finite reals become the strings "inf", "-inf", "nan".
json encode_real(double v);
double decode_real(const json& j, const std::string& where);

}  // namespace symcat::cli
