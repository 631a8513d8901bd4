#include "documents.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "symcat/error.hpp"

namespace symcat::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  fail(ErrorKind::SchemaError, "field '" + where + "': " + what);
}

const json& field(const json& p, const std::string& name, const std::string& ctx) {
  if (!p.is_object()) schema(ctx, "expected an object");
  auto it = p.find(name);
  if (it == p.end()) schema(ctx.empty() ? name : ctx + "." + name, "missing");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) schema(where, "expected a string");
  return j.get<std::string>();
}

std::size_t as_index(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) schema(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<std::size_t> as_indices(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_index(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> as_reals(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(decode_real(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> as_strings(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::map<std::string, std::string> as_string_map(const json& j, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object of strings");
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = as_string(it.value(), where + "." + it.key());
  return out;
}

Matrix as_matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array() || j.size() != rows) schema(where, "expected " + std::to_string(rows) + " rows");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = as_reals(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols) schema(where + "[" + std::to_string(r) + "]", "expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return m;
}

fincat::FinCategory catalog_category(const std::string& name, const std::string& where) {
  namespace cat = fincat::catalog;
  if (name == "terminal") return cat::terminal();
  if (name == "arrow") return cat::arrow();
  if (name == "bz2") return cat::bz2();
  if (name == "parallel_pair") return cat::parallel_pair();
  if (name == "iso_pair") return cat::iso_pair();
  if (name.rfind("discrete:", 0) == 0) return cat::discrete(std::stoul(name.substr(9)));
  schema(where, "unknown built-in category '" + name + "'");
}

}  // namespace

double decode_real(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  schema(where, "expected a number");
}

json encode_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json encode_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(encode_real(v(i)));
  return out;
}

json encode_matrix(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(encode_real(m(r, c)));
    out.push_back(row);
  }
  return out;
}

Document parse_document(const std::string& text, const std::string& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  Document doc;
  doc.path = path;
  doc.sha256 = sha256_hex(text);
  if (!j.is_object()) schema("<root>", "expected an object");
  doc.kind = as_string(field(j, "kind", ""), "kind");
  const auto& kinds = document_kinds();
  if (std::find(kinds.begin(), kinds.end(), doc.kind) == kinds.end()) schema("kind", "unknown kind '" + doc.kind + "'");
  const auto version = as_string(field(j, "version", ""), "version");
  if (version != "1") schema("version", "expected \"1\", got \"" + version + "\"");
  doc.payload = field(j, "payload", "");
  return doc;
}

Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::UsageError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path);
}

void expect_kind(const Document& doc, const std::string& kind) {
  if (doc.kind != kind) schema("kind", doc.path + " has kind '" + doc.kind + "', expected '" + kind + "'");
}

json make_document(const std::string& kind, json payload) {
  return json{{"kind", kind}, {"version", "1"}, {"payload", std::move(payload)}};
}

// --- fincat ----------------------------------------------------------------

fincat::FinCategory decode_category(const json& p) {
  if (p.is_object() && p.contains("builtin")) return catalog_category(as_string(p["builtin"], "builtin"), "builtin");
  auto objects = as_strings(field(p, "objects", ""), "objects");
  const auto& mj = field(p, "morphisms", "");
  if (!mj.is_array()) schema("morphisms", "expected an array");
  std::vector<fincat::MorphismDecl> mors;
  for (std::size_t i = 0; i < mj.size(); ++i) {
    const std::string w = "morphisms[" + std::to_string(i) + "]";
    mors.push_back({as_string(field(mj[i], "name", w), w + ".name"), as_string(field(mj[i], "source", w), w + ".source"),
                    as_string(field(mj[i], "target", w), w + ".target")});
  }
  std::vector<std::pair<std::string, std::string>> ids;
  for (const auto& [o, m] : as_string_map(field(p, "identities", ""), "identities")) ids.emplace_back(o, m);
  std::vector<fincat::CompositionEntry> comps;
  const auto& cj = p.contains("composition") ? p["composition"] : json::array();
  if (!cj.is_array()) schema("composition", "expected an array");
  std::set<std::pair<std::string, std::string>> listed;
  for (std::size_t i = 0; i < cj.size(); ++i) {
    const std::string w = "composition[" + std::to_string(i) + "]";
    comps.push_back({as_string(field(cj[i], "g", w), w + ".g"), as_string(field(cj[i], "f", w), w + ".f"),
                     as_string(field(cj[i], "result", w), w + ".result")});
    listed.insert({comps.back().g, comps.back().f});
  }
  // With implicit_units, unlisted composites with a declared identity follow the unit laws.
  if (p.value("implicit_units", false)) {
    std::map<std::string, std::string> id_of(ids.begin(), ids.end());
    for (const auto& m : mors) {
      auto s = id_of.find(m.source), t = id_of.find(m.target);
      if (s != id_of.end() && !listed.count({m.name, s->second})) {
        comps.push_back({m.name, s->second, m.name});
        listed.insert({m.name, s->second});
      }
      if (t != id_of.end() && !listed.count({t->second, m.name})) {
        comps.push_back({t->second, m.name, m.name});
        listed.insert({t->second, m.name});
      }
    }
  }
  try {
    return fincat::FinCategory(std::move(objects), mors, ids, comps);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedDocument) schema("category", e.what());
    throw;
  }
}

json encode_category(const fincat::FinCategory& c) {
  json mors = json::array();
  for (const auto& m : c.morphism_decls()) mors.push_back({{"name", m.name}, {"source", m.source}, {"target", m.target}});
  json ids = json::object();
  for (const auto& [o, m] : c.identity_decls()) ids[o] = m;
  json comps = json::array();
  for (const auto& e : c.composition_decls()) comps.push_back({{"g", e.g}, {"f", e.f}, {"result", e.result}});
  return {{"objects", c.object_names()}, {"morphisms", mors}, {"identities", ids}, {"composition", comps}};
}

fincat::FunctorData decode_functor(const json& p, const fincat::FinCategory& src, const fincat::FinCategory& dst) {
  if (p.is_object() && p.value("builtin", "") == "identity") {
    if (src.object_count() != dst.object_count() || src.morphism_count() != dst.morphism_count())
      schema("builtin", "identity functor needs equal source and target");
    return fincat::identity_functor(src);
  }
  const auto objs = as_string_map(field(p, "objects", ""), "objects");
  const auto mors = as_string_map(field(p, "morphisms", ""), "morphisms");
  fincat::FunctorData f;
  for (std::size_t a = 0; a < src.object_count(); ++a) {
    const auto& name = src.object_name(a);
    auto it = objs.find(name);
    if (it == objs.end()) schema("objects." + name, "missing");
    auto id = dst.find_object(it->second);
    if (!id) schema("objects." + name, "unknown target object '" + it->second + "'");
    f.obj_map.push_back(*id);
  }
  for (std::size_t m = 0; m < src.morphism_count(); ++m) {
    const auto& name = src.morphism_name(m);
    auto it = mors.find(name);
    if (it == mors.end()) schema("morphisms." + name, "missing");
    auto id = dst.find_morphism(it->second);
    if (!id) schema("morphisms." + name, "unknown target morphism '" + it->second + "'");
    f.mor_map.push_back(*id);
  }
  return f;
}

json encode_functor(const fincat::FunctorData& f, const fincat::FinCategory& src, const fincat::FinCategory& dst) {
  json objs = json::object(), mors = json::object();
  for (std::size_t a = 0; a < f.obj_map.size(); ++a) objs[src.object_name(a)] = dst.object_name(f.obj_map[a]);
  for (std::size_t m = 0; m < f.mor_map.size(); ++m) mors[src.morphism_name(m)] = dst.morphism_name(f.mor_map[m]);
  return {{"objects", objs}, {"morphisms", mors}};
}

fincat::NatTransformData decode_nat(const json& p, const fincat::FinCategory& src, const fincat::FinCategory& dst) {
  const auto comps = as_string_map(field(p, "components", ""), "components");
  fincat::NatTransformData eta;
  for (std::size_t a = 0; a < src.object_count(); ++a) {
    const auto& name = src.object_name(a);
    auto it = comps.find(name);
    if (it == comps.end()) schema("components." + name, "missing");
    auto id = dst.find_morphism(it->second);
    if (!id) schema("components." + name, "unknown morphism '" + it->second + "'");
    eta.components.push_back(*id);
  }
  return eta;
}

fincat::GroupActionOnCat decode_cat_action(const json& p, const fincat::FinCategory& c) {
  fincat::GroupActionOnCat act;
  act.group = decode_group(field(p, "group", ""));
  const auto& fj = field(p, "functors", "");
  if (!fj.is_object()) schema("functors", "expected an object keyed by group element");
  for (std::size_t g = 0; g < act.group->order(); ++g) {
    const auto& name = act.group->name(g);
    if (!fj.contains(name)) schema("functors." + name, "missing");
    act.functors.push_back(decode_functor(fj[name], c, c));
  }
  return act;
}

// --- symgrp ----------------------------------------------------------------

symgrp::GroupPtr decode_group(const json& p) {
  std::string builtin;
  if (p.is_string()) builtin = p.get<std::string>();
  else if (p.is_object() && p.contains("builtin")) builtin = as_string(p["builtin"], "group.builtin");
  if (!builtin.empty()) {
    if (builtin == "trivial") return symgrp::trivial_group();
    if (builtin == "s3") return symgrp::symmetric3();
    if (builtin.rfind("cyclic:", 0) == 0) {
      std::size_t n = 0;
      try {
        n = std::stoul(builtin.substr(7));
      } catch (const std::exception&) {
        schema("group.builtin", "bad cyclic order");
      }
      if (n == 0) schema("group.builtin", "cyclic order must be positive");
      return symgrp::cyclic(n);
    }
    schema("group.builtin", "unknown built-in group '" + builtin + "'");
  }
  auto names = as_strings(field(p, "elements", "group"), "group.elements");
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!idx.emplace(names[i], i).second) schema("group.elements", "duplicate element '" + names[i] + "'");
  auto lookup = [&](const std::string& n, const std::string& where) {
    auto it = idx.find(n);
    if (it == idx.end()) schema(where, "unknown element '" + n + "'");
    return it->second;
  };
  const auto identity = lookup(as_string(field(p, "identity", "group"), "group.identity"), "group.identity");
  const auto& tj = field(p, "table", "group");
  if (!tj.is_array() || tj.size() != names.size()) schema("group.table", "expected one row per element");
  std::vector<std::vector<symgrp::Elem>> table;
  for (std::size_t a = 0; a < names.size(); ++a) {
    const std::string w = "group.table[" + std::to_string(a) + "]";
    auto row = as_strings(tj[a], w);
    if (row.size() != names.size()) schema(w, "expected one entry per element");
    std::vector<symgrp::Elem> r;
    for (std::size_t b = 0; b < row.size(); ++b) r.push_back(lookup(row[b], w + "[" + std::to_string(b) + "]"));
    table.push_back(std::move(r));
  }
  try {
    return std::make_shared<const symgrp::FinGroup>(names, table, identity);
  } catch (const Error& e) {
    schema("group", e.what());
  }
}

json encode_group(const symgrp::FinGroup& g) {
  json table = json::array();
  for (std::size_t a = 0; a < g.order(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < g.order(); ++b) row.push_back(g.name(g.mul(a, b)));
    table.push_back(row);
  }
  return {{"elements", g.names()}, {"identity", g.name(g.identity())}, {"table", table}};
}

symgrp::SetAction decode_action(const json& p) {
  if (p.is_object() && p.contains("builtin")) {
    const auto b = as_string(p["builtin"], "builtin");
    if (b == "pair") return symgrp::pair_action(decode_action(field(p, "out", "")), decode_action(field(p, "in", "")));
    auto g = decode_group(field(p, "group", ""));
    if (b == "rotation") {
      if (g->names().size() < 2 || g->name(1) != "r1") schema("builtin", "rotation needs a cyclic group");
      return symgrp::rotation_action(g);
    }
    if (b == "trivial") return symgrp::trivial_action(g, as_index(field(p, "size", ""), "size"));
    schema("builtin", "unknown built-in action '" + b + "'");
  }
  auto g = decode_group(field(p, "group", ""));
  const auto size = as_index(field(p, "size", ""), "size");
  const auto& tj = field(p, "table", "");
  if (!tj.is_array() || tj.size() != g->order()) schema("table", "expected one row per group element");
  std::vector<std::vector<std::size_t>> table;
  for (std::size_t i = 0; i < tj.size(); ++i) {
    const std::string w = "table[" + std::to_string(i) + "]";
    table.push_back(as_indices(tj[i], w));
    if (table.back().size() != size) schema(w, "expected " + std::to_string(size) + " entries");
  }
  try {
    return symgrp::SetAction(g, size, table);
  } catch (const Error& e) {
    schema("action", e.what());
  }
}

symgrp::Representation decode_representation(const json& p) {
  if (p.is_object() && p.contains("builtin")) {
    const auto b = as_string(p["builtin"], "builtin");
    if (b == "swap") return symgrp::swap_representation();
    if (b == "permutation") return symgrp::permutation_representation(decode_action(field(p, "action", "")));
    if (b == "regular") return symgrp::regular_representation(decode_group(field(p, "group", "")));
    if (b == "trivial")
      return symgrp::trivial_representation(decode_group(field(p, "group", "")), as_index(field(p, "dim", ""), "dim"));
    if (b == "direct_sum")
      return symgrp::direct_sum(decode_representation(field(p, "of", "")), as_index(field(p, "copies", ""), "copies"));
    schema("builtin", "unknown built-in representation '" + b + "'");
  }
  auto g = decode_group(field(p, "group", ""));
  const auto dim = as_index(field(p, "dim", ""), "dim");
  const auto& mj = field(p, "matrices", "");
  if (!mj.is_array() || mj.size() != g->order()) schema("matrices", "expected one matrix per group element");
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < mj.size(); ++i) mats.push_back(as_matrix(mj[i], dim, dim, "matrices[" + std::to_string(i) + "]"));
  try {
    return symgrp::Representation(g, dim, std::move(mats));
  } catch (const Error& e) {
    schema("representation", e.what());
  }
}

json encode_representation(const symgrp::Representation& r) {
  json mats = json::array();
  for (const auto& m : r.matrices()) mats.push_back(encode_matrix(m));
  return {{"group", encode_group(*r.group())}, {"dim", r.dim()}, {"matrices", mats}};
}

enriched::EnrichedObject decode_enriched_object(const json& p) {
  if (p.is_object() && p.contains("representation")) return {decode_representation(p["representation"])};
  const auto& cj = field(p, "categorical", "");
  enriched::CategoricalRep c;
  c.category = std::make_shared<const fincat::FinCategory>(decode_category(field(cj, "category", "categorical")));
  const auto obj = as_string(field(cj, "object", "categorical"), "categorical.object");
  auto oid = c.category->find_object(obj);
  if (!oid) schema("categorical.object", "unknown object '" + obj + "'");
  c.object = *oid;
  c.group = decode_group(field(cj, "group", "categorical"));
  const auto autos = as_string_map(field(cj, "automorphisms", "categorical"), "categorical.automorphisms");
  for (std::size_t g = 0; g < c.group->order(); ++g) {
    auto it = autos.find(c.group->name(g));
    if (it == autos.end()) schema("categorical.automorphisms." + c.group->name(g), "missing");
    auto mid = c.category->find_morphism(it->second);
    if (!mid) schema("categorical.automorphisms." + c.group->name(g), "unknown morphism '" + it->second + "'");
    c.automorphisms.push_back(*mid);
  }
  return {c};
}

// --- equinet ---------------------------------------------------------------

equinet::DenseModel decode_model(const json& p) {
  const auto& lj = field(p, "layers", "");
  if (!lj.is_array() || lj.empty()) schema("layers", "expected a non-empty array");
  equinet::DenseModel m;
  for (std::size_t i = 0; i < lj.size(); ++i) {
    const std::string w = "layers[" + std::to_string(i) + "]";
    const auto rows = as_index(field(lj[i], "rows", w), w + ".rows");
    const auto cols = as_index(field(lj[i], "cols", w), w + ".cols");
    equinet::Layer layer;
    layer.w = as_matrix(field(lj[i], "w", w), rows, cols, w + ".w");
    auto b = as_reals(field(lj[i], "b", w), w + ".b");
    if (b.size() != rows) schema(w + ".b", "expected " + std::to_string(rows) + " entries");
    layer.b = Eigen::Map<Vector>(b.data(), static_cast<Eigen::Index>(b.size()));
    try {
      layer.act = equinet::parse_activation(lj[i].value("activation", "identity"));
    } catch (const Error&) {
      schema(w + ".activation", "unknown activation");
    }
    m.layers.push_back(std::move(layer));
  }
  return m;
}

json encode_model(const equinet::DenseModel& m) {
  json layers = json::array();
  for (const auto& l : m.layers)
    layers.push_back({{"rows", l.w.rows()},
                      {"cols", l.w.cols()},
                      {"w", encode_matrix(l.w)},
                      {"b", encode_vector(l.b)},
                      {"activation", equinet::to_string(l.act)}});
  return {{"layers", layers}};
}

equinet::TyingPattern decode_tying(const json& p) {
  equinet::TyingPattern t;
  t.n_out = as_index(field(p, "n_out", ""), "n_out");
  t.n_in = as_index(field(p, "n_in", ""), "n_in");
  t.weight_orbit = as_indices(field(p, "weight_orbit", ""), "weight_orbit");
  t.bias_orbit = as_indices(field(p, "bias_orbit", ""), "bias_orbit");
  if (t.weight_orbit.size() != t.n_out * t.n_in) schema("weight_orbit", "expected n_out * n_in entries");
  if (t.bias_orbit.size() != t.n_out) schema("bias_orbit", "expected n_out entries");
  return t;
}

json encode_tying(const equinet::TyingPattern& t) {
  return {{"n_out", t.n_out}, {"n_in", t.n_in}, {"weight_orbit", t.weight_orbit}, {"bias_orbit", t.bias_orbit}};
}

// --- topo ------------------------------------------------------------------

topo::SimplicialComplex decode_complex(const json& p) {
  const auto& sj = field(p, "simplices", "");
  if (!sj.is_array()) schema("simplices", "expected an array");
  topo::SimplicialComplex k;
  for (std::size_t i = 0; i < sj.size(); ++i) k.simplices.push_back(as_indices(sj[i], "simplices[" + std::to_string(i) + "]"));
  return k;
}

topo::Filtration decode_filtration(const json& p) {
  topo::Filtration f;
  f.complex = decode_complex(p);
  f.values = as_reals(field(p, "values", ""), "values");
  if (f.values.size() != f.complex.simplices.size()) schema("values", "expected one value per simplex");
  return f;
}

topo::PersistenceDiagram decode_diagram(const json& p) {
  const auto& bj = field(p, "bars", "");
  if (!bj.is_array()) schema("bars", "expected an array");
  topo::PersistenceDiagram d;
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const std::string w = "bars[" + std::to_string(i) + "]";
    d.bars.push_back({as_index(field(bj[i], "dim", w), w + ".dim"), decode_real(field(bj[i], "birth", w), w + ".birth"),
                      decode_real(field(bj[i], "death", w), w + ".death")});
  }
  std::sort(d.bars.begin(), d.bars.end());
  return d;
}

json encode_diagram(const topo::PersistenceDiagram& d) {
  json bars = json::array();
  for (const auto& b : d.bars) bars.push_back({{"dim", b.dim}, {"birth", encode_real(b.birth)}, {"death", encode_real(b.death)}});
  return {{"bars", bars}};
}

// --- sobj ------------------------------------------------------------------

sobj::SimplicialObjectData decode_simplicial(const json& p) {
  if (p.is_object() && p.contains("nerve_of")) {
    const auto c = decode_category(p["nerve_of"]);
    const auto level = p.contains("level") ? as_index(p["level"], "level") : std::size_t{2};
    try {
      return sobj::nerve(c, level);
    } catch (const Error& e) {
      schema("nerve_of", e.what());
    }
  }
  sobj::SimplicialObjectData m;
  m.level_sizes = as_indices(field(p, "level_sizes", ""), "level_sizes");
  auto tables = [&](const char* name) {
    const auto& tj = field(p, name, "");
    if (!tj.is_array()) schema(name, "expected an array per level");
    std::vector<std::vector<std::vector<std::size_t>>> out;
    for (std::size_t k = 0; k < tj.size(); ++k) {
      const std::string w = std::string(name) + "[" + std::to_string(k) + "]";
      if (!tj[k].is_array()) schema(w, "expected an array of tables");
      std::vector<std::vector<std::size_t>> level;
      for (std::size_t i = 0; i < tj[k].size(); ++i) level.push_back(as_indices(tj[k][i], w + "[" + std::to_string(i) + "]"));
      out.push_back(std::move(level));
    }
    return out;
  };
  m.face = tables("face");
  m.degen = tables("degen");
  if (p.contains("labels")) {
    for (std::size_t k = 0; k < p["labels"].size(); ++k)
      m.labels.push_back(as_strings(p["labels"][k], "labels[" + std::to_string(k) + "]"));
  }
  return m;
}

// --- optdyn ----------------------------------------------------------------

optdyn::Trajectory decode_trajectory(const json& p) {
  const auto& pj = field(p, "points", "");
  if (!pj.is_array()) schema("points", "expected an array");
  optdyn::Trajectory traj;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string w = "points[" + std::to_string(i) + "]";
    const auto& tj = field(pj[i], "t", w);
    if (!tj.is_number_integer()) schema(w + ".t", "expected an integer");
    auto theta = as_reals(field(pj[i], "theta", w), w + ".theta");
    traj.push_back({tj.get<std::int64_t>(), Eigen::Map<Vector>(theta.data(), static_cast<Eigen::Index>(theta.size()))});
  }
  return traj;
}

}  // namespace symcat::cli
