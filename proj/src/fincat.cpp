#include "symcat/fincat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "symcat/error.hpp"

namespace symcat::fincat {
namespace {

template <class Id>
std::optional<Id> find_name(const std::vector<std::string>& names, std::string_view name) {
  for (Id i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

template <class Id>
Id lookup(const std::vector<std::string>& names, const std::string& name, const char* what) {
  auto id = find_name<Id>(names, name);
  require(id.has_value(), ErrorKind::MalformedDocument, std::string("unknown ") + what + " '" + name + "'");
  return *id;
}

void require_unique(const std::vector<std::string>& names, const char* what) {
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  require(dup == sorted.end(), ErrorKind::MalformedDocument, std::string("duplicate ") + what + " '" + (dup == sorted.end() ? "" : *dup) + "'");
}

void check_functor_shape(const FunctorData& f, const FinCategory& src, const FinCategory& dst) {
  require(f.obj_map.size() == src.object_count(), ErrorKind::MalformedDocument, "functor leaves objects unmapped");
  require(f.mor_map.size() == src.morphism_count(), ErrorKind::MalformedDocument, "functor leaves morphisms unmapped");
  for (auto x : f.obj_map) require(x < dst.object_count(), ErrorKind::MalformedDocument, "functor object image out of range");
  for (auto x : f.mor_map) require(x < dst.morphism_count(), ErrorKind::MalformedDocument, "functor morphism image out of range");
}

bool is_functor(const FunctorData& f, const FinCategory& src, const FinCategory& dst) {
  for (MorId m = 0; m < src.morphism_count(); ++m) {
    if (dst.source(f.mor_map[m]) != f.obj_map[src.source(m)] || dst.target(f.mor_map[m]) != f.obj_map[src.target(m)]) return false;
  }
  for (ObjId a = 0; a < src.object_count(); ++a) {
    if (src.identity(a) && f.mor_map[*src.identity(a)] != dst.identity(f.obj_map[a])) return false;
  }
  for (MorId g = 0; g < src.morphism_count(); ++g) {
    for (MorId h = 0; h < src.morphism_count(); ++h) {
      if (!src.composable(g, h)) continue;
      auto r = src.compose(g, h);
      if (r && dst.compose(f.mor_map[g], f.mor_map[h]) != f.mor_map[*r]) return false;
    }
  }
  return true;
}

bool is_natural(const NatTransformData& eta, const FunctorData& f, const FunctorData& g, const FinCategory& src,
                const FinCategory& dst) {
  for (ObjId x = 0; x < src.object_count(); ++x) {
    if (dst.source(eta.components[x]) != f.obj_map[x] || dst.target(eta.components[x]) != g.obj_map[x]) return false;
  }
  for (MorId m = 0; m < src.morphism_count(); ++m) {
    auto lhs = dst.compose(eta.components[src.target(m)], f.mor_map[m]);
    auto rhs = dst.compose(g.mor_map[m], eta.components[src.source(m)]);
    if (!lhs || lhs != rhs) return false;
  }
  return true;
}

std::string join_names(const FinCategory& c, const std::vector<MorId>& ms) {
  std::string out;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) out += ",";
    out += c.morphism_name(ms[i]);
  }
  return out;
}

std::string cell_label(const EndoCat& hyp, const Cell& cell) {
  return "F" + std::to_string(cell.source) + "=>F" + std::to_string(cell.target) + "[" +
         join_names(hyp.base, cell.eta.components) + "]";
}

}  // namespace

FinCategory::FinCategory(std::vector<std::string> objects, const std::vector<MorphismDecl>& morphisms,
                         const std::vector<std::pair<std::string, std::string>>& identities,
                         const std::vector<CompositionEntry>& composition)
    : objects_(std::move(objects)) {
  require_unique(objects_, "object");
  for (const auto& m : morphisms) {
    mor_names_.push_back(m.name);
    src_.push_back(lookup<ObjId>(objects_, m.source, "object"));
    dst_.push_back(lookup<ObjId>(objects_, m.target, "object"));
  }
  require_unique(mor_names_, "morphism");
  ids_.assign(objects_.size(), std::nullopt);
  for (const auto& [obj, mor] : identities) {
    const auto a = lookup<ObjId>(objects_, obj, "object");
    require(!ids_[a].has_value(), ErrorKind::MalformedDocument, "object '" + obj + "' has two identities");
    ids_[a] = lookup<MorId>(mor_names_, mor, "morphism");
  }
  const std::size_t m = mor_names_.size();
  comp_.assign(m * m, std::nullopt);
  for (const auto& e : composition) {
    const auto g = lookup<MorId>(mor_names_, e.g, "morphism");
    const auto f = lookup<MorId>(mor_names_, e.f, "morphism");
    const auto r = lookup<MorId>(mor_names_, e.result, "morphism");
    require(composable(g, f), ErrorKind::MalformedDocument, "composition entry on non-composable pair (" + e.g + ", " + e.f + ")");
    require(!comp_[g * m + f].has_value(), ErrorKind::MalformedDocument, "duplicate composition entry (" + e.g + ", " + e.f + ")");
    comp_[g * m + f] = r;
  }
}

std::optional<ObjId> FinCategory::find_object(std::string_view name) const { return find_name<ObjId>(objects_, name); }
std::optional<MorId> FinCategory::find_morphism(std::string_view name) const { return find_name<MorId>(mor_names_, name); }

std::vector<MorId> FinCategory::hom(ObjId a, ObjId b) const {
  std::vector<MorId> out;
  for (MorId f = 0; f < morphism_count(); ++f) {
    if (src_[f] == a && dst_[f] == b) out.push_back(f);
  }
  return out;
}

bool FinCategory::is_iso(MorId f) const {
  for (MorId g : hom(dst_[f], src_[f])) {
    if (ids_[src_[f]] && ids_[dst_[f]] && compose(g, f) == ids_[src_[f]] && compose(f, g) == ids_[dst_[f]]) return true;
  }
  return false;
}

std::vector<MorphismDecl> FinCategory::morphism_decls() const {
  std::vector<MorphismDecl> out;
  for (MorId f = 0; f < morphism_count(); ++f) out.push_back({mor_names_[f], objects_[src_[f]], objects_[dst_[f]]});
  return out;
}

std::vector<std::pair<std::string, std::string>> FinCategory::identity_decls() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (ObjId a = 0; a < object_count(); ++a) {
    if (ids_[a]) out.emplace_back(objects_[a], mor_names_[*ids_[a]]);
  }
  return out;
}

std::vector<CompositionEntry> FinCategory::composition_decls() const {
  std::vector<CompositionEntry> out;
  for (MorId g = 0; g < morphism_count(); ++g) {
    for (MorId f = 0; f < morphism_count(); ++f) {
      if (auto r = compose(g, f)) out.push_back({mor_names_[g], mor_names_[f], mor_names_[*r]});
    }
  }
  return out;
}

FinCategory FinCategory::with_composite(MorId g, MorId f, std::optional<MorId> result) const {
  FinCategory copy = *this;
  copy.comp_[g * morphism_count() + f] = result;
  return copy;
}

FinCategory FinCategory::with_identity(ObjId a, std::optional<MorId> id) const {
  FinCategory copy = *this;
  copy.ids_[a] = id;
  return copy;
}

LawReport validate_category(const FinCategory& c, const CheckOptions& opts) {
  LawReport rep("validate_category");
  const std::size_t m = c.morphism_count();
  for (ObjId a = 0; a < c.object_count(); ++a) {
    rep.add_case();
    auto id = c.identity(a);
    if (!id) {
      rep.violate("identity_exists", {c.object_name(a)});
    } else if (c.source(*id) != a || c.target(*id) != a) {
      rep.violate("identity_endpoints", {c.object_name(a), c.morphism_name(*id)});
    }
  }
  for (MorId g = 0; g < m; ++g) {
    for (MorId f = 0; f < m; ++f) {
      if (!c.composable(g, f)) continue;
      rep.add_case();
      auto r = c.compose(g, f);
      if (!r) {
        rep.violate("composition_total", {c.morphism_name(g), c.morphism_name(f)});
      } else if (c.source(*r) != c.source(f) || c.target(*r) != c.target(g)) {
        rep.violate("composition_closed", {c.morphism_name(g), c.morphism_name(f)}, "result " + c.morphism_name(*r));
      }
    }
  }
  auto good_id = [&](ObjId a) -> std::optional<MorId> {
    auto id = c.identity(a);
    if (id && c.source(*id) == a && c.target(*id) == a) return id;
    return std::nullopt;
  };
  for (MorId f = 0; f < m; ++f) {
    if (auto ida = good_id(c.source(f))) {
      rep.add_case();
      auto r = c.compose(f, *ida);
      if (r && *r != f) rep.violate("right_identity", {c.morphism_name(f), c.morphism_name(*ida)}, "result " + c.morphism_name(*r));
    }
    if (auto idb = good_id(c.target(f))) {
      rep.add_case();
      auto r = c.compose(*idb, f);
      if (r && *r != f) rep.violate("left_identity", {c.morphism_name(*idb), c.morphism_name(f)}, "result " + c.morphism_name(*r));
    }
  }
  auto closed = [&](MorId g, MorId f) -> std::optional<MorId> {
    if (!c.composable(g, f)) return std::nullopt;
    auto r = c.compose(g, f);
    if (r && c.source(*r) == c.source(f) && c.target(*r) == c.target(g)) return r;
    return std::nullopt;
  };
  for (MorId h = 0; h < m; ++h) {
    for (MorId g = 0; g < m; ++g) {
      if (!c.composable(h, g)) continue;
      for (MorId f = 0; f < m; ++f) {
        if (!c.composable(g, f)) continue;
        auto hg = closed(h, g);
        auto gf = closed(g, f);
        if (!hg || !gf) continue;
        auto lhs = closed(*hg, f);
        auto rhs = closed(h, *gf);
        if (!lhs || !rhs) continue;
        rep.add_case();
        if (*lhs != *rhs) {
          rep.violate("associativity", {c.morphism_name(h), c.morphism_name(g), c.morphism_name(f)},
                      c.morphism_name(*lhs) + " != " + c.morphism_name(*rhs));
        }
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

LawReport check_functor(const FunctorData& f, const FinCategory& src, const FinCategory& dst, const CheckOptions& opts) {
  check_functor_shape(f, src, dst);
  LawReport rep("check_functor");
  for (MorId m = 0; m < src.morphism_count(); ++m) {
    rep.add_case();
    const MorId fm = f.mor_map[m];
    if (dst.source(fm) != f.obj_map[src.source(m)] || dst.target(fm) != f.obj_map[src.target(m)]) {
      rep.violate("endpoints", {src.morphism_name(m)}, "image " + dst.morphism_name(fm));
    }
  }
  for (ObjId a = 0; a < src.object_count(); ++a) {
    auto id = src.identity(a);
    if (!id) continue;
    rep.add_case();
    if (f.mor_map[*id] != dst.identity(f.obj_map[a])) rep.violate("identity", {src.object_name(a)});
  }
  for (MorId g = 0; g < src.morphism_count(); ++g) {
    for (MorId h = 0; h < src.morphism_count(); ++h) {
      if (!src.composable(g, h)) continue;
      auto r = src.compose(g, h);
      if (!r) continue;
      rep.add_case();
      if (dst.compose(f.mor_map[g], f.mor_map[h]) != f.mor_map[*r]) {
        rep.violate("composition", {src.morphism_name(g), src.morphism_name(h)});
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

LawReport check_natural(const NatTransformData& eta, const FunctorData& f, const FunctorData& g, const FinCategory& src,
                        const FinCategory& dst, const CheckOptions& opts) {
  check_functor_shape(f, src, dst);
  check_functor_shape(g, src, dst);
  require(eta.components.size() == src.object_count(), ErrorKind::MalformedDocument, "transformation is missing components");
  for (auto x : eta.components) require(x < dst.morphism_count(), ErrorKind::MalformedDocument, "component out of range");

  LawReport rep("check_natural");
  std::vector<bool> typed(src.object_count());
  for (ObjId x = 0; x < src.object_count(); ++x) {
    rep.add_case();
    const MorId c = eta.components[x];
    typed[x] = dst.source(c) == f.obj_map[x] && dst.target(c) == g.obj_map[x];
    if (!typed[x]) rep.violate("component_typing", {src.object_name(x)}, "component " + dst.morphism_name(c));
  }
  for (MorId m = 0; m < src.morphism_count(); ++m) {
    const ObjId a = src.source(m);
    const ObjId b = src.target(m);
    if (!typed[a] || !typed[b]) continue;
    rep.add_case();
    auto lhs = dst.compose(eta.components[b], f.mor_map[m]);
    auto rhs = dst.compose(g.mor_map[m], eta.components[a]);
    if (!lhs || lhs != rhs) {
      rep.violate("naturality", {src.morphism_name(m)},
                  (lhs ? dst.morphism_name(*lhs) : "?") + " != " + (rhs ? dst.morphism_name(*rhs) : "?"));
    }
  }
  rep.finalize(opts);
  return rep;
}

FunctorData identity_functor(const FinCategory& c) {
  FunctorData f;
  for (ObjId a = 0; a < c.object_count(); ++a) f.obj_map.push_back(a);
  for (MorId m = 0; m < c.morphism_count(); ++m) f.mor_map.push_back(m);
  return f;
}

FunctorData compose_functors(const FunctorData& g, const FunctorData& f) {
  FunctorData out;
  for (auto x : f.obj_map) out.obj_map.push_back(g.obj_map[x]);
  for (auto x : f.mor_map) out.mor_map.push_back(g.mor_map[x]);
  return out;
}

NatTransformData identity_transformation(const FunctorData& f, const FinCategory& src, const FinCategory& dst) {
  NatTransformData eta;
  for (ObjId x = 0; x < src.object_count(); ++x) {
    auto id = dst.identity(f.obj_map[x]);
    require(id.has_value(), ErrorKind::MalformedDocument, "target object has no identity");
    eta.components.push_back(*id);
  }
  return eta;
}

NatTransformData vertical_compose(const NatTransformData& beta, const NatTransformData& alpha, const FinCategory& dst) {
  require(beta.components.size() == alpha.components.size(), ErrorKind::NotComposable, "component counts differ");
  NatTransformData out;
  for (std::size_t x = 0; x < alpha.components.size(); ++x) {
    const MorId a = alpha.components[x];
    const MorId b = beta.components[x];
    require(dst.composable(b, a), ErrorKind::NotComposable, "components at object " + std::to_string(x) + " do not compose");
    auto r = dst.compose(b, a);
    require(r.has_value(), ErrorKind::NotComposable, "missing composite " + dst.morphism_name(b) + " o " + dst.morphism_name(a));
    out.components.push_back(*r);
  }
  return out;
}

NatTransformData horizontal_compose(const NatTransformData& beta, const FunctorData& f2, const NatTransformData& alpha,
                                    const FunctorData& g, const FinCategory& src, const FinCategory& dst) {
  NatTransformData out;
  for (ObjId x = 0; x < src.object_count(); ++x) {
    const MorId lifted = f2.mor_map[alpha.components[x]];
    const MorId b = beta.components[g.obj_map[x]];
    require(dst.composable(b, lifted), ErrorKind::NotComposable, "whiskered components do not compose");
    auto r = dst.compose(b, lifted);
    require(r.has_value(), ErrorKind::NotComposable, "missing composite in horizontal composition");
    out.components.push_back(*r);
  }
  return out;
}

std::optional<std::size_t> EndoCat::find_functor(const FunctorData& f) const {
  for (std::size_t i = 0; i < endofunctors.size(); ++i) {
    if (endofunctors[i] == f) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> EndoCat::find_cell(const Cell& c) const {
  if (c.source >= homs.size() || c.target >= homs.size()) return std::nullopt;
  const auto& list = homs[c.source][c.target];
  auto it = std::find(list.begin(), list.end(), c.eta);
  if (it == list.end()) return std::nullopt;
  return static_cast<std::size_t>(it - list.begin());
}

std::size_t EndoCat::identity_functor_index() const { return *find_functor(identity_functor(base)); }

Cell EndoCat::identity_cell(std::size_t functor) const {
  return {functor, functor, identity_transformation(endofunctors[functor], base, base)};
}

std::size_t EndoCat::transformation_count() const {
  std::size_t n = 0;
  for (const auto& row : homs) {
    for (const auto& h : row) n += h.size();
  }
  return n;
}

EndoCat enumerate_hyp(const FinCategory& c, const EnumerationLimits& limits) {
  const double n = static_cast<double>(c.object_count());
  const double m = static_cast<double>(c.morphism_count());
  const double candidates = std::pow(n, n) * std::pow(m, m);
  if (candidates > limits.max_candidates) {
    fail(ErrorKind::BudgetExceeded, "|obj|^|obj| * |mor|^|mor| = " + fmt_real(candidates) + " exceeds budget " +
                                        fmt_real(limits.max_candidates));
  }
  EndoCat hyp;
  hyp.base = c;
  const std::size_t no = c.object_count();
  const std::size_t nm = c.morphism_count();

  FunctorData cand;
  cand.obj_map.assign(no, 0);
  cand.mor_map.assign(nm, 0);
  std::vector<std::vector<MorId>> choices(nm);

  std::function<void(std::size_t)> assign_mor = [&](std::size_t k) {
    if (k == nm) {
      if (is_functor(cand, c, c)) hyp.endofunctors.push_back(cand);
      return;
    }
    for (MorId img : choices[k]) {
      cand.mor_map[k] = img;
      assign_mor(k + 1);
    }
  };
  std::function<void(std::size_t)> assign_obj = [&](std::size_t k) {
    if (k == no) {
      for (MorId f = 0; f < nm; ++f) choices[f] = c.hom(cand.obj_map[c.source(f)], cand.obj_map[c.target(f)]);
      assign_mor(0);
      return;
    }
    for (ObjId img = 0; img < no; ++img) {
      cand.obj_map[k] = img;
      assign_obj(k + 1);
    }
  };
  assign_obj(0);

  const std::size_t nf = hyp.endofunctors.size();
  hyp.homs.assign(nf, std::vector<std::vector<NatTransformData>>(nf));
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j < nf; ++j) {
      const auto& fi = hyp.endofunctors[i];
      const auto& fj = hyp.endofunctors[j];
      std::vector<std::vector<MorId>> comp_choices(no);
      for (ObjId x = 0; x < no; ++x) comp_choices[x] = c.hom(fi.obj_map[x], fj.obj_map[x]);
      NatTransformData eta;
      eta.components.assign(no, 0);
      std::function<void(std::size_t)> rec = [&](std::size_t x) {
        if (x == no) {
          if (is_natural(eta, fi, fj, c, c)) hyp.homs[i][j].push_back(eta);
          return;
        }
        for (MorId comp : comp_choices[x]) {
          eta.components[x] = comp;
          rec(x + 1);
        }
      };
      rec(0);
    }
  }
  return hyp;
}

Cell compose_nat(CompositionKind kind, const Cell& beta, const Cell& alpha, const EndoCat& hyp) {
  if (kind == CompositionKind::vertical) {
    require(alpha.target == beta.source, ErrorKind::NotComposable,
            "vertical composition needs alpha's target functor to be beta's source functor");
    return {alpha.source, beta.target, vertical_compose(beta.eta, alpha.eta, hyp.base)};
  }
  const auto& f2 = hyp.endofunctors.at(beta.source);
  const auto& g2 = hyp.endofunctors.at(beta.target);
  const auto& f = hyp.endofunctors.at(alpha.source);
  const auto& g = hyp.endofunctors.at(alpha.target);
  auto src = hyp.find_functor(compose_functors(f2, f));
  auto dst = hyp.find_functor(compose_functors(g2, g));
  require(src && dst, ErrorKind::NotInHyp, "composite functor missing from enumeration");
  return {*src, *dst, horizontal_compose(beta.eta, f2, alpha.eta, g, hyp.base, hyp.base)};
}

std::vector<std::vector<std::size_t>> vertical_table(const EndoCat& hyp, std::size_t i, std::size_t j, std::size_t k) {
  const auto& first = hyp.homs[i][j];
  const auto& second = hyp.homs[j][k];
  std::vector<std::vector<std::size_t>> table(second.size(), std::vector<std::size_t>(first.size()));
  for (std::size_t a = 0; a < second.size(); ++a) {
    for (std::size_t b = 0; b < first.size(); ++b) {
      const Cell r = compose_nat(CompositionKind::vertical, {j, k, second[a]}, {i, j, first[b]}, hyp);
      auto idx = hyp.find_cell(r);
      require(idx.has_value(), ErrorKind::NotInHyp, "vertical composite not enumerated");
      table[a][b] = *idx;
    }
  }
  return table;
}

LawReport check_interchange(const EndoCat& hyp, const CheckOptions& opts) {
  LawReport rep("check_interchange");
  const std::size_t nf = hyp.endofunctors.size();
  std::vector<std::pair<Cell, Cell>> pairs;  // (second, first) vertically composable
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j < nf; ++j) {
      for (std::size_t k = 0; k < nf; ++k) {
        for (const auto& a : hyp.homs[i][j]) {
          for (const auto& b : hyp.homs[j][k]) pairs.push_back({Cell{j, k, b}, Cell{i, j, a}});
        }
      }
    }
  }
  for (const auto& [alpha2, alpha] : pairs) {
    for (const auto& [beta2, beta] : pairs) {
      rep.add_case();
      const Cell lhs = compose_nat(CompositionKind::horizontal,
                                   compose_nat(CompositionKind::vertical, beta2, beta, hyp),
                                   compose_nat(CompositionKind::vertical, alpha2, alpha, hyp), hyp);
      const Cell rhs = compose_nat(CompositionKind::vertical, compose_nat(CompositionKind::horizontal, beta2, alpha2, hyp),
                                   compose_nat(CompositionKind::horizontal, beta, alpha, hyp), hyp);
      if (!(lhs == rhs)) {
        rep.violate("interchange", {cell_label(hyp, beta2), cell_label(hyp, beta), cell_label(hyp, alpha2), cell_label(hyp, alpha)});
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

LawReport check_stability(const NatTransformData& gamma, const FunctorData& f, const EndoCat& hyp, const CheckOptions& opts) {
  auto fi = hyp.find_functor(f);
  require(fi.has_value(), ErrorKind::NotInHyp, "boundary functor is not an enumerated endofunctor");
  const Cell g_cell{*fi, *fi, gamma};
  require(hyp.find_cell(g_cell).has_value(), ErrorKind::NotInHyp, "gamma is not a transformation of the boundary functor");

  LawReport rep("check_stability");
  const Cell id_cell = hyp.identity_cell(*fi);
  bool only_identities = true;
  for (std::size_t j = 0; j < hyp.endofunctors.size(); ++j) {
    for (const auto& beta : hyp.homs[j][*fi]) {
      rep.add_case();
      const Cell b{j, *fi, beta};
      if (!(b == id_cell)) only_identities = false;
      const Cell r = compose_nat(CompositionKind::vertical, g_cell, b, hyp);
      if (!(r == b)) rep.violate("gamma_beta_equals_beta", {cell_label(hyp, b)}, "gamma . beta = " + cell_label(hyp, r));
    }
  }
  const bool is_identity = g_cell == id_cell;
  if (is_identity != rep.passed()) {
    rep.violate("cross_validation", {cell_label(hyp, g_cell)}, "composite test and identity test disagree");
  }
  rep.vacuous = only_identities;
  if (only_identities) rep.note("vacuous: the only composable transformation is the identity");
  rep.metrics["gamma_is_identity"] = is_identity ? 1.0 : 0.0;
  if (!rep.passed()) {
    const bool natural_iso = std::all_of(gamma.components.begin(), gamma.components.end(),
                                         [&](MorId c) { return hyp.base.is_iso(c); });
    if (natural_iso) rep.note("holds up to isomorphism: gamma is a natural isomorphism, so gamma . beta is isomorphic to beta");
  }
  rep.finalize(opts);
  return rep;
}

FixedSubcategory fixed_subcategory(const FunctorData& f, const FinCategory& c, const CheckOptions& opts) {
  check_functor_shape(f, c, c);
  FixedSubcategory out;
  out.report = LawReport("fixed_subcategory");
  std::vector<bool> strict_obj(c.object_count(), false);
  for (ObjId a = 0; a < c.object_count(); ++a) {
    if (f.obj_map[a] == a) {
      strict_obj[a] = true;
      out.strict_objects.push_back(a);
    } else {
      for (MorId m : c.hom(f.obj_map[a], a)) {
        if (c.is_iso(m)) {
          out.iso_fixed_objects.push_back(a);
          break;
        }
      }
    }
  }
  std::vector<bool> strict_mor(c.morphism_count(), false);
  for (MorId m = 0; m < c.morphism_count(); ++m) {
    if (!strict_obj[c.source(m)] || !strict_obj[c.target(m)]) continue;
    out.report.add_case();
    if (f.mor_map[m] == m) {
      strict_mor[m] = true;
      out.strict_morphisms.push_back(m);
    } else {
      out.report.violate("strict_fixity", {c.morphism_name(m)}, "F maps it to " + c.morphism_name(f.mor_map[m]));
    }
  }

  std::vector<std::string> objs;
  for (ObjId a : out.strict_objects) objs.push_back(c.object_name(a));
  std::vector<MorphismDecl> mors;
  for (MorId m : out.strict_morphisms) mors.push_back({c.morphism_name(m), c.object_name(c.source(m)), c.object_name(c.target(m))});
  std::vector<std::pair<std::string, std::string>> ids;
  for (ObjId a : out.strict_objects) {
    if (auto id = c.identity(a); id && strict_mor[*id]) ids.emplace_back(c.object_name(a), c.morphism_name(*id));
  }
  std::vector<CompositionEntry> comps;
  for (MorId g : out.strict_morphisms) {
    for (MorId h : out.strict_morphisms) {
      if (!c.composable(g, h)) continue;
      auto r = c.compose(g, h);
      if (!r) continue;
      out.report.add_case();
      if (!strict_mor[*r]) {
        out.report.violate("closure", {c.morphism_name(g), c.morphism_name(h)});
        continue;
      }
      comps.push_back({c.morphism_name(g), c.morphism_name(h), c.morphism_name(*r)});
    }
  }
  out.strict = FinCategory(std::move(objs), mors, ids, comps);
  out.report.finalize(opts);
  return out;
}

LawReport check_bifunctor(const BifunctorData& b, const FinCategory& c1, const FinCategory& c2, const FinCategory& d,
                          const CheckOptions& opts) {
  require(b.obj_map.size() == c1.object_count() * c2.object_count(), ErrorKind::MalformedDocument, "bifunctor object map has wrong size");
  require(b.mor_map.size() == c1.morphism_count() * c2.morphism_count(), ErrorKind::MalformedDocument,
          "bifunctor morphism map has wrong size");
  for (auto x : b.obj_map) require(x < d.object_count(), ErrorKind::MalformedDocument, "bifunctor object image out of range");
  for (auto x : b.mor_map) require(x < d.morphism_count(), ErrorKind::MalformedDocument, "bifunctor morphism image out of range");

  LawReport rep("check_bifunctor");
  for (MorId f = 0; f < c1.morphism_count(); ++f) {
    for (MorId g = 0; g < c2.morphism_count(); ++g) {
      rep.add_case();
      const MorId img = b.mor(f, g, c2);
      if (d.source(img) != b.obj(c1.source(f), c2.source(g), c2) || d.target(img) != b.obj(c1.target(f), c2.target(g), c2)) {
        rep.violate("endpoints", {c1.morphism_name(f), c2.morphism_name(g)});
      }
    }
  }
  for (ObjId a = 0; a < c1.object_count(); ++a) {
    for (ObjId x = 0; x < c2.object_count(); ++x) {
      auto ia = c1.identity(a);
      auto ix = c2.identity(x);
      if (!ia || !ix) continue;
      rep.add_case();
      if (b.mor(*ia, *ix, c2) != d.identity(b.obj(a, x, c2))) rep.violate("identity", {c1.object_name(a), c2.object_name(x)});
    }
  }
  for (MorId g1 = 0; g1 < c1.morphism_count(); ++g1) {
    for (MorId f1 = 0; f1 < c1.morphism_count(); ++f1) {
      if (!c1.composable(g1, f1) || !c1.compose(g1, f1)) continue;
      for (MorId g2 = 0; g2 < c2.morphism_count(); ++g2) {
        for (MorId f2 = 0; f2 < c2.morphism_count(); ++f2) {
          if (!c2.composable(g2, f2) || !c2.compose(g2, f2)) continue;
          rep.add_case();
          const MorId lhs = b.mor(*c1.compose(g1, f1), *c2.compose(g2, f2), c2);
          auto rhs = d.compose(b.mor(g1, g2, c2), b.mor(f1, f2, c2));
          if (rhs != lhs) {
            rep.violate("composition", {c1.morphism_name(g1), c2.morphism_name(g2), c1.morphism_name(f1), c2.morphism_name(f2)});
          }
        }
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

FinCategory product_category(const FinCategory& c1, const FinCategory& c2) {
  auto pair_name = [](const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; };
  std::vector<std::string> objs;
  for (ObjId a = 0; a < c1.object_count(); ++a) {
    for (ObjId b = 0; b < c2.object_count(); ++b) objs.push_back(pair_name(c1.object_name(a), c2.object_name(b)));
  }
  std::vector<MorphismDecl> mors;
  for (MorId f = 0; f < c1.morphism_count(); ++f) {
    for (MorId g = 0; g < c2.morphism_count(); ++g) {
      mors.push_back({pair_name(c1.morphism_name(f), c2.morphism_name(g)),
                      pair_name(c1.object_name(c1.source(f)), c2.object_name(c2.source(g))),
                      pair_name(c1.object_name(c1.target(f)), c2.object_name(c2.target(g)))});
    }
  }
  std::vector<std::pair<std::string, std::string>> ids;
  for (ObjId a = 0; a < c1.object_count(); ++a) {
    for (ObjId b = 0; b < c2.object_count(); ++b) {
      if (c1.identity(a) && c2.identity(b)) {
        ids.emplace_back(pair_name(c1.object_name(a), c2.object_name(b)),
                         pair_name(c1.morphism_name(*c1.identity(a)), c2.morphism_name(*c2.identity(b))));
      }
    }
  }
  std::vector<CompositionEntry> comps;
  for (MorId g1 = 0; g1 < c1.morphism_count(); ++g1) {
    for (MorId f1 = 0; f1 < c1.morphism_count(); ++f1) {
      auto r1 = c1.compose(g1, f1);
      if (!r1) continue;
      for (MorId g2 = 0; g2 < c2.morphism_count(); ++g2) {
        for (MorId f2 = 0; f2 < c2.morphism_count(); ++f2) {
          auto r2 = c2.compose(g2, f2);
          if (!r2) continue;
          comps.push_back({pair_name(c1.morphism_name(g1), c2.morphism_name(g2)), pair_name(c1.morphism_name(f1), c2.morphism_name(f2)),
                           pair_name(c1.morphism_name(*r1), c2.morphism_name(*r2))});
        }
      }
    }
  }
  return FinCategory(std::move(objs), mors, ids, comps);
}

BifunctorData product_bifunctor(const FinCategory& c1, const FinCategory& c2) {
  BifunctorData b;
  for (std::size_t i = 0; i < c1.object_count() * c2.object_count(); ++i) b.obj_map.push_back(i);
  for (std::size_t i = 0; i < c1.morphism_count() * c2.morphism_count(); ++i) b.mor_map.push_back(i);
  return b;
}

BifunctorData projection_bifunctor(const FinCategory& c1, const FinCategory& c2) {
  BifunctorData b;
  for (ObjId a = 0; a < c1.object_count(); ++a) {
    for (ObjId x = 0; x < c2.object_count(); ++x) b.obj_map.push_back(a);
  }
  for (MorId f = 0; f < c1.morphism_count(); ++f) {
    for (MorId g = 0; g < c2.morphism_count(); ++g) b.mor_map.push_back(f);
  }
  return b;
}

IsoLift iso_lift(const BifunctorData& b, const FinCategory& c1, const FinCategory& c2, const FinCategory& d, MorId h) {
  require(h < d.morphism_count(), ErrorKind::MalformedDocument, "morphism out of range");
  require(d.is_iso(h), ErrorKind::NotIso, d.morphism_name(h) + " has no two-sided inverse");
  IsoLift out;
  for (MorId f = 0; f < c1.morphism_count(); ++f) {
    for (MorId g = 0; g < c2.morphism_count(); ++g) {
      out.tried.emplace_back(f, g);
      const MorId img = b.mor(f, g, c2);
      if (d.source(img) == d.source(h) && d.target(img) == d.target(h) && d.is_iso(img)) {
        out.found = std::make_pair(f, g);
        return out;
      }
    }
  }
  return out;
}

LawReport validate_cat_action(const GroupActionOnCat& act, const FinCategory& c, const CheckOptions& opts) {
  require(act.group != nullptr, ErrorKind::MalformedDocument, "action without a group");
  require(act.functors.size() == act.group->order(), ErrorKind::MalformedDocument, "action needs one functor per element");
  const auto& grp = *act.group;
  LawReport rep("validate_cat_action");
  for (symgrp::Elem g = 0; g < grp.order(); ++g) {
    LawReport fr = check_functor(act.functors[g], c, c);
    fr.check = "functor[" + grp.name(g) + "]";
    rep.merge(fr);
    rep.add_case();
    auto is_bijection = [](std::vector<std::size_t> v) {
      std::sort(v.begin(), v.end());
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != i) return false;
      }
      return true;
    };
    if (!is_bijection(act.functors[g].obj_map) || !is_bijection(act.functors[g].mor_map)) rep.violate("invertible", {grp.name(g)});
  }
  rep.add_case();
  if (!(act.functors[grp.identity()] == identity_functor(c))) rep.violate("identity", {grp.name(grp.identity())});
  for (symgrp::Elem g = 0; g < grp.order(); ++g) {
    for (symgrp::Elem h = 0; h < grp.order(); ++h) {
      rep.add_case();
      if (!(act.functors[grp.mul(g, h)] == compose_functors(act.functors[g], act.functors[h]))) {
        rep.violate("homomorphism", {grp.name(g), grp.name(h)});
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

LawReport check_equivariant_functor(const FunctorData& f, const GroupActionOnCat& act, const FinCategory& c,
                                    const CheckOptions& opts) {
  check_functor_shape(f, c, c);
  require(act.group != nullptr && act.functors.size() == act.group->order(), ErrorKind::MalformedDocument,
          "action needs one functor per element");
  for (const auto& a : act.functors) check_functor_shape(a, c, c);
  LawReport rep("check_equivariant_functor");
  for (symgrp::Elem g = 0; g < act.group->order(); ++g) {
    const auto& ag = act.functors[g];
    for (ObjId x = 0; x < c.object_count(); ++x) {
      rep.add_case();
      if (f.obj_map[ag.obj_map[x]] != ag.obj_map[f.obj_map[x]]) rep.violate("objects", {act.group->name(g), c.object_name(x)});
    }
    for (MorId m = 0; m < c.morphism_count(); ++m) {
      rep.add_case();
      if (f.mor_map[ag.mor_map[m]] != ag.mor_map[f.mor_map[m]]) rep.violate("morphisms", {act.group->name(g), c.morphism_name(m)});
    }
  }
  rep.finalize(opts);
  return rep;
}

namespace catalog {
namespace {

/// Adds the unit-law entries for every identity, then the given entries.
FinCategory with_units(std::vector<std::string> objs, const std::vector<MorphismDecl>& mors,
                       const std::vector<std::pair<std::string, std::string>>& ids, std::vector<CompositionEntry> extra) {
  std::map<std::string, std::string> id_of;
  for (const auto& [o, m] : ids) id_of[o] = m;
  std::vector<CompositionEntry> comps;
  for (const auto& m : mors) {
    comps.push_back({m.name, id_of[m.source], m.name});
    if (m.name != id_of[m.target]) comps.push_back({id_of[m.target], m.name, m.name});
  }
  for (auto& e : extra) comps.push_back(std::move(e));
  return FinCategory(std::move(objs), mors, ids, comps);
}

}  // namespace

FinCategory terminal() { return with_units({"*"}, {{"id_*", "*", "*"}}, {{"*", "id_*"}}, {}); }

FinCategory arrow() {
  return with_units({"a", "b"}, {{"id_a", "a", "a"}, {"id_b", "b", "b"}, {"f", "a", "b"}}, {{"a", "id_a"}, {"b", "id_b"}}, {});
}

FinCategory bz2() {
  return with_units({"*"}, {{"e", "*", "*"}, {"s", "*", "*"}}, {{"*", "e"}}, {{"s", "s", "e"}});
}

FinCategory parallel_pair() {
  return with_units({"a", "b"}, {{"id_a", "a", "a"}, {"id_b", "b", "b"}, {"u", "a", "b"}, {"v", "a", "b"}},
                    {{"a", "id_a"}, {"b", "id_b"}}, {});
}

FinCategory iso_pair() {
  return with_units({"x", "y"}, {{"id_x", "x", "x"}, {"id_y", "y", "y"}, {"u", "x", "y"}, {"v", "y", "x"}},
                    {{"x", "id_x"}, {"y", "id_y"}}, {{"u", "v", "id_y"}, {"v", "u", "id_x"}});
}

FinCategory discrete(std::size_t n) {
  std::vector<std::string> objs;
  std::vector<MorphismDecl> mors;
  std::vector<std::pair<std::string, std::string>> ids;
  for (std::size_t i = 0; i < n; ++i) {
    objs.push_back("o" + std::to_string(i));
    mors.push_back({"id_o" + std::to_string(i), objs.back(), objs.back()});
    ids.emplace_back(objs.back(), mors.back().name);
  }
  return with_units(std::move(objs), mors, ids, {});
}

FunctorData bz2_collapse() { return FunctorData{{0}, {0, 0}}; }

GroupActionOnCat parallel_swap_action() {
  const FinCategory c = parallel_pair();
  FunctorData swap = identity_functor(c);
  std::swap(swap.mor_map[*c.find_morphism("u")], swap.mor_map[*c.find_morphism("v")]);
  return {symgrp::cyclic(2), {identity_functor(c), swap}};
}

}  // namespace catalog

}  // namespace symcat::fincat
