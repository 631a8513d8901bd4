#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symcat/report.hpp"
#include "symcat/symgrp.hpp"

namespace symcat::fincat {

using ObjId = std::size_t;
using MorId = std::size_t;

struct MorphismDecl {
  std::string name;
  std::string source;
  std::string target;
};

/// g o f = result
struct CompositionEntry {
  std::string g;
  std::string f;
  std::string result;
};

/// A finite category with an explicit composition table.
///
/// Construction rejects dangling ids and composition entries on pairs that
/// are not composable (MalformedDocument). Missing identities or missing
/// composites are representable; validate_category reports them.
class FinCategory {
 public:
  FinCategory() = default;
  FinCategory(std::vector<std::string> objects, const std::vector<MorphismDecl>& morphisms,
              const std::vector<std::pair<std::string, std::string>>& identities,
              const std::vector<CompositionEntry>& composition);

  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return mor_names_.size(); }
  const std::string& object_name(ObjId a) const { return objects_[a]; }
  const std::string& morphism_name(MorId f) const { return mor_names_[f]; }
  const std::vector<std::string>& object_names() const { return objects_; }
  const std::vector<std::string>& morphism_names() const { return mor_names_; }
  ObjId source(MorId f) const { return src_[f]; }
  ObjId target(MorId f) const { return dst_[f]; }
  std::optional<MorId> identity(ObjId a) const { return ids_[a]; }
  bool composable(MorId g, MorId f) const { return dst_[f] == src_[g]; }
  /// Table lookup of g o f; empty when the entry is missing.
  std::optional<MorId> compose(MorId g, MorId f) const { return comp_[g * mor_names_.size() + f]; }

  std::optional<ObjId> find_object(std::string_view name) const;
  std::optional<MorId> find_morphism(std::string_view name) const;
  std::vector<MorId> hom(ObjId a, ObjId b) const;
  /// f has a two-sided inverse in the table.
  bool is_iso(MorId f) const;

  std::vector<MorphismDecl> morphism_decls() const;
  std::vector<std::pair<std::string, std::string>> identity_decls() const;
  std::vector<CompositionEntry> composition_decls() const;

  /// Copies with one table entry replaced; used for mutation sweeps.
  FinCategory with_composite(MorId g, MorId f, std::optional<MorId> result) const;
  FinCategory with_identity(ObjId a, std::optional<MorId> id) const;

  bool operator==(const FinCategory&) const = default;

 private:
  std::vector<std::string> objects_;
  std::vector<std::string> mor_names_;
  std::vector<ObjId> src_;
  std::vector<ObjId> dst_;
  std::vector<std::optional<MorId>> ids_;
  std::vector<std::optional<MorId>> comp_;
};

struct FunctorData {
  std::vector<ObjId> obj_map;
  std::vector<MorId> mor_map;

  bool operator==(const FunctorData&) const = default;
  auto operator<=>(const FunctorData&) const = default;
};

/// Components indexed by source-category object.
struct NatTransformData {
  std::vector<MorId> components;

  bool operator==(const NatTransformData&) const = default;
  auto operator<=>(const NatTransformData&) const = default;
};

LawReport validate_category(const FinCategory& c, const CheckOptions& opts = {});
LawReport check_functor(const FunctorData& f, const FinCategory& src, const FinCategory& dst,
                        const CheckOptions& opts = {});
LawReport check_natural(const NatTransformData& eta, const FunctorData& f, const FunctorData& g,
                        const FinCategory& src, const FinCategory& dst, const CheckOptions& opts = {});

FunctorData identity_functor(const FinCategory& c);
/// g o f
FunctorData compose_functors(const FunctorData& g, const FunctorData& f);
NatTransformData identity_transformation(const FunctorData& f, const FinCategory& src, const FinCategory& dst);

/// (beta . alpha)_X = beta_X o alpha_X for alpha: F => G, beta: G => H.
/// Throws NotComposable if component endpoints do not line up.
NatTransformData vertical_compose(const NatTransformData& beta, const NatTransformData& alpha, const FinCategory& dst);

/// Horizontal composite of alpha: F => G (src -> mid) and beta: F2 => G2
/// (mid -> dst): (beta * alpha)_X = beta_{G X} o F2(alpha_X).
NatTransformData horizontal_compose(const NatTransformData& beta, const FunctorData& f2,
                                    const NatTransformData& alpha, const FunctorData& g, const FinCategory& src,
                                    const FinCategory& dst);

struct EnumerationLimits {
  /// Refuse when |obj|^|obj| * |mor|^|mor| exceeds this many candidate maps.
  double max_candidates = 1e7;
};

/// A 2-cell of Hyp_2: a transformation between two enumerated endofunctors.
struct Cell {
  std::size_t source = 0;
  std::size_t target = 0;
  NatTransformData eta;

  bool operator==(const Cell&) const = default;
};

/// The 2-truncated hyper-symmetry category of a finite category:
/// endofunctors as objects, natural transformations as morphisms.
struct EndoCat {
  FinCategory base;
  std::vector<FunctorData> endofunctors;
  /// homs[i][j] lists all transformations endofunctors[i] => endofunctors[j].
  std::vector<std::vector<std::vector<NatTransformData>>> homs;

  std::optional<std::size_t> find_functor(const FunctorData& f) const;
  std::optional<std::size_t> find_cell(const Cell& c) const;
  std::size_t identity_functor_index() const;
  Cell identity_cell(std::size_t functor) const;
  std::size_t transformation_count() const;
};

EndoCat enumerate_hyp(const FinCategory& c, const EnumerationLimits& limits = {});

enum class CompositionKind { vertical, horizontal };

/// Composes two cells of Hyp_2. vertical needs alpha.target == beta.source;
/// horizontal always applies (beta * alpha : F2 o F => G2 o G).
Cell compose_nat(CompositionKind kind, const Cell& beta, const Cell& alpha, const EndoCat& hyp);

/// table[a][b] = index in homs[i][k] of homs[j][k][a] . homs[i][j][b]
std::vector<std::vector<std::size_t>> vertical_table(const EndoCat& hyp, std::size_t i, std::size_t j, std::size_t k);

/// Checks (beta' . beta) * (alpha' . alpha) = (beta' * alpha') . (beta * alpha)
/// over every composable quadruple.
LawReport check_interchange(const EndoCat& hyp, const CheckOptions& opts = {});

/// gamma: F => F. Passes iff gamma . beta = beta for every beta: G => F;
/// cross-validated against "gamma is the identity transformation".
LawReport check_stability(const NatTransformData& gamma, const FunctorData& f, const EndoCat& hyp,
                          const CheckOptions& opts = {});

struct FixedSubcategory {
  FinCategory strict;
  std::vector<ObjId> strict_objects;
  std::vector<MorId> strict_morphisms;
  /// Objects with F(A) isomorphic to A but F(A) != A.
  std::vector<ObjId> iso_fixed_objects;
  LawReport report;
};

FixedSubcategory fixed_subcategory(const FunctorData& f, const FinCategory& c, const CheckOptions& opts = {});

/// B : C1 x C2 -> D with pairs encoded as i1 * |C2| + i2.
struct BifunctorData {
  std::vector<ObjId> obj_map;
  std::vector<MorId> mor_map;

  ObjId obj(ObjId a, ObjId b, const FinCategory& c2) const { return obj_map[a * c2.object_count() + b]; }
  MorId mor(MorId f, MorId g, const FinCategory& c2) const { return mor_map[f * c2.morphism_count() + g]; }
};

LawReport check_bifunctor(const BifunctorData& b, const FinCategory& c1, const FinCategory& c2, const FinCategory& d,
                          const CheckOptions& opts = {});

FinCategory product_category(const FinCategory& c1, const FinCategory& c2);
BifunctorData product_bifunctor(const FinCategory& c1, const FinCategory& c2);
BifunctorData projection_bifunctor(const FinCategory& c1, const FinCategory& c2);

struct IsoLift {
  std::optional<std::pair<MorId, MorId>> found;
  /// Pairs examined, in search order (the exhaustion certificate when none found).
  std::vector<std::pair<MorId, MorId>> tried;
};

/// Searches all (f, g) for B(f, g) an isomorphism with the endpoints of h.
/// Throws NotIso if h is not invertible in d.
IsoLift iso_lift(const BifunctorData& b, const FinCategory& c1, const FinCategory& c2, const FinCategory& d, MorId h);

/// A group acting on a category by automorphisms, one functor per element.
struct GroupActionOnCat {
  symgrp::GroupPtr group;
  std::vector<FunctorData> functors;
};

LawReport validate_cat_action(const GroupActionOnCat& act, const FinCategory& c, const CheckOptions& opts = {});
LawReport check_equivariant_functor(const FunctorData& f, const GroupActionOnCat& act, const FinCategory& c,
                                    const CheckOptions& opts = {});

/// Small named categories used throughout the tests and fixtures.
namespace catalog {
FinCategory terminal();
/// a -> b
FinCategory arrow();
/// One object with End = Z2.
FinCategory bz2();
/// a ==> b with two parallel arrows u, v.
FinCategory parallel_pair();
/// x <-> y, mutually inverse u, v.
FinCategory iso_pair();
FinCategory discrete(std::size_t n);
/// BZ2 endofunctor sending s to e.
FunctorData bz2_collapse();
/// Z2 acting on the parallel pair by swapping u and v.
GroupActionOnCat parallel_swap_action();
}  // namespace catalog

}  // namespace symcat::fincat
