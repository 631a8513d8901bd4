#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "symcat/fincat.hpp"
#include "symcat/symgrp.hpp"

namespace symcat::enriched {

using symgrp::Elem;
using symgrp::GroupPtr;
using symgrp::Representation;

/// Rounding used when comparing orbit elements in canonical_representative.
inline constexpr int kRoundDecimals = 12;
inline constexpr std::size_t kDefaultSamples = 100;

/// A group acting on one object of a finite category through automorphisms:
/// g is sent to the endomorphism `automorphisms[g]` of `object`.
struct CategoricalRep {
  std::shared_ptr<const fincat::FinCategory> category;
  fincat::ObjId object = 0;
  GroupPtr group;
  std::vector<fincat::MorId> automorphisms;
};

LawReport validate_categorical_rep(const CategoricalRep& r, const CheckOptions& opts = {});

/// (X, rho) with X either R^n or an object of a finite category.
struct EnrichedObject {
  std::variant<Representation, CategoricalRep> carrier;

  bool linear() const { return carrier.index() == 0; }
  const GroupPtr& group() const;
};

LawReport validate_enriched_object(const EnrichedObject& x, const CheckOptions& opts = {});

/// The map is a matrix for linear carriers and a morphism id otherwise.
struct EnrichedMorphism {
  EnrichedObject source;
  EnrichedObject target;
  std::variant<Matrix, fincat::MorId> map;
};

/// Checks sigma(g) f = f rho(g) for every g. Reports metric "max_residual"
/// (linear carriers) with one violation per failing g.
LawReport check_enriched_morphism(const EnrichedMorphism& f, const Tolerances& tol = {},
                                  const CheckOptions& opts = {});

using VectorMap = std::function<Vector(const Vector&)>;

struct SampleOptions {
  std::size_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
};

/// Max over sampled theta and all g of ||U(rho(g) theta) - rho(g) U(theta)||_inf.
LawReport check_update_invariance(const VectorMap& u, const Representation& r, const SampleOptions& s,
                                  double tol, const CheckOptions& opts = {});

/// Lexicographically least rho(g) x, comparing coordinates rounded to
/// kRoundDecimals; ties go to the smallest group index. The returned vector
/// is the unrounded rho(g) x.
Vector canonical_representative(const Representation& r, const Vector& x);

/// Checks S(rho(g) x) = S(x) within `tol` (use 0 for exact comparison).
LawReport check_reduction_optimality(const VectorMap& s_map, const Representation& r, const SampleOptions& s,
                                     double tol = Tolerances{}.alg, const CheckOptions& opts = {});

struct RegularizerReport {
  LawReport commutation;  // R(rho(g) x) = rho(g) R(x)
  LawReport projection;   // R(R(x)) = R(x)

  bool passed() const { return commutation.passed() && projection.passed(); }
};

RegularizerReport check_regularizer(const VectorMap& r_map, const Representation& r, const SampleOptions& s,
                                    double tol = Tolerances{}.alg, const CheckOptions& opts = {});

/// Builds one of the named maps "reynolds", "scale:c", "offset:v1,v2,...",
/// "canonical". Offsets must have the representation's dimension.
VectorMap builtin_map(const std::string& spec, const Representation& r);

/// Deterministic Gaussian sample k of dimension n.
Vector sample_vector(std::uint64_t seed, std::size_t k, std::size_t n);

}  // namespace symcat::enriched
