#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "symcat/report.hpp"
#include "symcat/symgrp.hpp"

namespace symcat::topo {

using Simplex = std::vector<std::size_t>;  // sorted vertex ids

inline constexpr std::size_t kMaxDim = 3;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimplicialComplex {
  std::vector<Simplex> simplices;

  std::size_t vertex_count() const;  // 1 + largest vertex id
  /// Position of `s` in `simplices`, or simplices.size() when absent.
  std::size_t find(const Simplex& s) const;
};

struct Filtration {
  SimplicialComplex complex;
  std::vector<double> values;  // one per simplex
};

std::string simplex_name(const Simplex& s);

/// Laws: sorted, duplicate, dimension, face_closure. Throws MalformedDocument
/// for an empty simplex.
LawReport validate_complex(const SimplicialComplex& k, const CheckOptions& opts = {});
/// Complex laws plus finite and monotone (value(face) <= value(coface)).
LawReport validate_filtration(const Filtration& f, const CheckOptions& opts = {});

struct Bar {
  std::size_t dim = 0;
  double birth = 0.0;
  double death = kInf;

  bool operator==(const Bar&) const = default;
  auto operator<=>(const Bar&) const = default;
};

/// Bars sorted by (dim, birth, death). Zero-length bars are never stored.
struct PersistenceDiagram {
  std::vector<Bar> bars;

  std::vector<Bar> in_dim(std::size_t dim) const;
  std::string describe() const;
  bool operator==(const PersistenceDiagram&) const = default;
};

/// Column reduction over GF(2) with simplices ordered by (value, dim, vertex tuple).
PersistenceDiagram persistence(const Filtration& f);

struct BottleneckResult {
  double distance = 0.0;
  bool infinite_mismatch = false;  // different numbers of infinite bars
};

/// Exact bottleneck distance in one dimension. Finite bars match under the
/// L-infinity cost or go to the diagonal at (death - birth) / 2; infinite bars
/// are matched in birth order at |birth - birth'|.
BottleneckResult bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, std::size_t dim);

/// Vertex permutation per group element.
struct ComplexAction {
  symgrp::GroupPtr group;
  std::vector<std::vector<std::size_t>> perms;

  Simplex apply(symgrp::Elem g, const Simplex& s) const;
};

/// Laws: bijective, identity, homomorphism, simplicial (images stay in `k`).
LawReport validate_complex_action(const ComplexAction& a, const SimplicialComplex& k, const CheckOptions& opts = {});

/// value(g s) == value(s) exactly for all g and s. Throws ActionNotSimplicial
/// when some g s is not a simplex of the complex.
LawReport check_equivariant_filtration(const ComplexAction& a, const Filtration& f, const CheckOptions& opts = {});

/// Compares persistence of every pullback s -> value(g s) with the original
/// diagram. Also records whether the filtration itself is equivariant and
/// flags law "invariant_diagram" if it is but some diagram differs.
LawReport diagram_invariance(const ComplexAction& a, const Filtration& f, const CheckOptions& opts = {});

enum class PhLossMode { total_persistence, bottleneck_to };

/// total_persistence: sum of death - birth over finite bars.
/// bottleneck_to: sum over dimensions of bottleneck(d, ref, dim); infinite
/// when infinite bar counts differ in some dimension.
double ph_loss(const PersistenceDiagram& d, PhLossMode mode, const PersistenceDiagram* ref = nullptr);

/// H0 diagram of the lower-star filtration on the path graph. Components
/// merge by the elder rule: the lower birth survives, ties go to the earlier
/// index.
PersistenceDiagram sublevel_persistence_1d(const std::vector<double>& values);

}  // namespace symcat::topo
