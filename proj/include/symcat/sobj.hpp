#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "symcat/fincat.hpp"
#include "symcat/report.hpp"

namespace symcat::sobj {

/// Levels 0..n as finite sets {0..size-1} with function tables.
///   face[k][i]  : level k -> level k-1, 1 <= k <= n, 0 <= i <= k
///   degen[k][i] : level k-1 -> level k, 1 <= k <= n, 0 <= i <= k-1
/// face[0] and degen[0] are empty.
struct SimplicialObjectData {
  std::vector<std::size_t> level_sizes;
  std::vector<std::vector<std::vector<std::size_t>>> face;
  std::vector<std::vector<std::vector<std::size_t>>> degen;
  /// Optional element labels per level, used in witnesses when present.
  std::vector<std::vector<std::string>> labels;

  std::size_t top() const { return level_sizes.empty() ? 0 : level_sizes.size() - 1; }
  std::string label(std::size_t k, std::size_t x) const;
};

/// Throws MalformedDocument unless every table has the right count, length
/// and range.
void require_shape(const SimplicialObjectData& m);

/// Checks dd (d_i d_j = d_{j-1} d_i, i < j), ds (the three-way case split)
/// and ss (s_i s_j = s_{j+1} s_i, i <= j). Witness: {identity, k, i, j, element}
/// where k is the level the element lives on.
LawReport validate_simplicial(const SimplicialObjectData& m, const CheckOptions& opts = {});

/// Every level a single point.
SimplicialObjectData constant_object(std::size_t n);

/// Nerve truncated at level n: level k holds composable chains
/// x0 -f1-> x1 -> ... -fk-> xk, listed lexicographically in (f1, .., fk).
/// d_0 drops f1, d_k drops fk, d_i composes f_{i+1} f_i; s_i inserts id_{x_i}.
SimplicialObjectData nerve(const fincat::FinCategory& c, std::size_t n = 2);

/// One self-map per level.
using LevelMaps = std::vector<std::vector<std::size_t>>;

LevelMaps identity_family(const SimplicialObjectData& m);

/// The levelwise map of nerve(c, n) induced by a functor c -> c.
LevelMaps nerve_map(const fincat::FinCategory& c, const fincat::FunctorData& f, std::size_t n = 2);

/// Laws "face" (F d_i = d_i F, witness {k, i, element of level k}) and
/// "degeneracy" (F s_i = s_i F, witness {k, i, element of level k-1}).
LawReport check_simplicial_invariance(const LevelMaps& f, const SimplicialObjectData& m, const CheckOptions& opts = {});

/// Least level k with scores[k] <= threshold; nullopt if none. Throws
/// LengthMismatch when scores and levels differ in count, NonFinite on a
/// non-finite score or threshold.
std::optional<std::size_t> adapt_level(const SimplicialObjectData& m, const std::vector<double>& scores,
                                       double threshold);

}  // namespace symcat::sobj
