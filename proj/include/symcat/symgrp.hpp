#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symcat/linalg.hpp"
#include "symcat/report.hpp"

namespace symcat::symgrp {

using Elem = std::size_t;

/// A finite group given extensionally by its multiplication table.
/// Construction only rejects malformed tables (wrong shape, out-of-range
/// ids); the group axioms are checked by validate_group.
class FinGroup {
 public:
  FinGroup() = default;
  FinGroup(std::vector<std::string> names, std::vector<std::vector<Elem>> table, Elem identity,
           std::vector<Elem> inverse = {});

  std::size_t order() const { return names_.size(); }
  Elem mul(Elem a, Elem b) const { return table_[a][b]; }
  Elem identity() const { return identity_; }
  Elem inverse(Elem g) const { return inverse_[g]; }
  const std::string& name(Elem g) const { return names_[g]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<Elem>>& table() const { return table_; }
  const std::vector<Elem>& inverses() const { return inverse_; }
  std::optional<Elem> find(std::string_view name) const;

  bool operator==(const FinGroup&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Elem>> table_;
  Elem identity_ = 0;
  std::vector<Elem> inverse_;
};

using GroupPtr = std::shared_ptr<const FinGroup>;

bool same_group(const GroupPtr& a, const GroupPtr& b);

GroupPtr trivial_group();
/// Z/n with elements "e", "r1", .., "r{n-1}"; r_k is addition of k.
GroupPtr cyclic(std::size_t n);
/// S3 as permutations of {0,1,2}, named in one-line notation ("e", "021",
/// ...), composed as (ab)(i) = a(b(i)).
GroupPtr symmetric3();

LawReport validate_group(const FinGroup& g, const CheckOptions& opts = {});

/// Action of a group on {0..size-1}: table[g][i] = g . i
class SetAction {
 public:
  SetAction() = default;
  SetAction(GroupPtr group, std::size_t size, std::vector<std::vector<std::size_t>> table);

  const GroupPtr& group() const { return group_; }
  std::size_t size() const { return size_; }
  std::size_t act(Elem g, std::size_t i) const { return table_[g][i]; }
  const std::vector<std::vector<std::size_t>>& table() const { return table_; }

 private:
  GroupPtr group_;
  std::size_t size_ = 0;
  std::vector<std::vector<std::size_t>> table_;
};

LawReport validate_action(const SetAction& a, const CheckOptions& opts = {});

SetAction trivial_action(GroupPtr group, std::size_t size);
/// Cyclic group Z/n rotating n points: r_k . i = i + k mod n.
SetAction rotation_action(GroupPtr cyclic_group);
/// Diagonal action on index pairs (i, j) encoded as i * in.size() + j.
SetAction pair_action(const SetAction& out, const SetAction& in);

struct OrbitPartition {
  std::size_t size = 0;
  std::vector<std::size_t> orbit_of;
  std::vector<std::vector<std::size_t>> members;

  std::size_t count() const { return members.size(); }
};

/// Orbits by union-find over all (i, g.i) edges. Orbits are numbered by
/// their least member.
OrbitPartition orbits(const SetAction& a);

/// (1/|G|) sum_g |Fix(g)| in exact integer arithmetic.
/// Throws NonIntegralCount if the sum is not divisible by |G|.
std::uint64_t burnside(const SetAction& a);

/// Real matrix representation, one dim x dim matrix per group element.
class Representation {
 public:
  Representation() = default;
  Representation(GroupPtr group, std::size_t dim, std::vector<Matrix> matrices);

  const GroupPtr& group() const { return group_; }
  std::size_t dim() const { return dim_; }
  const Matrix& rho(Elem g) const { return mats_[g]; }
  const std::vector<Matrix>& matrices() const { return mats_; }

  bool is_permutation() const;
  bool is_orthogonal(double tol) const;

 private:
  GroupPtr group_;
  std::size_t dim_ = 0;
  std::vector<Matrix> mats_;
};

/// rho(g) e_i = e_{g.i}
Representation permutation_representation(const SetAction& a);
Representation trivial_representation(GroupPtr group, std::size_t dim);
Representation regular_representation(GroupPtr group);
/// Z2 acting on R^2 by swapping coordinates.
Representation swap_representation();
/// Block-diagonal direct sum of copies of `r`.
Representation direct_sum(const Representation& r, std::size_t copies);

LawReport validate_representation(const Representation& r, const Tolerances& tol = {},
                                  const CheckOptions& opts = {});

Vector reynolds_vector(const Representation& r, const Vector& v);
/// (1/|G|) sum_g rho_out(g)^-1 W rho_in(g); rho(g)^-1 is taken as rho(g^-1).
Matrix reynolds_map(const Representation& r_in, const Representation& r_out, const Matrix& w);

/// Basis of the intertwiner space {W : rho_out(g) W = W rho_in(g) for all g},
/// as the nullspace of the stacked constraints on row-major vec(W).
std::vector<Matrix> intertwiner_basis(const Representation& r_in, const Representation& r_out,
                                      const Tolerances& tol = {});
/// The stacked constraint matrix used by intertwiner_basis.
Matrix intertwiner_constraints(const Representation& r_in, const Representation& r_out);

/// Range of the Reynolds projector.
std::vector<Vector> fixed_subspace(const Representation& r, const Tolerances& tol = {});

/// min over g of ||x - rho(g) y||_2
double orbit_distance(const Representation& r, const Vector& x, const Vector& y);

/// Largest equivariance residual max_g ||rho_out(g) W - W rho_in(g)||_inf.
double intertwiner_residual(const Representation& r_in, const Representation& r_out, const Matrix& w);

}  // namespace symcat::symgrp
