#include "symcat/symgrp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "symcat/error.hpp"

namespace symcat::symgrp {

FinGroup::FinGroup(std::vector<std::string> names, std::vector<std::vector<Elem>> table, Elem identity,
                   std::vector<Elem> inverse)
    : names_(std::move(names)), table_(std::move(table)), identity_(identity), inverse_(std::move(inverse)) {
  const std::size_t n = names_.size();
  require(n > 0, ErrorKind::MalformedDocument, "group has no elements");
  require(table_.size() == n, ErrorKind::MalformedDocument, "multiplication table must have one row per element");
  for (const auto& row : table_) {
    require(row.size() == n, ErrorKind::MalformedDocument, "multiplication table must be square");
    for (Elem x : row) require(x < n, ErrorKind::MalformedDocument, "multiplication table entry out of range");
  }
  require(identity_ < n, ErrorKind::MalformedDocument, "identity out of range");
  if (inverse_.empty()) {
    inverse_.resize(n);
    for (Elem g = 0; g < n; ++g) {
      inverse_[g] = g;
      for (Elem h = 0; h < n; ++h) {
        if (table_[g][h] == identity_) {
          inverse_[g] = h;
          break;
        }
      }
    }
  }
  require(inverse_.size() == n, ErrorKind::MalformedDocument, "inverse table must have one entry per element");
  for (Elem x : inverse_) require(x < n, ErrorKind::MalformedDocument, "inverse table entry out of range");
}

std::optional<Elem> FinGroup::find(std::string_view name) const {
  for (Elem g = 0; g < names_.size(); ++g) {
    if (names_[g] == name) return g;
  }
  return std::nullopt;
}

bool same_group(const GroupPtr& a, const GroupPtr& b) { return a == b || (a && b && *a == *b); }

GroupPtr trivial_group() { return cyclic(1); }

GroupPtr cyclic(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::vector<Elem>> table(n, std::vector<Elem>(n));
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(i == 0 ? "e" : "r" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return std::make_shared<const FinGroup>(std::move(names), std::move(table), 0);
}

GroupPtr symmetric3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::vector<std::string> names;
  for (const auto& q : perms) {
    names.push_back(q == std::array<int, 3>{0, 1, 2} ? "e"
                                                      : std::string{char('0' + q[0]), char('0' + q[1]), char('0' + q[2])});
  }
  std::vector<std::vector<Elem>> table(6, std::vector<Elem>(6));
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      table[a][b] = static_cast<Elem>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  }
  return std::make_shared<const FinGroup>(std::move(names), std::move(table), 0);
}

LawReport validate_group(const FinGroup& g, const CheckOptions& opts) {
  LawReport rep("validate_group");
  const std::size_t n = g.order();
  const auto& nm = g.names();

  for (Elem a = 0; a < n; ++a) {
    std::vector<bool> row_seen(n, false);
    std::vector<bool> col_seen(n, false);
    for (Elem b = 0; b < n; ++b) {
      rep.add_case();
      if (row_seen[g.mul(a, b)]) rep.violate("latin_row", {nm[a], nm[g.mul(a, b)]}, "row repeats a product");
      if (col_seen[g.mul(b, a)]) rep.violate("latin_column", {nm[a], nm[g.mul(b, a)]}, "column repeats a product");
      row_seen[g.mul(a, b)] = true;
      col_seen[g.mul(b, a)] = true;
    }
  }
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      for (Elem c = 0; c < n; ++c) {
        rep.add_case();
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) rep.violate("associativity", {nm[a], nm[b], nm[c]});
      }
    }
  }
  const Elem e = g.identity();
  for (Elem a = 0; a < n; ++a) {
    rep.add_case(2);
    if (g.mul(e, a) != a || g.mul(a, e) != a) rep.violate("identity", {nm[a]});
    if (g.mul(a, g.inverse(a)) != e || g.mul(g.inverse(a), a) != e) rep.violate("inverse", {nm[a], nm[g.inverse(a)]});
  }
  rep.finalize(opts);
  return rep;
}

SetAction::SetAction(GroupPtr group, std::size_t size, std::vector<std::vector<std::size_t>> table)
    : group_(std::move(group)), size_(size), table_(std::move(table)) {
  require(group_ != nullptr, ErrorKind::MalformedDocument, "action without a group");
  require(table_.size() == group_->order(), ErrorKind::MalformedDocument, "action table needs one row per group element");
  for (const auto& row : table_) {
    require(row.size() == size_, ErrorKind::MalformedDocument, "action row length must equal the set size");
    for (auto x : row) require(x < size_, ErrorKind::MalformedDocument, "action image out of range");
  }
}

LawReport validate_action(const SetAction& a, const CheckOptions& opts) {
  LawReport rep("validate_action");
  const FinGroup& g = *a.group();
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    rep.add_case();
    if (a.act(g.identity(), i) != i) rep.violate("identity", {std::to_string(i)});
  }
  for (Elem x = 0; x < g.order(); ++x) {
    std::vector<bool> hit(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      rep.add_case();
      if (hit[a.act(x, i)]) rep.violate("bijective", {g.name(x), std::to_string(a.act(x, i))}, "image repeated");
      hit[a.act(x, i)] = true;
    }
  }
  for (Elem x = 0; x < g.order(); ++x) {
    for (Elem y = 0; y < g.order(); ++y) {
      for (std::size_t i = 0; i < n; ++i) {
        rep.add_case();
        if (a.act(g.mul(x, y), i) != a.act(x, a.act(y, i))) {
          rep.violate("compatibility", {g.name(x), g.name(y), std::to_string(i)});
        }
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

SetAction trivial_action(GroupPtr group, std::size_t size) {
  std::vector<std::size_t> ident(size);
  std::iota(ident.begin(), ident.end(), 0);
  std::vector<std::vector<std::size_t>> table(group->order(), ident);
  return SetAction(std::move(group), size, std::move(table));
}

SetAction rotation_action(GroupPtr cyclic_group) {
  const std::size_t n = cyclic_group->order();
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) table[k][i] = (i + k) % n;
  }
  return SetAction(std::move(cyclic_group), n, std::move(table));
}

SetAction pair_action(const SetAction& out, const SetAction& in) {
  require(same_group(out.group(), in.group()), ErrorKind::GroupMismatch, "pair action needs one group");
  const std::size_t n = out.size() * in.size();
  std::vector<std::vector<std::size_t>> table(out.group()->order(), std::vector<std::size_t>(n));
  for (Elem g = 0; g < out.group()->order(); ++g) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < in.size(); ++j) table[g][i * in.size() + j] = out.act(g, i) * in.size() + in.act(g, j);
    }
  }
  return SetAction(out.group(), n, std::move(table));
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

OrbitPartition orbits(const SetAction& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (Elem g = 0; g < a.group()->order(); ++g) {
    for (std::size_t i = 0; i < n; ++i) {
      auto ri = find_root(parent, i);
      auto rj = find_root(parent, a.act(g, i));
      if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
  }
  OrbitPartition part;
  part.size = n;
  part.orbit_of.assign(n, 0);
  std::vector<std::size_t> index_of_root(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = find_root(parent, i);
    if (index_of_root[r] == n) {
      index_of_root[r] = part.members.size();
      part.members.emplace_back();
    }
    part.orbit_of[i] = index_of_root[r];
    part.members[index_of_root[r]].push_back(i);
  }
  return part;
}

std::uint64_t burnside(const SetAction& a) {
  std::uint64_t total = 0;
  for (Elem g = 0; g < a.group()->order(); ++g) {
    for (std::size_t i = 0; i < a.size(); ++i) total += a.act(g, i) == i ? 1 : 0;
  }
  const std::uint64_t order = a.group()->order();
  if (total % order != 0) {
    fail(ErrorKind::NonIntegralCount,
         "fixed-point total " + std::to_string(total) + " not divisible by |G| = " + std::to_string(order));
  }
  return total / order;
}

Representation::Representation(GroupPtr group, std::size_t dim, std::vector<Matrix> matrices)
    : group_(std::move(group)), dim_(dim), mats_(std::move(matrices)) {
  require(group_ != nullptr, ErrorKind::MalformedDocument, "representation without a group");
  require(mats_.size() == group_->order(), ErrorKind::MalformedDocument,
          "representation needs one matrix per group element");
  for (const auto& m : mats_) {
    require(static_cast<std::size_t>(m.rows()) == dim_ && static_cast<std::size_t>(m.cols()) == dim_,
            ErrorKind::MalformedDocument, "representation matrix has wrong shape");
  }
}

bool Representation::is_permutation() const {
  return std::all_of(mats_.begin(), mats_.end(), [](const Matrix& m) { return is_permutation_matrix(m); });
}

bool Representation::is_orthogonal(double tol) const {
  const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  return std::all_of(mats_.begin(), mats_.end(), [&](const Matrix& m) { return max_abs(m.transpose() * m - id) <= tol; });
}

Representation permutation_representation(const SetAction& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  std::vector<Matrix> mats;
  for (Elem g = 0; g < a.group()->order(); ++g) {
    Matrix p = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < a.size(); ++i) p(static_cast<Eigen::Index>(a.act(g, i)), static_cast<Eigen::Index>(i)) = 1.0;
    mats.push_back(std::move(p));
  }
  return Representation(a.group(), a.size(), std::move(mats));
}

Representation trivial_representation(GroupPtr group, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<Matrix> mats(group->order(), Matrix::Identity(n, n));
  return Representation(std::move(group), dim, std::move(mats));
}

Representation regular_representation(GroupPtr group) {
  const std::size_t n = group->order();
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (Elem g = 0; g < n; ++g) {
    for (Elem h = 0; h < n; ++h) table[g][h] = group->mul(g, h);
  }
  return permutation_representation(SetAction(std::move(group), n, std::move(table)));
}

Representation swap_representation() { return permutation_representation(rotation_action(cyclic(2))); }

Representation direct_sum(const Representation& r, std::size_t copies) {
  const auto d = static_cast<Eigen::Index>(r.dim());
  std::vector<Matrix> mats;
  for (const auto& m : r.matrices()) {
    Matrix big = Matrix::Zero(d * static_cast<Eigen::Index>(copies), d * static_cast<Eigen::Index>(copies));
    for (std::size_t c = 0; c < copies; ++c) big.block(d * static_cast<Eigen::Index>(c), d * static_cast<Eigen::Index>(c), d, d) = m;
    mats.push_back(std::move(big));
  }
  return Representation(r.group(), r.dim() * copies, std::move(mats));
}

LawReport validate_representation(const Representation& r, const Tolerances& tol, const CheckOptions& opts) {
  LawReport rep("validate_representation");
  const FinGroup& g = *r.group();
  const auto n = static_cast<Eigen::Index>(r.dim());
  double worst = 0.0;
  rep.add_case();
  if (r.rho(g.identity()) != Matrix::Identity(n, n)) rep.violate("identity", {g.name(g.identity())}, "rho(e) != I");
  for (Elem a = 0; a < g.order(); ++a) {
    rep.add_case();
    if (!all_finite(r.rho(a))) {
      rep.violate("finite", {g.name(a)});
      continue;
    }
    Eigen::JacobiSVD<Matrix> svd(r.rho(a));
    const auto& s = svd.singularValues();
    const bool invertible = n == 0 || (s(n - 1) > 0.0 && s(0) / s(n - 1) < 1e12);
    if (!invertible) rep.violate("invertible", {g.name(a)}, "singular or ill-conditioned");
  }
  for (Elem a = 0; a < g.order(); ++a) {
    for (Elem b = 0; b < g.order(); ++b) {
      rep.add_case();
      const double res = max_abs(r.rho(g.mul(a, b)) - r.rho(a) * r.rho(b));
      worst = std::max(worst, std::isnan(res) ? INFINITY : res);
      if (!(res <= tol.alg)) rep.violate("homomorphism", {g.name(a), g.name(b)}, "residual " + fmt_real(res));
    }
  }
  rep.metrics["max_residual"] = worst;
  rep.finalize(opts);
  return rep;
}

Vector reynolds_vector(const Representation& r, const Vector& v) {
  require(static_cast<std::size_t>(v.size()) == r.dim(), ErrorKind::DimensionMismatch, "vector length != representation dim");
  Vector acc = Vector::Zero(v.size());
  for (const auto& m : r.matrices()) acc += m * v;
  return acc / static_cast<double>(r.group()->order());
}

Matrix reynolds_map(const Representation& r_in, const Representation& r_out, const Matrix& w) {
  require(same_group(r_in.group(), r_out.group()), ErrorKind::GroupMismatch, "representations over different groups");
  require(static_cast<std::size_t>(w.rows()) == r_out.dim() && static_cast<std::size_t>(w.cols()) == r_in.dim(),
          ErrorKind::DimensionMismatch, "weight shape must be dim(out) x dim(in)");
  const FinGroup& g = *r_in.group();
  Matrix acc = Matrix::Zero(w.rows(), w.cols());
  for (Elem a = 0; a < g.order(); ++a) acc += r_out.rho(g.inverse(a)) * w * r_in.rho(a);
  return acc / static_cast<double>(g.order());
}

Matrix intertwiner_constraints(const Representation& r_in, const Representation& r_out) {
  require(same_group(r_in.group(), r_out.group()), ErrorKind::GroupMismatch, "representations over different groups");
  const auto n_in = static_cast<Eigen::Index>(r_in.dim());
  const auto n_out = static_cast<Eigen::Index>(r_out.dim());
  const auto order = static_cast<Eigen::Index>(r_in.group()->order());
  const Eigen::Index block = n_out * n_in;
  Matrix c = Matrix::Zero(order * block, block);
  for (Eigen::Index g = 0; g < order; ++g) {
    const Matrix& po = r_out.rho(static_cast<Elem>(g));
    const Matrix& pi = r_in.rho(static_cast<Elem>(g));
    for (Eigen::Index i = 0; i < n_out; ++i) {
      for (Eigen::Index j = 0; j < n_in; ++j) {
        const Eigen::Index row = g * block + i * n_in + j;
        for (Eigen::Index k = 0; k < n_out; ++k) c(row, k * n_in + j) += po(i, k);
        for (Eigen::Index k = 0; k < n_in; ++k) c(row, i * n_in + k) -= pi(k, j);
      }
    }
  }
  return c;
}

std::vector<Matrix> intertwiner_basis(const Representation& r_in, const Representation& r_out, const Tolerances& tol) {
  const Matrix ns = nullspace(intertwiner_constraints(r_in, r_out), tol.piv);
  const auto n_in = static_cast<Eigen::Index>(r_in.dim());
  const auto n_out = static_cast<Eigen::Index>(r_out.dim());
  std::vector<Matrix> basis;
  for (Eigen::Index c = 0; c < ns.cols(); ++c) {
    Matrix w(n_out, n_in);
    for (Eigen::Index i = 0; i < n_out; ++i) {
      for (Eigen::Index j = 0; j < n_in; ++j) w(i, j) = ns(i * n_in + j, c);
    }
    basis.push_back(std::move(w));
  }
  return basis;
}

std::vector<Vector> fixed_subspace(const Representation& r, const Tolerances& tol) {
  const auto n = static_cast<Eigen::Index>(r.dim());
  Matrix p = Matrix::Zero(n, n);
  for (const auto& m : r.matrices()) p += m;
  p /= static_cast<double>(r.group()->order());
  const Matrix cols = column_basis(p, tol.piv);
  std::vector<Vector> out;
  for (Eigen::Index c = 0; c < cols.cols(); ++c) out.emplace_back(cols.col(c));
  return out;
}

double orbit_distance(const Representation& r, const Vector& x, const Vector& y) {
  require(static_cast<std::size_t>(x.size()) == r.dim() && static_cast<std::size_t>(y.size()) == r.dim(),
          ErrorKind::DimensionMismatch, "vector length != representation dim");
  double best = INFINITY;
  for (const auto& m : r.matrices()) best = std::min(best, (x - m * y).norm());
  return best;
}

double intertwiner_residual(const Representation& r_in, const Representation& r_out, const Matrix& w) {
  double worst = 0.0;
  for (Elem g = 0; g < r_in.group()->order(); ++g) {
    worst = std::max(worst, max_abs(r_out.rho(g) * w - w * r_in.rho(g)));
  }
  return worst;
}

}  // namespace symcat::symgrp
