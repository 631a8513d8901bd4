#pragma once

// Random fixtures for property tests.

#include <algorithm>
#include <numeric>
#include <vector>

#include "symcat/rng.hpp"
#include "symcat/symgrp.hpp"

namespace gen {

using symcat::CounterRng;
using symcat::Matrix;
using symcat::Vector;
using symcat::symgrp::Elem;
using symcat::symgrp::GroupPtr;
using symcat::symgrp::Representation;
using symcat::symgrp::SetAction;

inline std::vector<std::vector<Elem>> subgroups(const symcat::symgrp::FinGroup& g) {
  std::vector<std::vector<Elem>> out;
  const std::size_t n = g.order();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Elem> h;
    for (Elem x = 0; x < n; ++x) {
      if (mask >> x & 1) h.push_back(x);
    }
    bool closed = std::find(h.begin(), h.end(), g.identity()) != h.end();
    for (Elem a : h) {
      for (Elem b : h) closed = closed && (mask >> g.mul(a, b) & 1);
    }
    if (closed) out.push_back(h);
  }
  return out;
}

/// Random action on at most `max_size` points: a disjoint union of coset
/// actions G/H, relabelled by a random permutation.
inline SetAction random_action(const GroupPtr& g, CounterRng& rng, std::size_t max_size) {
  const auto subs = subgroups(*g);
  std::vector<std::vector<std::size_t>> table(g->order());
  std::size_t size = 0;
  while (true) {
    const auto& h = subs[rng.next_below(subs.size())];
    const std::size_t cosets = g->order() / h.size();
    if (size + cosets > max_size) break;
    // Coset representatives and membership.
    std::vector<std::size_t> coset_of(g->order(), cosets);
    std::size_t next = 0;
    for (Elem x = 0; x < g->order(); ++x) {
      if (coset_of[x] != cosets) continue;
      for (Elem y : h) coset_of[g->mul(x, y)] = next;
      ++next;
    }
    std::vector<Elem> rep(cosets);
    for (Elem x = g->order(); x-- > 0;) rep[coset_of[x]] = x;
    for (Elem a = 0; a < g->order(); ++a) {
      for (std::size_t c = 0; c < cosets; ++c) table[a].push_back(size + coset_of[g->mul(a, rep[c])]);
    }
    size += cosets;
    if (rng.next_uniform() < 0.3) break;
  }
  if (size == 0) return symcat::symgrp::trivial_action(g, 0);
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = size; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);
  std::vector<std::vector<std::size_t>> relabelled(g->order(), std::vector<std::size_t>(size));
  for (Elem a = 0; a < g->order(); ++a) {
    for (std::size_t i = 0; i < size; ++i) relabelled[a][perm[i]] = perm[table[a][i]];
  }
  return SetAction(g, size, std::move(relabelled));
}

inline Vector gaussian(CounterRng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.next_normal();
  return v;
}

inline Matrix gaussian(CounterRng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.next_normal();
  }
  return m;
}

/// S3's two-dimensional standard representation on the sum-zero plane,
/// in the integer basis (1,-1,0), (0,1,-1).
inline Representation s3_standard() {
  const GroupPtr g = symcat::symgrp::symmetric3();
  const auto perm = symcat::symgrp::permutation_representation(
      SetAction(g, 3, [&] {
        std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(3));
        for (Elem a = 0; a < 6; ++a) {
          for (std::size_t i = 0; i < 3; ++i) t[a][i] = static_cast<std::size_t>(g->name(a) == "e" ? i : g->name(a)[i] - '0');
        }
        return t;
      }()));
  Matrix basis(3, 2);
  basis << 1, 0, -1, 1, 0, -1;
  std::vector<Matrix> mats;
  for (Elem a = 0; a < 6; ++a) {
    const Matrix img = perm.rho(a) * basis;
    Matrix coords(2, 2);
    for (int k = 0; k < 2; ++k) {
      coords(0, k) = img(0, k);
      coords(1, k) = -img(2, k);
    }
    mats.push_back(coords);
  }
  return Representation(g, 2, std::move(mats));
}

inline Representation s3_sign() {
  const GroupPtr g = symcat::symgrp::symmetric3();
  std::vector<Matrix> mats;
  for (Elem a = 0; a < 6; ++a) {
    const std::string& n = g->name(a);
    const bool odd = n == "021" || n == "102" || n == "210";
    mats.push_back(Matrix::Constant(1, 1, odd ? -1.0 : 1.0));
  }
  return Representation(g, 1, std::move(mats));
}

/// C4 acting on R^2 by quarter turns.
inline Representation c4_rotation() {
  const GroupPtr g = symcat::symgrp::cyclic(4);
  Matrix r(2, 2);
  r << 0, -1, 1, 0;
  std::vector<Matrix> mats{Matrix::Identity(2, 2)};
  for (int k = 1; k < 4; ++k) mats.push_back(r * mats.back());
  return Representation(g, 2, std::move(mats));
}

/// Block-diagonal sum of two representations of one group.
inline Representation oplus(const Representation& a, const Representation& b) {
  std::vector<Matrix> mats;
  const auto da = static_cast<Eigen::Index>(a.dim());
  const auto db = static_cast<Eigen::Index>(b.dim());
  for (Elem g = 0; g < a.group()->order(); ++g) {
    Matrix m = Matrix::Zero(da + db, da + db);
    m.topLeftCorner(da, da) = a.rho(g);
    m.bottomRightCorner(db, db) = b.rho(g);
    mats.push_back(m);
  }
  return Representation(a.group(), a.dim() + b.dim(), std::move(mats));
}

/// The S3 permutation representation on 3 points.
inline SetAction s3_on_three() {
  const GroupPtr g = symcat::symgrp::symmetric3();
  std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(3));
  for (Elem a = 0; a < 6; ++a) {
    for (std::size_t i = 0; i < 3; ++i) t[a][i] = static_cast<std::size_t>(g->name(a) == "e" ? i : g->name(a)[i] - '0');
  }
  return SetAction(g, 3, std::move(t));
}

}  // namespace gen
