#include "symcat/topo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "symcat/error.hpp"

namespace symcat::topo {

using symgrp::Elem;

std::size_t SimplicialComplex::vertex_count() const {
  std::size_t n = 0;
  for (const auto& s : simplices)
    for (auto v : s) n = std::max(n, v + 1);
  return n;
}

std::size_t SimplicialComplex::find(const Simplex& s) const {
  auto it = std::find(simplices.begin(), simplices.end(), s);
  return static_cast<std::size_t>(it - simplices.begin());
}

std::string simplex_name(const Simplex& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

namespace {

std::vector<Simplex> facets_of(const Simplex& s) {
  std::vector<Simplex> out;
  if (s.size() <= 1) return out;
  for (std::size_t skip = 0; skip < s.size(); ++skip) {
    Simplex f;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (i != skip) f.push_back(s[i]);
    out.push_back(std::move(f));
  }
  return out;
}

std::map<Simplex, std::size_t> index_of(const SimplicialComplex& k) {
  std::map<Simplex, std::size_t> idx;
  for (std::size_t i = 0; i < k.simplices.size(); ++i) idx.emplace(k.simplices[i], i);
  return idx;
}

}  // namespace

LawReport validate_complex(const SimplicialComplex& k, const CheckOptions& opts) {
  LawReport rep("validate_complex");
  std::map<Simplex, std::size_t> seen;
  for (std::size_t i = 0; i < k.simplices.size(); ++i) {
    const auto& s = k.simplices[i];
    require(!s.empty(), ErrorKind::MalformedDocument, "empty simplex at position " + std::to_string(i));
    rep.add_case();
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
      rep.violate("sorted", {simplex_name(s)}, "vertex tuple must be strictly increasing");
    if (s.size() - 1 > kMaxDim)
      rep.violate("dimension", {simplex_name(s)}, "dimension " + std::to_string(s.size() - 1) + " exceeds 3");
    if (!seen.emplace(s, i).second) rep.violate("duplicate", {simplex_name(s)});
  }
  for (const auto& s : k.simplices)
    for (const auto& f : facets_of(s))
      if (!seen.count(f)) rep.violate("face_closure", {simplex_name(s), simplex_name(f)}, "missing face");
  rep.finalize(opts);
  return rep;
}

LawReport validate_filtration(const Filtration& f, const CheckOptions& opts) {
  require(f.values.size() == f.complex.simplices.size(), ErrorKind::MalformedDocument,
          "filtration has " + std::to_string(f.values.size()) + " values for " +
              std::to_string(f.complex.simplices.size()) + " simplices");
  LawReport rep = validate_complex(f.complex, opts);
  rep.check = "validate_filtration";
  auto idx = index_of(f.complex);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const auto& s = f.complex.simplices[i];
    if (!std::isfinite(f.values[i])) {
      rep.violate("finite", {simplex_name(s)}, fmt_real(f.values[i]));
      continue;
    }
    for (const auto& face : facets_of(s)) {
      auto it = idx.find(face);
      if (it == idx.end()) continue;
      if (!(f.values[it->second] <= f.values[i]))
        rep.violate("monotone", {simplex_name(s), simplex_name(face)},
                    "face value " + fmt_real(f.values[it->second]) + " > " + fmt_real(f.values[i]));
    }
  }
  rep.finalize(opts);
  return rep;
}

std::vector<Bar> PersistenceDiagram::in_dim(std::size_t dim) const {
  std::vector<Bar> out;
  for (const auto& b : bars)
    if (b.dim == dim) out.push_back(b);
  return out;
}

std::string PersistenceDiagram::describe() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    if (i) os << ", ";
    os << "H" << bars[i].dim << "(" << fmt_real(bars[i].birth) << ","
       << (std::isinf(bars[i].death) ? std::string("inf") : fmt_real(bars[i].death)) << ")";
  }
  os << "}";
  return os.str();
}

PersistenceDiagram persistence(const Filtration& f) {
  const auto v = validate_filtration(f);
  require(v.passed(), ErrorKind::MalformedDocument,
          "invalid filtration: " + (v.violations.empty() ? std::string("?") : v.violations.front().law));
  const auto& sx = f.complex.simplices;
  const std::size_t n = sx.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (f.values[a] != f.values[b]) return f.values[a] < f.values[b];
    if (sx[a].size() != sx[b].size()) return sx[a].size() < sx[b].size();
    return sx[a] < sx[b];
  });
  std::map<Simplex, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos.emplace(sx[order[i]], i);

  // Columns hold sorted row positions; addition is symmetric difference.
  std::vector<std::vector<std::size_t>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& face : facets_of(sx[order[j]])) cols[j].push_back(pos.at(face));
    std::sort(cols[j].begin(), cols[j].end());
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> low_owner(n, kNone);
  std::vector<bool> paired(n, false);
  PersistenceDiagram out;
  for (std::size_t j = 0; j < n; ++j) {
    auto& c = cols[j];
    while (!c.empty() && low_owner[c.back()] != kNone) {
      const auto& other = cols[low_owner[c.back()]];
      std::vector<std::size_t> sum;
      std::set_symmetric_difference(c.begin(), c.end(), other.begin(), other.end(), std::back_inserter(sum));
      c.swap(sum);
    }
    if (c.empty()) continue;
    const std::size_t i = c.back();
    low_owner[i] = j;
    paired[i] = paired[j] = true;
    const double birth = f.values[order[i]], death = f.values[order[j]];
    if (birth < death) out.bars.push_back({sx[order[i]].size() - 1, birth, death});
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!paired[i]) out.bars.push_back({sx[order[i]].size() - 1, f.values[order[i]], kInf});
  std::sort(out.bars.begin(), out.bars.end());
  return out;
}

namespace {

double linf(const Bar& a, const Bar& b) { return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death)); }
double to_diagonal(const Bar& a) { return (a.death - a.birth) / 2.0; }

// Perfect matching in the usual augmented bipartite graph where each side
// gains one diagonal copy per point of the other side.
bool feasible(const std::vector<Bar>& a, const std::vector<Bar>& b, double eps) {
  const std::size_t n = a.size(), m = b.size(), sz = n + m;
  std::vector<std::vector<std::size_t>> adj(sz);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      if (linf(a[i], b[j]) <= eps) adj[i].push_back(j);
    if (to_diagonal(a[i]) <= eps) adj[i].push_back(m + i);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (to_diagonal(b[j]) <= eps) adj[n + j].push_back(j);
    for (std::size_t i = 0; i < n; ++i) adj[n + j].push_back(m + i);
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match_right(sz, kNone);
  std::vector<char> visited;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (auto r : adj[u]) {
      if (visited[r]) continue;
      visited[r] = 1;
      if (match_right[r] == kNone || augment(match_right[r])) {
        match_right[r] = u;
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < sz; ++u) {
    visited.assign(sz, 0);
    if (!augment(u)) return false;
  }
  return true;
}

}  // namespace

BottleneckResult bottleneck(const PersistenceDiagram& d1, const PersistenceDiagram& d2, std::size_t dim) {
  std::vector<Bar> a, b;
  std::vector<double> inf_a, inf_b;
  for (const auto& x : d1.in_dim(dim)) (std::isinf(x.death) ? inf_a.push_back(x.birth) : a.push_back(x));
  for (const auto& x : d2.in_dim(dim)) (std::isinf(x.death) ? inf_b.push_back(x.birth) : b.push_back(x));
  BottleneckResult res;
  if (inf_a.size() != inf_b.size()) {
    res.infinite_mismatch = true;
    res.distance = kInf;
    return res;
  }
  std::sort(inf_a.begin(), inf_a.end());
  std::sort(inf_b.begin(), inf_b.end());
  double inf_cost = 0.0;
  for (std::size_t i = 0; i < inf_a.size(); ++i) inf_cost = std::max(inf_cost, std::abs(inf_a[i] - inf_b[i]));

  std::vector<double> cand{0.0};
  for (const auto& x : a) cand.push_back(to_diagonal(x));
  for (const auto& y : b) cand.push_back(to_diagonal(y));
  for (const auto& x : a)
    for (const auto& y : b) cand.push_back(linf(x, y));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::size_t lo = 0, hi = cand.size() - 1;  // cand[hi] is always feasible
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(a, b, cand[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  res.distance = std::max(cand[lo], inf_cost);
  return res;
}

Simplex ComplexAction::apply(Elem g, const Simplex& s) const {
  Simplex out;
  out.reserve(s.size());
  for (auto v : s) {
    require(g < perms.size() && v < perms[g].size(), ErrorKind::DimensionMismatch,
            "vertex " + std::to_string(v) + " outside the action's domain");
    out.push_back(perms[g][v]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void require_shape(const ComplexAction& a) {
  require(a.group != nullptr, ErrorKind::MalformedDocument, "complex action has no group");
  require(a.perms.size() == a.group->order(), ErrorKind::MalformedDocument,
          "complex action needs one permutation per group element");
  for (const auto& p : a.perms)
    require(p.size() == a.perms.front().size(), ErrorKind::MalformedDocument, "permutations differ in length");
}

}  // namespace

LawReport validate_complex_action(const ComplexAction& a, const SimplicialComplex& k, const CheckOptions& opts) {
  require_shape(a);
  LawReport rep("validate_complex_action");
  const auto& G = *a.group;
  const std::size_t n = a.perms.empty() ? 0 : a.perms.front().size();
  require(k.vertex_count() <= n, ErrorKind::DimensionMismatch, "complex uses vertices outside the action's domain");
  for (Elem g = 0; g < G.order(); ++g) {
    std::vector<std::size_t> sorted = a.perms[g];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i)
      if (sorted[i] != i) {
        rep.violate("bijective", {G.name(g)});
        break;
      }
  }
  for (std::size_t v = 0; v < n; ++v) {
    rep.add_case();
    if (a.perms[G.identity()][v] != v) rep.violate("identity", {std::to_string(v)});
  }
  for (Elem g = 0; g < G.order(); ++g)
    for (Elem h = 0; h < G.order(); ++h)
      for (std::size_t v = 0; v < n; ++v) {
        rep.add_case();
        const auto hv = a.perms[h][v];
        if (hv >= n || a.perms[g][hv] != a.perms[G.mul(g, h)][v]) {
          rep.violate("homomorphism", {G.name(g), G.name(h), std::to_string(v)});
        }
      }
  if (rep.passed()) {
    auto idx = index_of(k);
    for (Elem g = 0; g < G.order(); ++g)
      for (const auto& s : k.simplices) {
        rep.add_case();
        if (!idx.count(a.apply(g, s))) rep.violate("simplicial", {G.name(g), simplex_name(s)});
      }
  }
  rep.finalize(opts);
  return rep;
}

LawReport check_equivariant_filtration(const ComplexAction& a, const Filtration& f, const CheckOptions& opts) {
  require_shape(a);
  require(f.values.size() == f.complex.simplices.size(), ErrorKind::MalformedDocument,
          "filtration values do not match simplices");
  LawReport rep("check_equivariant_filtration");
  const auto& G = *a.group;
  auto idx = index_of(f.complex);
  for (Elem g = 0; g < G.order(); ++g)
    for (std::size_t i = 0; i < f.complex.simplices.size(); ++i) {
      const auto& s = f.complex.simplices[i];
      const auto gs = a.apply(g, s);
      auto it = idx.find(gs);
      if (it == idx.end())
        fail(ErrorKind::ActionNotSimplicial,
             G.name(g) + " maps " + simplex_name(s) + " to " + simplex_name(gs) + ", which is not in the complex");
      rep.add_case();
      const double vs = f.values[i], vgs = f.values[it->second];
      rep.track_max("max_value_gap", std::abs(vgs - vs));
      if (vgs != vs)
        rep.violate("value_invariance", {G.name(g), simplex_name(s)},
                    "value(g s) = " + fmt_real(vgs) + ", value(s) = " + fmt_real(vs));
    }
  rep.finalize(opts);
  return rep;
}

LawReport diagram_invariance(const ComplexAction& a, const Filtration& f, const CheckOptions& opts) {
  const auto filt = check_equivariant_filtration(a, f);
  LawReport rep("diagram_invariance");
  const auto& G = *a.group;
  const auto base = persistence(f);
  auto idx = index_of(f.complex);
  for (Elem g = 0; g < G.order(); ++g) {
    Filtration pulled = f;
    for (std::size_t i = 0; i < f.complex.simplices.size(); ++i)
      pulled.values[i] = f.values[idx.at(a.apply(g, f.complex.simplices[i]))];
    const auto d = persistence(pulled);
    rep.add_case();
    if (d != base) {
      rep.violate("diagram_equal", {G.name(g)}, d.describe() + " vs " + base.describe());
      if (filt.passed()) rep.violate("invariant_diagram", {G.name(g)}, "equivariant filtration with a changed diagram");
    }
  }
  rep.metrics["filtration_equivariant"] = filt.passed() ? 1.0 : 0.0;
  if (!filt.passed() && rep.passed())
    rep.note("diagrams agree although the filtration is not equivariant");
  rep.finalize(opts);
  return rep;
}

double ph_loss(const PersistenceDiagram& d, PhLossMode mode, const PersistenceDiagram* ref) {
  if (mode == PhLossMode::total_persistence) {
    double total = 0.0;
    for (const auto& b : d.bars)
      if (!std::isinf(b.death)) total += b.death - b.birth;
    return total;
  }
  require(ref != nullptr, ErrorKind::UsageError, "bottleneck_to needs a reference diagram");
  std::set<std::size_t> dims;
  for (const auto& b : d.bars) dims.insert(b.dim);
  for (const auto& b : ref->bars) dims.insert(b.dim);
  double total = 0.0;
  for (auto k : dims) total += bottleneck(d, *ref, k).distance;
  return total;
}

PersistenceDiagram sublevel_persistence_1d(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    require(std::isfinite(values[i]), ErrorKind::NonFinite, "value at index " + std::to_string(i) + " is not finite");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  // Root of each component stores the index of its oldest vertex.
  std::vector<std::size_t> parent(n), oldest(n);
  std::vector<bool> added(n, false);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto elder = [&](std::size_t x, std::size_t y) {
    return values[x] < values[y] || (values[x] == values[y] && x < y);
  };
  PersistenceDiagram out;
  for (auto i : order) {
    parent[i] = i;
    oldest[i] = i;
    added[i] = true;
    for (std::size_t nb : {i - 1, i + 1}) {
      if (nb >= n || !added[nb]) continue;  // i - 1 wraps for i == 0
      auto ri = root(i), rn = root(nb);
      if (ri == rn) continue;
      auto keep = elder(oldest[ri], oldest[rn]) ? ri : rn;
      auto drop = keep == ri ? rn : ri;
      const double birth = values[oldest[drop]];
      if (birth < values[i]) out.bars.push_back({0, birth, values[i]});
      parent[drop] = keep;
    }
  }
  if (n > 0) out.bars.push_back({0, values[order.front()], kInf});
  std::sort(out.bars.begin(), out.bars.end());
  return out;
}

}  // namespace symcat::topo
