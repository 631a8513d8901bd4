#include "symcat/sobj.hpp"

#include <cmath>
#include <map>

#include "symcat/error.hpp"

namespace symcat::sobj {

std::string SimplicialObjectData::label(std::size_t k, std::size_t x) const {
  if (k < labels.size() && x < labels[k].size()) return labels[k][x];
  return std::to_string(x);
}

namespace {

void check_table(const std::vector<std::size_t>& t, std::size_t from, std::size_t to, const std::string& what) {
  require(t.size() == from, ErrorKind::MalformedDocument,
          what + " has " + std::to_string(t.size()) + " entries, level has " + std::to_string(from));
  for (std::size_t x = 0; x < t.size(); ++x)
    require(t[x] < to, ErrorKind::MalformedDocument, what + " maps " + std::to_string(x) + " out of range");
}

std::string tag(const char* name, std::size_t k, std::size_t i) {
  return std::string(name) + "^" + std::to_string(k) + "_" + std::to_string(i);
}

}  // namespace

void require_shape(const SimplicialObjectData& m) {
  require(!m.level_sizes.empty(), ErrorKind::MalformedDocument, "simplicial object has no levels");
  const std::size_t levels = m.level_sizes.size();
  require(m.face.size() == levels && m.degen.size() == levels, ErrorKind::MalformedDocument,
          "face and degeneracy tables need one slot per level");
  require(m.face[0].empty() && m.degen[0].empty(), ErrorKind::MalformedDocument, "level 0 has no face or degeneracy maps");
  for (std::size_t k = 1; k < levels; ++k) {
    require(m.face[k].size() == k + 1, ErrorKind::MalformedDocument, "level " + std::to_string(k) + " needs k+1 faces");
    require(m.degen[k].size() == k, ErrorKind::MalformedDocument, "level " + std::to_string(k) + " needs k degeneracies");
    for (std::size_t i = 0; i <= k; ++i) check_table(m.face[k][i], m.level_sizes[k], m.level_sizes[k - 1], tag("d", k, i));
    for (std::size_t i = 0; i < k; ++i) check_table(m.degen[k][i], m.level_sizes[k - 1], m.level_sizes[k], tag("s", k, i));
  }
}

LawReport validate_simplicial(const SimplicialObjectData& m, const CheckOptions& opts) {
  require_shape(m);
  LawReport rep("validate_simplicial");
  const std::size_t n = m.top();
  auto d = [&](std::size_t k, std::size_t i, std::size_t x) { return m.face[k][i][x]; };
  auto s = [&](std::size_t k, std::size_t i, std::size_t x) { return m.degen[k][i][x]; };
  auto witness = [&](const char* id, std::size_t k, std::size_t i, std::size_t j, std::size_t x) {
    return std::vector<std::string>{id, std::to_string(k), std::to_string(i), std::to_string(j), m.label(k, x)};
  };

  // d_i d_j = d_{j-1} d_i on level k >= 2.
  for (std::size_t k = 2; k <= n; ++k)
    for (std::size_t j = 1; j <= k; ++j)
      for (std::size_t i = 0; i < j; ++i)
        for (std::size_t x = 0; x < m.level_sizes[k]; ++x) {
          rep.add_case();
          if (d(k - 1, i, d(k, j, x)) != d(k - 1, j - 1, d(k, i, x))) rep.violate("dd", witness("dd", k, i, j, x));
        }

  // d_i^k s_j^k on level k-1.
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t x = 0; x < m.level_sizes[k - 1]; ++x) {
          rep.add_case();
          const std::size_t lhs = d(k, i, s(k, j, x));
          std::size_t rhs;
          if (i < j)
            rhs = s(k - 1, j - 1, d(k - 1, i, x));
          else if (i == j || i == j + 1)
            rhs = x;
          else
            rhs = s(k - 1, j, d(k - 1, i - 1, x));
          if (lhs != rhs) rep.violate("ds", witness("ds", k - 1, i, j, x));
        }

  // s_i^{k+1} s_j^k = s_{j+1}^{k+1} s_i^k on level k-1, i <= j.
  for (std::size_t k = 1; k + 1 <= n; ++k)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i <= j; ++i)
        for (std::size_t x = 0; x < m.level_sizes[k - 1]; ++x) {
          rep.add_case();
          if (s(k + 1, i, s(k, j, x)) != s(k + 1, j + 1, s(k, i, x))) rep.violate("ss", witness("ss", k - 1, i, j, x));
        }
  rep.finalize(opts);
  return rep;
}

SimplicialObjectData constant_object(std::size_t n) {
  SimplicialObjectData m;
  m.level_sizes.assign(n + 1, 1);
  m.face.resize(n + 1);
  m.degen.resize(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    m.face[k].assign(k + 1, std::vector<std::size_t>{0});
    m.degen[k].assign(k, std::vector<std::size_t>{0});
  }
  return m;
}

namespace {

using Chain = std::vector<fincat::MorId>;

struct NerveLevels {
  std::vector<std::vector<Chain>> chains;  // level k >= 1
  std::vector<std::map<Chain, std::size_t>> index;
};

NerveLevels nerve_levels(const fincat::FinCategory& c, std::size_t n) {
  NerveLevels out;
  out.chains.resize(n + 1);
  out.index.resize(n + 1);
  if (n >= 1)
    for (fincat::MorId f = 0; f < c.morphism_count(); ++f) out.chains[1].push_back({f});
  for (std::size_t k = 2; k <= n; ++k)
    for (const auto& ch : out.chains[k - 1])
      for (fincat::MorId f = 0; f < c.morphism_count(); ++f)
        if (c.source(f) == c.target(ch.back())) {
          auto next = ch;
          next.push_back(f);
          out.chains[k].push_back(std::move(next));
        }
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t x = 0; x < out.chains[k].size(); ++x) out.index[k].emplace(out.chains[k][x], x);
  return out;
}

std::string chain_label(const fincat::FinCategory& c, const Chain& ch) {
  std::string out = "(";
  for (std::size_t i = 0; i < ch.size(); ++i) out += (i ? "," : "") + c.morphism_name(ch[i]);
  return out + ")";
}

}  // namespace

SimplicialObjectData nerve(const fincat::FinCategory& c, std::size_t n) {
  auto v = fincat::validate_category(c);
  require(v.passed(), ErrorKind::MalformedDocument, "nerve needs a valid category");
  const auto lv = nerve_levels(c, n);
  auto id = [&](fincat::ObjId a) { return *c.identity(a); };

  SimplicialObjectData m;
  m.level_sizes.push_back(c.object_count());
  m.labels.push_back(c.object_names());
  for (std::size_t k = 1; k <= n; ++k) {
    m.level_sizes.push_back(lv.chains[k].size());
    std::vector<std::string> labels;
    for (const auto& ch : lv.chains[k]) labels.push_back(chain_label(c, ch));
    m.labels.push_back(std::move(labels));
  }
  m.face.resize(n + 1);
  m.degen.resize(n + 1);

  for (std::size_t k = 1; k <= n; ++k) {
    m.face[k].assign(k + 1, std::vector<std::size_t>(m.level_sizes[k]));
    for (std::size_t x = 0; x < lv.chains[k].size(); ++x) {
      const auto& ch = lv.chains[k][x];
      if (k == 1) {
        m.face[1][0][x] = c.target(ch[0]);
        m.face[1][1][x] = c.source(ch[0]);
        continue;
      }
      for (std::size_t i = 0; i <= k; ++i) {
        Chain out;
        if (i == 0) {
          out.assign(ch.begin() + 1, ch.end());
        } else if (i == k) {
          out.assign(ch.begin(), ch.end() - 1);
        } else {
          out.assign(ch.begin(), ch.begin() + static_cast<std::ptrdiff_t>(i) - 1);
          out.push_back(*c.compose(ch[i], ch[i - 1]));
          out.insert(out.end(), ch.begin() + static_cast<std::ptrdiff_t>(i) + 1, ch.end());
        }
        m.face[k][i][x] = lv.index[k - 1].at(out);
      }
    }

    m.degen[k].assign(k, std::vector<std::size_t>(m.level_sizes[k - 1]));
    for (std::size_t x = 0; x < m.level_sizes[k - 1]; ++x)
      for (std::size_t i = 0; i < k; ++i) {
        Chain out;
        if (k == 1) {
          out = {id(x)};
        } else {
          const auto& ch = lv.chains[k - 1][x];
          // Object x_i of the chain: source of f_{i+1}, or the last target.
          const fincat::ObjId xi = i < ch.size() ? c.source(ch[i]) : c.target(ch.back());
          out.assign(ch.begin(), ch.begin() + static_cast<std::ptrdiff_t>(i));
          out.push_back(id(xi));
          out.insert(out.end(), ch.begin() + static_cast<std::ptrdiff_t>(i), ch.end());
        }
        m.degen[k][i][x] = lv.index[k].at(out);
      }
  }
  return m;
}

LevelMaps identity_family(const SimplicialObjectData& m) {
  LevelMaps out;
  for (auto size : m.level_sizes) {
    std::vector<std::size_t> id(size);
    for (std::size_t x = 0; x < size; ++x) id[x] = x;
    out.push_back(std::move(id));
  }
  return out;
}

LevelMaps nerve_map(const fincat::FinCategory& c, const fincat::FunctorData& f, std::size_t n) {
  auto v = fincat::check_functor(f, c, c);
  require(v.passed(), ErrorKind::MalformedDocument, "nerve_map needs a valid endofunctor");
  const auto lv = nerve_levels(c, n);
  LevelMaps out{f.obj_map};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> level;
    for (const auto& ch : lv.chains[k]) {
      Chain image;
      for (auto g : ch) image.push_back(f.mor_map[g]);
      level.push_back(lv.index[k].at(image));
    }
    out.push_back(std::move(level));
  }
  return out;
}

LawReport check_simplicial_invariance(const LevelMaps& f, const SimplicialObjectData& m, const CheckOptions& opts) {
  require_shape(m);
  require(f.size() == m.level_sizes.size(), ErrorKind::MalformedDocument, "map family needs one map per level");
  for (std::size_t k = 0; k < f.size(); ++k)
    check_table(f[k], m.level_sizes[k], m.level_sizes[k], "F_" + std::to_string(k));
  LawReport rep("check_simplicial_invariance");
  for (std::size_t k = 1; k <= m.top(); ++k) {
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t x = 0; x < m.level_sizes[k]; ++x) {
        rep.add_case();
        if (f[k - 1][m.face[k][i][x]] != m.face[k][i][f[k][x]])
          rep.violate("face", {std::to_string(k), std::to_string(i), m.label(k, x)});
      }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t x = 0; x < m.level_sizes[k - 1]; ++x) {
        rep.add_case();
        if (f[k][m.degen[k][i][x]] != m.degen[k][i][f[k - 1][x]])
          rep.violate("degeneracy", {std::to_string(k), std::to_string(i), m.label(k - 1, x)});
      }
  }
  rep.finalize(opts);
  return rep;
}

std::optional<std::size_t> adapt_level(const SimplicialObjectData& m, const std::vector<double>& scores,
                                       double threshold) {
  require(scores.size() == m.level_sizes.size(), ErrorKind::LengthMismatch,
          std::to_string(scores.size()) + " scores for " + std::to_string(m.level_sizes.size()) + " levels");
  require(std::isfinite(threshold), ErrorKind::NonFinite, "threshold is not finite");
  for (std::size_t k = 0; k < scores.size(); ++k)
    require(std::isfinite(scores[k]), ErrorKind::NonFinite, "score at level " + std::to_string(k) + " is not finite");
  for (std::size_t k = 0; k < scores.size(); ++k)
    if (scores[k] <= threshold) return k;
  return std::nullopt;
}

}  // namespace symcat::sobj
