#include "symcat/enriched.hpp"

#include <cmath>
#include <algorithm>

#include "symcat/error.hpp"
#include "symcat/rng.hpp"

namespace symcat::enriched {

namespace {

std::string vec_str(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt_real(v(i));
  }
  return s + ")";
}

std::string sample_label(std::size_t k) { return "sample:" + std::to_string(k); }

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Residual that treats NaN as an unbounded failure.
bool within(double residual, double tol) { return residual <= tol; }

void check_dim(const Vector& v, const Representation& r, const char* what) {
  require(static_cast<std::size_t>(v.size()) == r.dim(), ErrorKind::DimensionMismatch,
          std::string(what) + ": length " + std::to_string(v.size()) + " != " + std::to_string(r.dim()));
}

double round_coord(double v) {
  const double scale = std::pow(10.0, kRoundDecimals);
  // Adding 0.0 folds -0.0 into +0.0 so that the order ignores the sign of zero.
  return std::nearbyint(v * scale) / scale + 0.0;
}

// Strict weak order on doubles with every NaN after every number.
bool nan_last_less(double p, double q) {
  if (std::isnan(p)) return false;
  if (std::isnan(q)) return true;
  return p < q;
}

}  // namespace

LawReport validate_categorical_rep(const CategoricalRep& r, const CheckOptions& opts) {
  LawReport rep("validate_categorical_rep");
  require(r.category && r.group, ErrorKind::MalformedDocument, "categorical representation without category or group");
  const auto& c = *r.category;
  const auto& g = *r.group;
  require(r.object < c.object_count(), ErrorKind::MalformedDocument, "object id out of range");
  require(r.automorphisms.size() == g.order(), ErrorKind::MalformedDocument,
          "need one automorphism per group element");
  for (auto m : r.automorphisms) require(m < c.morphism_count(), ErrorKind::MalformedDocument, "morphism id out of range");

  for (Elem a = 0; a < g.order(); ++a) {
    rep.add_case();
    const auto m = r.automorphisms[a];
    if (c.source(m) != r.object || c.target(m) != r.object) {
      rep.violate("endomorphism", {g.name(a)}, c.morphism_name(m) + " is not an endomorphism of " + c.object_name(r.object));
    }
  }
  rep.add_case();
  if (r.automorphisms[g.identity()] != c.identity(r.object)) {
    rep.violate("identity", {g.name(g.identity())}, "identity element not sent to the identity morphism");
  }
  for (Elem a = 0; a < g.order(); ++a) {
    for (Elem b = 0; b < g.order(); ++b) {
      rep.add_case();
      const auto lhs = r.automorphisms[g.mul(a, b)];
      const auto rhs = c.compose(r.automorphisms[a], r.automorphisms[b]);
      if (rhs != lhs) {
        rep.violate("homomorphism", {g.name(a), g.name(b)},
                    rhs ? c.morphism_name(*rhs) + " != " + c.morphism_name(lhs) : "composite undefined");
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

const GroupPtr& EnrichedObject::group() const {
  return linear() ? std::get<Representation>(carrier).group() : std::get<CategoricalRep>(carrier).group;
}

LawReport validate_enriched_object(const EnrichedObject& x, const CheckOptions& opts) {
  if (x.linear()) return validate_representation(std::get<Representation>(x.carrier), {}, opts);
  return validate_categorical_rep(std::get<CategoricalRep>(x.carrier), opts);
}

LawReport check_enriched_morphism(const EnrichedMorphism& f, const Tolerances& tol, const CheckOptions& opts) {
  LawReport rep("check_enriched_morphism");
  require(symgrp::same_group(f.source.group(), f.target.group()), ErrorKind::GroupMismatch,
          "source and target are over different groups");
  require(f.source.linear() == f.target.linear() && f.source.linear() == (f.map.index() == 0),
          ErrorKind::DimensionMismatch, "mixed linear and categorical carriers");
  const auto& g = *f.source.group();

  if (f.source.linear()) {
    const auto& rho = std::get<Representation>(f.source.carrier);
    const auto& sigma = std::get<Representation>(f.target.carrier);
    const auto& w = std::get<Matrix>(f.map);
    require(static_cast<std::size_t>(w.rows()) == sigma.dim() && static_cast<std::size_t>(w.cols()) == rho.dim(),
            ErrorKind::DimensionMismatch, "map shape does not match carrier dimensions");
    rep.metrics["max_residual"] = 0.0;
    for (Elem a = 0; a < g.order(); ++a) {
      rep.add_case();
      const double res = max_abs(sigma.rho(a) * w - w * rho.rho(a));
      rep.track_max("max_residual", res);
      if (!within(res, tol.alg)) rep.violate("equivariance", {g.name(a)}, "residual " + fmt_real(res));
    }
  } else {
    const auto& rho = std::get<CategoricalRep>(f.source.carrier);
    const auto& sigma = std::get<CategoricalRep>(f.target.carrier);
    require(rho.category == sigma.category, ErrorKind::MalformedDocument, "carriers live in different categories");
    const auto& c = *rho.category;
    const auto m = std::get<fincat::MorId>(f.map);
    require(m < c.morphism_count(), ErrorKind::MalformedDocument, "morphism id out of range");
    require(c.source(m) == rho.object && c.target(m) == sigma.object, ErrorKind::DimensionMismatch,
            "morphism endpoints do not match the carriers");
    for (Elem a = 0; a < g.order(); ++a) {
      rep.add_case();
      const auto lhs = c.compose(sigma.automorphisms[a], m);
      const auto rhs = c.compose(m, rho.automorphisms[a]);
      if (!lhs || !rhs || *lhs != *rhs) {
        rep.violate("equivariance", {g.name(a)},
                    (lhs ? c.morphism_name(*lhs) : "undefined") + " != " + (rhs ? c.morphism_name(*rhs) : "undefined"));
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

Vector sample_vector(std::uint64_t seed, std::size_t k, std::size_t n) {
  const CounterRng rng(seed, k);
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = rng.normal(i);
  return v;
}

LawReport check_update_invariance(const VectorMap& u, const Representation& r, const SampleOptions& s, double tol,
                                  const CheckOptions& opts) {
  LawReport rep("check_update_invariance");
  const auto& g = *r.group();
  rep.metrics["max_residual"] = 0.0;
  for (std::size_t k = 0; k < s.samples; ++k) {
    const Vector theta = sample_vector(s.seed, k, r.dim());
    const Vector u_theta = u(theta);
    check_dim(u_theta, r, "update output");
    for (Elem a = 0; a < g.order(); ++a) {
      rep.add_case();
      const double res = inf_norm(u(r.rho(a) * theta) - r.rho(a) * u_theta);
      rep.track_max("max_residual", std::isnan(res) ? INFINITY : res);
      if (!within(res, tol)) {
        rep.violate("commutation", {g.name(a), sample_label(k)}, "theta " + vec_str(theta) + " residual " + fmt_real(res));
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

Vector canonical_representative(const Representation& r, const Vector& x) {
  check_dim(x, r, "canonical_representative");
  const auto& g = *r.group();
  Vector best;
  std::vector<double> best_key;
  for (Elem a = 0; a < g.order(); ++a) {
    const Vector y = r.rho(a) * x;
    std::vector<double> key(static_cast<std::size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) key[static_cast<std::size_t>(i)] = round_coord(y(i));
    const bool better =
        a == 0 || std::lexicographical_compare(key.begin(), key.end(), best_key.begin(), best_key.end(), nan_last_less);
    if (better) {
      best = y;
      best_key = std::move(key);
    }
  }
  return best;
}

LawReport check_reduction_optimality(const VectorMap& s_map, const Representation& r, const SampleOptions& s,
                                     double tol, const CheckOptions& opts) {
  LawReport rep("check_reduction_optimality");
  const auto& g = *r.group();
  rep.metrics["max_residual"] = 0.0;
  for (std::size_t k = 0; k < s.samples; ++k) {
    const Vector x = sample_vector(s.seed, k, r.dim());
    const Vector sx = s_map(x);
    for (Elem a = 0; a < g.order(); ++a) {
      rep.add_case();
      const Vector sgx = s_map(r.rho(a) * x);
      const bool same = tol == 0.0 ? sgx == sx : within(inf_norm(sgx - sx), tol);
      const double res = sgx.size() == sx.size() ? inf_norm(sgx - sx) : INFINITY;
      rep.track_max("max_residual", std::isnan(res) ? INFINITY : res);
      if (!same) rep.violate("orbit_constant", {g.name(a), sample_label(k)}, "x " + vec_str(x) + " residual " + fmt_real(res));
    }
  }
  rep.finalize(opts);
  return rep;
}

RegularizerReport check_regularizer(const VectorMap& r_map, const Representation& r, const SampleOptions& s, double tol,
                                    const CheckOptions& opts) {
  RegularizerReport out{LawReport("check_regularizer/commutation"), LawReport("check_regularizer/projection")};
  const auto& g = *r.group();
  out.commutation.metrics["max_residual"] = 0.0;
  out.projection.metrics["max_residual"] = 0.0;
  for (std::size_t k = 0; k < s.samples; ++k) {
    const Vector x = sample_vector(s.seed, k, r.dim());
    const Vector rx = r_map(x);
    check_dim(rx, r, "regularizer output");
    for (Elem a = 0; a < g.order(); ++a) {
      out.commutation.add_case();
      const double res = inf_norm(r_map(r.rho(a) * x) - r.rho(a) * rx);
      out.commutation.track_max("max_residual", std::isnan(res) ? INFINITY : res);
      if (!within(res, tol)) {
        out.commutation.violate("commutation", {g.name(a), sample_label(k)}, "x " + vec_str(x) + " residual " + fmt_real(res));
      }
    }
    out.projection.add_case();
    const double res = inf_norm(r_map(rx) - rx);
    out.projection.track_max("max_residual", std::isnan(res) ? INFINITY : res);
    if (!within(res, tol)) out.projection.violate("idempotence", {sample_label(k)}, "x " + vec_str(x) + " residual " + fmt_real(res));
  }
  out.commutation.finalize(opts);
  out.projection.finalize(opts);
  return out;
}

VectorMap builtin_map(const std::string& spec, const Representation& r) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto parse_real = [&](const std::string& text) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::UsageError, "bad number '" + text + "' in map '" + spec + "'");
    }
    require(used == text.size(), ErrorKind::UsageError, "bad number '" + text + "' in map '" + spec + "'");
    return v;
  };

  if (name == "reynolds" && arg.empty()) {
    return [r](const Vector& v) { return symgrp::reynolds_vector(r, v); };
  }
  if (name == "canonical" && arg.empty()) {
    return [r](const Vector& v) { return canonical_representative(r, v); };
  }
  if (name == "scale" && !arg.empty()) {
    const double c = parse_real(arg);
    return [c](const Vector& v) -> Vector { return c * v; };
  }
  if (name == "offset" && !arg.empty()) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const auto comma = arg.find(',', start);
      parts.push_back(parse_real(arg.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    require(parts.size() == r.dim(), ErrorKind::DimensionMismatch,
            "offset has " + std::to_string(parts.size()) + " entries, representation has dimension " + std::to_string(r.dim()));
    const Vector off = Eigen::Map<const Vector>(parts.data(), static_cast<Eigen::Index>(parts.size()));
    return [off](const Vector& v) -> Vector { return v + off; };
  }
  fail(ErrorKind::UsageError, "unknown map '" + spec + "' (expected reynolds, canonical, scale:c or offset:v1,...)");
}

}  // namespace symcat::enriched
