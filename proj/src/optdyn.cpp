#include "symcat/optdyn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "symcat/enriched.hpp"
#include "symcat/rng.hpp"

namespace symcat::optdyn {

namespace {

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void require_finite(double v, const std::string& what) {
  require(std::isfinite(v), ErrorKind::NonFinite, what + " is not finite");
}

double parse_real(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::UsageError, "bad number '" + text + "' in '" + spec + "'");
  }
  require(used == text.size(), ErrorKind::UsageError, "bad number '" + text + "' in '" + spec + "'");
  return v;
}

}  // namespace

double DiffFunction::value(const Vector& theta) const { return f0_(to_std(theta)); }

Vector DiffFunction::gradient(const Vector& theta) const {
  const auto n = static_cast<std::size_t>(theta.size());
  std::vector<D1> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = D1(theta(static_cast<Eigen::Index>(i)), 0.0);
  Vector g(theta.size());
  for (std::size_t i = 0; i < n; ++i) {
    x[i].d = 1.0;
    const D1 y = f1_(x);
    x[i].d = 0.0;
    require_finite(y.v, name_ + " value");
    require_finite(y.d, name_ + " gradient");
    g(static_cast<Eigen::Index>(i)) = y.d;
  }
  if (n == 0) require_finite(value(theta), name_ + " value");
  return g;
}

double DiffFunction::second_directional(const Vector& theta, const Vector& v) const {
  require(theta.size() == v.size(), ErrorKind::DimensionMismatch, "direction length != parameter length");
  std::vector<D2> x(static_cast<std::size_t>(theta.size()));
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    x[static_cast<std::size_t>(i)] = D2(D1(theta(i), v(i)), D1(v(i), 0.0));
  }
  const D2 y = f2_(x);
  require_finite(y.d.d, name_ + " second derivative");
  return y.d.d;
}

Vector gradient(const DiffFunction& f, const Vector& theta) { return f.gradient(theta); }

Vector fd_gradient(const DiffFunction& f, const Vector& theta, double h) {
  Vector g(theta.size());
  Vector x = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    x(i) = theta(i) + h;
    const double up = f.value(x);
    x(i) = theta(i) - h;
    const double down = f.value(x);
    x(i) = theta(i);
    g(i) = (up - down) / (2 * h);
  }
  return g;
}

LawReport check_gradient(const DiffFunction& f, const ProbeOptions& p, double tol) {
  LawReport rep("check_gradient");
  rep.metrics["max_rel_error"] = 0.0;
  for (std::size_t k = 0; k < p.probes; ++k) {
    rep.add_case();
    const Vector theta = p.scale * enriched::sample_vector(p.seed, k, p.dim);
    const Vector a = f.gradient(theta);
    const Vector b = fd_gradient(f, theta);
    const double err = inf_norm(a - b) / std::max({1.0, inf_norm(a), inf_norm(b)});
    rep.track_max("max_rel_error", err);
    if (!(err <= tol)) rep.violate("ad_vs_fd", {"probe:" + std::to_string(k)}, "relative error " + fmt_real(err));
  }
  rep.finalize();
  return rep;
}

DiffFunction make_loss(const std::string& spec) {
  if (spec == "quad") {
    return DiffFunction("quad", [](const auto& th) {
      using S = std::decay_t<decltype(th[0])>;
      S acc(0.0);
      for (const auto& x : th) acc = acc + x * x;
      return 0.5 * acc;
    });
  }
  if (spec == "sumsq") {
    return DiffFunction("sumsq", [](const auto& th) {
      using S = std::decay_t<decltype(th[0])>;
      S acc(0.0);
      for (const auto& x : th) acc = acc + x;
      return acc * acc;
    });
  }
  const std::string prefix = "custom-poly:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
    std::vector<double> c;
    const std::string arg = spec.substr(prefix.size());
    std::size_t start = 0;
    while (true) {
      const auto comma = arg.find(',', start);
      c.push_back(parse_real(arg.substr(start, comma - start), spec));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return DiffFunction(spec, [c](const auto& th) {
      using S = std::decay_t<decltype(th[0])>;
      S acc(0.0);
      for (const auto& x : th) {
        // Horner's rule on c_0 + c_1 x + ... + c_d x^d.
        S p(c.back());
        for (std::size_t k = c.size() - 1; k-- > 0;) p = p * x + c[k];
        acc = acc + p;
      }
      return acc;
    });
  }
  fail(ErrorKind::UsageError, "unknown loss '" + spec + "' (expected quad, sumsq or custom-poly:c0,c1,...)");
}

Vector FlowMap::operator()(std::size_t t, Vector x) const {
  for (std::size_t i = 0; i < t; ++i) x = step(x);
  return x;
}

FlowMap gradstep_flow(const DiffFunction& loss, double eta) {
  return {"gradstep:" + fmt_real(eta) + "(" + loss.name() + ")",
          [loss, eta](const Vector& th) -> Vector { return th - eta * loss.gradient(th); }};
}

FlowMap make_flow(const std::string& spec, const DiffFunction& loss) {
  if (spec == "gradstep") return gradstep_flow(loss);
  const std::string prefix = "gradstep:";
  if (spec.rfind(prefix, 0) == 0) return gradstep_flow(loss, parse_real(spec.substr(prefix.size()), spec));
  fail(ErrorKind::UsageError, "unknown flow '" + spec + "' (expected gradstep:<eta>)");
}

Vector BoxSampler::sample(std::uint64_t seed, std::uint64_t index) const {
  const CounterRng rng(seed, index);
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = lo + (hi - lo) * rng.uniform(i);
  return v;
}

std::string BoxSampler::describe() const {
  return "box(dim=" + std::to_string(dim) + ", lo=" + fmt_real(lo) + ", hi=" + fmt_real(hi) + ")";
}

ContractionCertificate estimate_contraction(const Map& f, const BoxSampler& sampler, std::size_t n_pairs,
                                            std::uint64_t seed, const Representation* orbit_metric) {
  ContractionCertificate cert;
  cert.sampler = sampler.describe() + (orbit_metric ? " metric=orbit" : " metric=euclidean");
  cert.seed = seed;
  const auto dist = [&](const Vector& a, const Vector& b) {
    return orbit_metric ? symgrp::orbit_distance(*orbit_metric, a, b) : (a - b).norm();
  };
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const Vector x = sampler.sample(seed, 2 * k);
    const Vector y = sampler.sample(seed, 2 * k + 1);
    const double d = dist(x, y);
    if (d == 0.0) {
      ++cert.degenerate_skipped;
      continue;
    }
    ++cert.pairs;
    const double ratio = dist(f(x), f(y)) / d;
    cert.max_ratio = std::isnan(ratio) ? INFINITY : std::max(cert.max_ratio, ratio);
  }
  return cert;
}

IterateResult banach_iterate(const Map& f, const Vector& theta0, double tol, std::size_t max_iter) {
  IterateResult out;
  Vector theta = theta0;
  for (std::size_t k = 0; k <= max_iter; ++k) {
    const Vector next = f(theta);
    const double res = inf_norm(next - theta);
    out.residuals.push_back(res);
    if (res <= tol) {
      out.iterations = k;
      out.residual = res;
      out.theta = res == 0.0 ? theta : next;
      out.post_residual = inf_norm(f(out.theta) - out.theta);
      return out;
    }
    if (k == max_iter || !std::isfinite(res)) {
      throw NonConvergenceError("no fixed point within tolerance after " + std::to_string(k) + " iterations (residual " +
                                    fmt_real(res) + ")",
                                theta, out.residuals);
    }
    theta = next;
  }
  throw NonConvergenceError("max_iter exhausted", theta, out.residuals);
}

LawReport check_semigroup(const FlowMap& flow, const std::vector<SemigroupCase>& cases, const CheckOptions& opts) {
  LawReport rep("check_semigroup");
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    rep.add_case();
    const Vector whole = flow(c.s + c.t, c.x);
    const Vector split = flow(c.s, flow(c.t, c.x));
    const bool same = whole.size() == split.size() &&
                      std::equal(whole.data(), whole.data() + whole.size(), split.data(), [](double a, double b) {
                        return std::memcmp(&a, &b, sizeof(double)) == 0;
                      });
    if (!same) {
      rep.violate("semigroup", {"case:" + std::to_string(k), "s=" + std::to_string(c.s), "t=" + std::to_string(c.t)},
                  "max difference " + fmt_real(inf_norm(whole - split)));
    }
  }
  rep.finalize(opts);
  return rep;
}

std::vector<SemigroupCase> random_semigroup_cases(std::size_t dim, std::size_t t_max, std::size_t n,
                                                  std::uint64_t seed) {
  CounterRng rng(seed, 0x5e31);
  std::vector<SemigroupCase> out;
  for (std::size_t k = 0; k < n; ++k) {
    SemigroupCase c;
    c.s = static_cast<std::size_t>(rng.next_below(t_max + 1));
    c.t = static_cast<std::size_t>(rng.next_below(t_max + 1));
    c.x = enriched::sample_vector(seed, k, dim);
    out.push_back(std::move(c));
  }
  return out;
}

LawReport check_flow_equivariance(const FlowMap& flow, const Representation& r, std::size_t t_max,
                                  std::size_t n_samples, std::uint64_t seed, double tol, const CheckOptions& opts) {
  LawReport rep("check_flow_equivariance");
  rep.metrics["max_residual"] = 0.0;
  const auto& g = *r.group();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector x = enriched::sample_vector(seed, k, r.dim());
    for (symgrp::Elem a = 0; a < g.order(); ++a) {
      Vector lhs = r.rho(a) * x;  // Flow(t)(rho(g) x)
      Vector base = x;            // Flow(t)(x)
      for (std::size_t t = 0; t <= t_max; ++t) {
        if (t > 0) {
          lhs = flow.step(lhs);
          base = flow.step(base);
          require(static_cast<std::size_t>(lhs.size()) == r.dim() && static_cast<std::size_t>(base.size()) == r.dim(),
                  ErrorKind::DimensionMismatch, "flow output length != representation dimension");
        }
        rep.add_case();
        const double res = inf_norm(lhs - r.rho(a) * base);
        rep.track_max("max_residual", std::isnan(res) ? INFINITY : res);
        if (!(res <= tol)) {
          rep.violate("flow_equivariance", {g.name(a), "sample:" + std::to_string(k), "t=" + std::to_string(t)},
                      "residual " + fmt_real(res));
        }
      }
    }
  }
  rep.finalize(opts);
  return rep;
}

void validate_trajectory(const Trajectory& traj) {
  for (std::size_t i = 0; i < traj.size(); ++i) {
    require(i == 0 ? traj[i].t == 0 : traj[i].t > traj[i - 1].t, ErrorKind::MalformedDocument,
            "trajectory times must start at 0 and strictly increase");
    require(traj[i].theta.size() == traj[0].theta.size(), ErrorKind::MalformedDocument,
            "trajectory parameter vectors differ in length");
  }
}

std::optional<std::int64_t> detect_convergence(const Trajectory& traj, double eps, const Representation* orbit_metric) {
  require(!traj.empty(), ErrorKind::EmptyTrajectory, "trajectory has no points");
  require(eps > 0.0, ErrorKind::UsageError, "eps must be positive");
  validate_trajectory(traj);
  const auto dist = [&](const Vector& a, const Vector& b) {
    return orbit_metric ? symgrp::orbit_distance(*orbit_metric, a, b) : (a - b).norm();
  };
  for (std::size_t T = 0; T + 1 < traj.size(); ++T) {
    bool ok = true;
    for (std::size_t t = T + 1; t < traj.size() && ok; ++t) ok = dist(traj[t].theta, traj[T].theta) < eps;
    if (ok) return traj[T].t;
  }
  return std::nullopt;
}

MetaResult meta_fixed_point(const Map& phi, const Representation& r, const Vector& theta0, double tol,
                            std::size_t max_iter, std::uint64_t seed) {
  MetaResult out;
  out.hypothesis = enriched::check_update_invariance(phi, r, {enriched::kDefaultSamples, seed}, Tolerances{}.alg);
  out.hypothesis.check = "meta_fixed_point/hypothesis";
  if (!out.hypothesis.passed()) out.hypothesis.note("Phi is not equivariant; the invariant fixed point is not guaranteed");

  out.iteration = banach_iterate(phi, theta0, tol, max_iter);
  out.theta = out.iteration.theta;

  LawReport inv("meta_fixed_point/invariance");
  const auto& g = *r.group();
  for (symgrp::Elem a = 0; a < g.order(); ++a) {
    inv.add_case();
    const double d = inf_norm(r.rho(a) * out.theta - out.theta);
    out.defect = std::max(out.defect, d);
    if (!(d <= 10 * tol)) inv.violate("invariant_fixed_point", {g.name(a)}, "defect " + fmt_real(d));
  }
  inv.metrics["defect"] = out.defect;
  inv.finalize();
  out.invariance = std::move(inv);
  return out;
}

}  // namespace symcat::optdyn
