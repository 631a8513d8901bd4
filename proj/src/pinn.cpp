#include "symcat/pinn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symcat/error.hpp"
#include "symcat/rng.hpp"

namespace symcat::pinn {

namespace {

using equinet::Activation;
using equinet::DenseModel;

// Evaluates the network on an input jet. `p` is the flat parameter vector.
template <class S>
ad::Jet2<S> eval_net(const DenseModel& shape, const std::vector<S>& p, const ad::Jet2<S>& x) {
  std::vector<ad::Jet2<S>> h{x};
  std::size_t off = 0;
  for (const auto& layer : shape.layers) {
    const auto rows = static_cast<std::size_t>(layer.w.rows());
    const auto cols = static_cast<std::size_t>(layer.w.cols());
    std::vector<ad::Jet2<S>> out(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      ad::Jet2<S> acc = ad::scale(p[off + i * cols], h[0]);
      for (std::size_t j = 1; j < cols; ++j) acc = acc + ad::scale(p[off + i * cols + j], h[j]);
      acc.v = acc.v + p[off + rows * cols + i];
      out[i] = layer.act == Activation::tanh ? ad::tanh(acc) : acc;
    }
    off += rows * cols + rows;
    h = std::move(out);
  }
  return h[0];
}

template <class S>
ad::Jet2<S> eval_ansatz(const DenseModel& shape, bool symmetrized, const std::vector<S>& p, double x) {
  const auto up = eval_net(shape, p, ad::Jet2<S>::variable(x));
  if (!symmetrized) return up;
  // d/dx u(-x) = -u'(-x): seed the mirrored input with derivative -1.
  const auto down = eval_net(shape, p, ad::Jet2<S>{S(-x), S(-1.0), S(0.0)});
  return ad::scale(S(0.5), up + down);
}

template <class S>
S loss_expr(const std::function<ad::Jet2<S>(double)>& u, const PdeSpec& spec, const std::vector<double>& xs,
            const std::vector<double>& fs) {
  S pde(0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const S r = u(xs[i]).d2 - fs[i];
    pde = pde + r * r;
  }
  pde = pde / static_cast<double>(xs.size());
  const S ea = u(spec.a).v - spec.ua;
  const S eb = u(spec.b).v - spec.ub;
  return pde + spec.lambda * (ea * ea + eb * eb);
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

double mirrored_point(double a, double b, std::size_t i, std::size_t n) {
  const double k = static_cast<double>(i);
  const double m = static_cast<double>(n - 1);
  return ((m - k) * a + k * b) / m;
}

}  // namespace

void validate_spec(const PdeSpec& spec) {
  require(spec.equation == "poisson1d", ErrorKind::SchemaError, "unknown equation '" + spec.equation + "'");
  require(std::isfinite(spec.a) && std::isfinite(spec.b) && spec.a < spec.b, ErrorKind::MalformedDocument,
          "domain must satisfy a < b");
  require(spec.collocation >= 2, ErrorKind::MalformedDocument, "need at least 2 collocation points");
  require(std::isfinite(spec.ua) && std::isfinite(spec.ub), ErrorKind::MalformedDocument,
          "boundary values must be finite");
  require(std::isfinite(spec.lambda) && spec.lambda >= 0.0, ErrorKind::MalformedDocument,
          "boundary weight must be finite and non-negative");
  if (!spec.samples.empty()) {
    require(spec.samples.size() == spec.collocation, ErrorKind::MalformedDocument,
            "source table needs one value per collocation point");
    require(std::all_of(spec.samples.begin(), spec.samples.end(), [](double v) { return std::isfinite(v); }),
            ErrorKind::MalformedDocument, "source table has non-finite values");
  } else {
    require(spec.source == "cospi" || spec.source == "zero" || spec.source == "one", ErrorKind::SchemaError,
            "unknown source '" + spec.source + "' (expected cospi, zero or one)");
  }
}

std::vector<double> collocation_points(const PdeSpec& spec) {
  std::vector<double> xs;
  for (std::size_t i = 0; i < spec.collocation; ++i) xs.push_back(mirrored_point(spec.a, spec.b, i, spec.collocation));
  return xs;
}

std::vector<double> source_values(const PdeSpec& spec) {
  if (!spec.samples.empty()) return spec.samples;
  std::vector<double> fs;
  for (double x : collocation_points(spec)) {
    if (spec.source == "cospi") {
      fs.push_back(-std::numbers::pi * std::numbers::pi * std::cos(std::numbers::pi * x));
    } else {
      fs.push_back(spec.source == "one" ? 1.0 : 0.0);
    }
  }
  return fs;
}

std::optional<JetFn> exact_solution(const PdeSpec& spec) {
  if (!spec.samples.empty()) return std::nullopt;
  JetFn particular;
  if (spec.source == "cospi") {
    particular = [](const Jet& x) { return ad::cos(ad::scale(std::numbers::pi, x)); };
  } else if (spec.source == "one") {
    particular = [](const Jet& x) { return ad::scale(0.5, x * x); };
  } else {
    particular = [](const Jet&) { return Jet::constant(0.0); };
  }
  // Add the linear function that corrects the boundary values.
  const double pa = particular(Jet::constant(spec.a)).v;
  const double pb = particular(Jet::constant(spec.b)).v;
  const double slope = ((spec.ub - pb) - (spec.ua - pa)) / (spec.b - spec.a);
  const double offset = (spec.ua - pa) - slope * spec.a;
  return [particular, slope, offset](const Jet& x) {
    return particular(x) + ad::scale(slope, x) + Jet::constant(offset);
  };
}

Arch parse_arch(const std::string& text) {
  const auto x = text.find('x');
  require(x != std::string::npos && x > 0 && x + 1 < text.size(), ErrorKind::UsageError,
          "architecture must look like <layers>x<width>, got '" + text + "'");
  const auto number = [&](const std::string& part) {
    require(!part.empty() && std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }),
            ErrorKind::UsageError, "bad architecture '" + text + "'");
    return static_cast<std::size_t>(std::stoul(part));
  };
  Arch a{number(text.substr(0, x)), number(text.substr(x + 1))};
  require(a.hidden_layers >= 1 && a.width >= 1 && a.width <= 4096, ErrorKind::UsageError,
          "architecture needs at least one hidden layer of positive width");
  return a;
}

Ansatz init_ansatz(const Arch& arch, std::uint64_t seed) {
  Ansatz out;
  const CounterRng rng(seed, 0x70696e6e);
  std::uint64_t counter = 0;
  std::size_t in = 1;
  for (std::size_t k = 0; k <= arch.hidden_layers; ++k) {
    const std::size_t rows = k == arch.hidden_layers ? 1 : arch.width;
    equinet::Layer l;
    l.w = Matrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(in));
    const double std_dev = 1.0 / std::sqrt(static_cast<double>(in));
    for (Eigen::Index i = 0; i < l.w.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.w.cols(); ++j) l.w(i, j) = std_dev * rng.normal(counter++);
    }
    l.b = Vector::Zero(static_cast<Eigen::Index>(rows));
    l.act = k == arch.hidden_layers ? Activation::identity : Activation::tanh;
    out.base.layers.push_back(std::move(l));
    in = rows;
  }
  return out;
}

Ansatz symmetrize(const Ansatz& ans, const PdeSpec& spec) {
  require(spec.a == -spec.b, ErrorKind::AsymmetricDomain,
          "reflection x -> -x needs a domain symmetric about 0, got [" + fmt_real(spec.a) + ", " + fmt_real(spec.b) + "]");
  Ansatz out = ans;
  out.symmetrized = true;
  return out;
}

Vector flatten(const DenseModel& m) {
  std::vector<double> p;
  for (const auto& l : m.layers) {
    for (Eigen::Index i = 0; i < l.w.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.w.cols(); ++j) p.push_back(l.w(i, j));
    }
    for (Eigen::Index i = 0; i < l.b.size(); ++i) p.push_back(l.b(i));
  }
  return Eigen::Map<Vector>(p.data(), static_cast<Eigen::Index>(p.size()));
}

DenseModel unflatten(const DenseModel& shape, const Vector& p) {
  require(static_cast<std::size_t>(p.size()) == shape.parameter_count(), ErrorKind::DimensionMismatch,
          "parameter vector length does not match the model");
  DenseModel out = shape;
  Eigen::Index k = 0;
  for (auto& l : out.layers) {
    for (Eigen::Index i = 0; i < l.w.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.w.cols(); ++j) l.w(i, j) = p(k++);
    }
    for (Eigen::Index i = 0; i < l.b.size(); ++i) l.b(i) = p(k++);
  }
  return out;
}

Jet evaluate(const Ansatz& ans, double x) {
  return eval_ansatz(ans.base, ans.symmetrized, to_std(flatten(ans.base)), x);
}

JetFn as_jet_fn(const Ansatz& ans) {
  const auto p = to_std(flatten(ans.base));
  return [ans, p](const Jet& x) {
    // Compose with the input jet: u(x(t)) for an arbitrary inner jet.
    const Jet u = eval_ansatz(ans.base, ans.symmetrized, p, x.v);
    return Jet{u.v, u.d1 * x.d1, u.d2 * x.d1 * x.d1 + u.d1 * x.d2};
  };
}

double residual_loss(const JetFn& u, const PdeSpec& spec) {
  validate_spec(spec);
  const std::function<Jet(double)> at = [&](double x) { return u(Jet::variable(x)); };
  const double loss = loss_expr<double>(at, spec, collocation_points(spec), source_values(spec));
  require(std::isfinite(loss), ErrorKind::NonFinite, "residual loss is not finite");
  return loss;
}

double residual_loss(const Ansatz& ans, const PdeSpec& spec) {
  validate_spec(spec);
  const auto p = to_std(flatten(ans.base));
  const std::function<Jet(double)> at = [&](double x) { return eval_ansatz(ans.base, ans.symmetrized, p, x); };
  const double loss = loss_expr<double>(at, spec, collocation_points(spec), source_values(spec));
  require(std::isfinite(loss), ErrorKind::NonFinite, "residual loss is not finite");
  return loss;
}

LossGradient loss_gradient(const Ansatz& ans, const PdeSpec& spec) {
  validate_spec(spec);
  const Vector flat = flatten(ans.base);
  ad::Tape tape;
  tape.reserve(std::size_t{1} << 17);
  std::vector<ad::Var> p;
  p.reserve(static_cast<std::size_t>(flat.size()));
  for (Eigen::Index i = 0; i < flat.size(); ++i) p.push_back(ad::Var::leaf(tape, flat(i)));
  const std::function<ad::Jet2<ad::Var>(double)> at = [&](double x) {
    return eval_ansatz(ans.base, ans.symmetrized, p, x);
  };
  const ad::Var loss = loss_expr<ad::Var>(at, spec, collocation_points(spec), source_values(spec));
  LossGradient out;
  out.loss = loss.v;
  out.gradient = Vector::Zero(flat.size());
  if (!loss.constant()) {
    const auto adj = tape.adjoints(loss.id);
    for (std::size_t i = 0; i < p.size(); ++i) out.gradient(static_cast<Eigen::Index>(i)) = adj[p[i].id];
  }
  return out;
}

double invariance_defect(const Ansatz& ans, const PdeSpec& spec, std::size_t grid) {
  const double half = std::max(std::abs(spec.a), std::abs(spec.b));
  const auto p = to_std(flatten(ans.base));
  double worst = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = mirrored_point(-half, half, i, grid);
    const double d = std::abs(eval_ansatz(ans.base, ans.symmetrized, p, x).v - eval_ansatz(ans.base, ans.symmetrized, p, -x).v);
    worst = std::max(worst, std::isnan(d) ? INFINITY : d);
  }
  return worst;
}

TrainReport train(const PdeSpec& spec, const Arch& arch, bool symmetrized, const TrainOptions& opts) {
  validate_spec(spec);
  Ansatz ans = init_ansatz(arch, opts.seed);
  if (symmetrized) ans = symmetrize(ans, spec);

  TrainReport rep;
  rep.symmetrized = symmetrized;
  rep.seed = opts.seed;
  for (double t : opts.thresholds) rep.steps_to_threshold[t] = std::nullopt;

  Vector theta = flatten(ans.base);
  for (std::size_t s = 0;; ++s) {
    ans.base = unflatten(ans.base, theta);
    const auto lg = loss_gradient(ans, spec);
    if (!std::isfinite(lg.loss) || !all_finite(lg.gradient)) {
      rep.aborted = true;
      break;
    }
    rep.loss_curve.push_back(lg.loss);
    const double defect = invariance_defect(ans, spec);
    rep.defect_curve.push_back(defect);
    rep.max_defect = std::max(rep.max_defect, defect);
    for (auto& [t, hit] : rep.steps_to_threshold) {
      if (!hit && lg.loss < t) hit = s;
    }
    if (s == opts.steps) break;
    theta -= opts.lr * lg.gradient;
    rep.steps = s + 1;
  }

  rep.final_ansatz = ans;
  if (!rep.loss_curve.empty()) rep.final_loss = rep.loss_curve.back();
  if (!rep.aborted) {
    PdeSpec pde_only = spec;
    pde_only.lambda = 0.0;
    rep.final_residual = residual_loss(ans, pde_only);
    rep.boundary_error = std::max(std::abs(evaluate(ans, spec.a).v - spec.ua), std::abs(evaluate(ans, spec.b).v - spec.ub));
  }
  return rep;
}

Comparison train_compare(const PdeSpec& spec, const Arch& arch, const TrainOptions& opts) {
  validate_spec(spec);
  Comparison out;
  const auto xs = collocation_points(spec);
  const auto fs = source_values(spec);
  if (spec.a != -spec.b) {
    out.source_even = false;
    out.warnings.push_back("domain is not symmetric about 0; the symmetrized run is skipped");
    out.baseline = train(spec, arch, false, opts);
    return out;
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (std::abs(fs[i] - fs[fs.size() - 1 - i]) > 1e-12) out.source_even = false;
  }
  if (!out.source_even) out.warnings.push_back("source is not even; the symmetrized ansatz cannot represent the solution");
  if (spec.ua != spec.ub) out.warnings.push_back("boundary values differ; an even ansatz cannot match both");
  out.baseline = train(spec, arch, false, opts);
  out.symmetrized = train(spec, arch, true, opts);
  return out;
}

}  // namespace symcat::pinn
