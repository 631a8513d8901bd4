#include "symcat/equinet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "symcat/enriched.hpp"
#include "symcat/error.hpp"
#include "symcat/optdyn.hpp"
#include "symcat/rng.hpp"

namespace symcat::equinet {

namespace {

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Matrix seeded_gaussian(const CounterRng& rng, Eigen::Index rows, Eigen::Index cols, std::uint64_t offset, double scale) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = scale * rng.normal(offset + static_cast<std::uint64_t>(i * cols + j));
    }
  }
  return m;
}

void require_same_group(const Representation& a, const Representation& b) {
  require(symgrp::same_group(a.group(), b.group()), ErrorKind::GroupMismatch, "representations over different groups");
}

// A layer whose weight and bias are linear combinations of fixed bases.
struct BasisLayer {
  std::vector<Matrix> w_basis;
  std::vector<Vector> b_basis;
  Eigen::Index n_out = 0;
  Eigen::Index n_in = 0;
  Activation act = Activation::identity;

  std::size_t params() const { return w_basis.size() + b_basis.size(); }
};

template <class S>
std::vector<S> eval_basis(const std::vector<BasisLayer>& layers, const std::vector<S>& p, const Vector& x) {
  std::vector<S> h(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) h[static_cast<std::size_t>(i)] = S(x(i));
  std::size_t offset = 0;
  for (const auto& layer : layers) {
    std::vector<S> out(static_cast<std::size_t>(layer.n_out), S(0.0));
    for (const auto& basis : layer.w_basis) {
      const S& c = p[offset++];
      for (Eigen::Index i = 0; i < layer.n_out; ++i) {
        S acc(0.0);
        for (Eigen::Index j = 0; j < layer.n_in; ++j) {
          if (basis(i, j) != 0.0) acc = acc + basis(i, j) * h[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)] + c * acc;
      }
    }
    for (const auto& basis : layer.b_basis) {
      const S& c = p[offset++];
      for (Eigen::Index i = 0; i < layer.n_out; ++i) {
        if (basis(i) != 0.0) out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)] + basis(i) * c;
      }
    }
    for (auto& v : out) v = activate(layer.act, v);
    h = std::move(out);
  }
  return h;
}

Layer materialize(const BasisLayer& layer, const Vector& p, std::size_t& offset) {
  Layer out{Matrix::Zero(layer.n_out, layer.n_in), Vector::Zero(layer.n_out), layer.act};
  for (const auto& basis : layer.w_basis) out.w += p(static_cast<Eigen::Index>(offset++)) * basis;
  for (const auto& basis : layer.b_basis) out.b += p(static_cast<Eigen::Index>(offset++)) * basis;
  return out;
}

void check_pointwise_admissible(const Representation& r, Activation act, const std::string& where) {
  if (act != Activation::identity && !r.is_permutation()) {
    fail(ErrorKind::NonPermutationWithNonlinearity,
         where + ": pointwise " + to_string(act) + " only commutes with permutation representations");
  }
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::tanh:
      return "tanh";
    case Activation::relu:
      return "relu";
    case Activation::identity:
      break;
  }
  return "identity";
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  fail(ErrorKind::SchemaError, "unknown activation '" + name + "'");
}

std::size_t DenseModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.w.size() + l.b.size());
  return n;
}

void validate_model(const DenseModel& m) {
  require(!m.layers.empty(), ErrorKind::MalformedDocument, "model has no layers");
  for (std::size_t k = 0; k < m.layers.size(); ++k) {
    const auto& l = m.layers[k];
    const std::string where = "layer " + std::to_string(k);
    require(l.b.size() == l.w.rows(), ErrorKind::MalformedDocument, where + ": bias length != weight rows");
    if (k > 0) {
      require(l.w.cols() == m.layers[k - 1].w.rows(), ErrorKind::MalformedDocument,
              where + ": input width does not match previous layer");
    }
    require(all_finite(l.w) && all_finite(l.b), ErrorKind::NonFinite, where + ": non-finite parameter");
  }
}

Vector forward(const DenseModel& m, const Vector& x) {
  require(static_cast<std::size_t>(x.size()) == m.input_dim(), ErrorKind::DimensionMismatch,
          "input length " + std::to_string(x.size()) + " != model input " + std::to_string(m.input_dim()));
  Vector h = x;
  for (const auto& l : m.layers) {
    Vector z = l.w * h + l.b;
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = activate(l.act, z(i));
    h = std::move(z);
  }
  return h;
}

DenseModel random_model(const std::vector<std::size_t>& widths, Activation act, std::uint64_t seed) {
  require(widths.size() >= 2, ErrorKind::UsageError, "need at least input and output widths");
  DenseModel m;
  const CounterRng rng(seed, 0x6d6f64);
  std::uint64_t offset = 0;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    const auto rows = static_cast<Eigen::Index>(widths[k + 1]);
    const auto cols = static_cast<Eigen::Index>(widths[k]);
    Layer l;
    l.w = seeded_gaussian(rng, rows, cols, offset, 1.0 / std::sqrt(static_cast<double>(cols)));
    offset += static_cast<std::uint64_t>(rows * cols);
    l.b = seeded_gaussian(rng, rows, 1, offset, 0.1).col(0);
    offset += static_cast<std::uint64_t>(rows);
    l.act = k + 2 < widths.size() ? act : Activation::identity;
    m.layers.push_back(std::move(l));
  }
  return m;
}

Layer build_equivariant_layer(const EquivariantLayerSpec& spec) {
  require_same_group(spec.r_in, spec.r_out);
  const auto n_out = static_cast<Eigen::Index>(spec.r_out.dim());
  const auto n_in = static_cast<Eigen::Index>(spec.r_in.dim());
  Layer out{Matrix::Zero(n_out, n_in), Vector::Zero(n_out), spec.act};

  if (spec.mode == LayerMode::reynolds) {
    const CounterRng rng(spec.seed, 0x6c6179);
    const Matrix w = seeded_gaussian(rng, n_out, n_in, 0, 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(n_in, 1))));
    const Vector b = seeded_gaussian(rng, n_out, 1, static_cast<std::uint64_t>(n_out * n_in), 0.1).col(0);
    out.w = symgrp::reynolds_map(spec.r_in, spec.r_out, w);
    out.b = symgrp::reynolds_vector(spec.r_out, b);
    return out;
  }

  const auto basis = symgrp::intertwiner_basis(spec.r_in, spec.r_out);
  require(spec.coefficients.size() == basis.size(), ErrorKind::DimensionMismatch,
          "expected " + std::to_string(basis.size()) + " weight coefficients, got " +
              std::to_string(spec.coefficients.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.w += spec.coefficients[k] * basis[k];
  if (!spec.bias_coefficients.empty()) {
    const auto fixed = symgrp::fixed_subspace(spec.r_out);
    require(spec.bias_coefficients.size() == fixed.size(), ErrorKind::DimensionMismatch,
            "expected " + std::to_string(fixed.size()) + " bias coefficients, got " +
                std::to_string(spec.bias_coefficients.size()));
    for (std::size_t k = 0; k < fixed.size(); ++k) out.b += spec.bias_coefficients[k] * fixed[k];
  }
  return out;
}

DenseModel build_equivariant_model(const std::vector<Representation>& interfaces, Activation hidden, Activation head,
                                   std::uint64_t seed) {
  require(interfaces.size() >= 2, ErrorKind::UsageError, "need at least input and output representations");
  DenseModel m;
  for (std::size_t k = 0; k + 1 < interfaces.size(); ++k) {
    EquivariantLayerSpec spec;
    spec.r_in = interfaces[k];
    spec.r_out = interfaces[k + 1];
    spec.seed = seed * 1000003 + k;
    spec.act = k + 2 < interfaces.size() ? hidden : head;
    check_pointwise_admissible(spec.r_out, spec.act, "layer " + std::to_string(k));
    m.layers.push_back(build_equivariant_layer(spec));
  }
  return m;
}

EquivarianceResult check_model_equivariance(const DenseModel& m, const Representation& r_in,
                                            const Representation& r_out, std::size_t n_samples, std::uint64_t seed,
                                            double tol, const CheckOptions& opts) {
  validate_model(m);
  require_same_group(r_in, r_out);
  require(m.input_dim() == r_in.dim() && m.output_dim() == r_out.dim(), ErrorKind::DimensionMismatch,
          "model shape does not match the representations");
  for (const auto& l : m.layers) {
    if (l.act == Activation::identity) continue;
    check_pointwise_admissible(r_in, l.act, "input representation");
    check_pointwise_admissible(r_out, l.act, "output representation");
  }

  EquivarianceResult out;
  out.report = LawReport("check_model_equivariance");
  out.report.metrics["max_violation"] = 0.0;
  const auto& g = *r_in.group();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector x = enriched::sample_vector(seed, k, r_in.dim());
    const Vector fx = forward(m, x);
    for (symgrp::Elem a = 0; a < g.order(); ++a) {
      out.report.add_case();
      const double v = inf_norm(forward(m, r_in.rho(a) * x) - r_out.rho(a) * fx);
      out.max_violation = std::max(out.max_violation, std::isnan(v) ? INFINITY : v);
      if (!(v <= tol)) {
        std::string xs;
        for (Eigen::Index i = 0; i < x.size(); ++i) xs += (i ? "," : "") + fmt_real(x(i));
        out.report.violate("equivariance", {g.name(a), "sample:" + std::to_string(k)},
                           "x (" + xs + ") violation " + fmt_real(v));
      }
    }
  }
  out.report.metrics["max_violation"] = out.max_violation;
  out.report.finalize(opts);
  return out;
}

std::size_t TyingPattern::weight_orbits() const {
  return weight_orbit.empty() ? 0 : *std::max_element(weight_orbit.begin(), weight_orbit.end()) + 1;
}

std::size_t TyingPattern::bias_orbits() const {
  return bias_orbit.empty() ? 0 : *std::max_element(bias_orbit.begin(), bias_orbit.end()) + 1;
}

Compression compress(std::size_t n_out, std::size_t n_in, const SetAction& a_out, const SetAction& a_in) {
  require(symgrp::same_group(a_out.group(), a_in.group()), ErrorKind::GroupMismatch, "actions over different groups");
  require(a_out.size() == n_out && a_in.size() == n_in, ErrorKind::DimensionMismatch,
          "action sizes do not match the layer shape");
  const auto pairs = symgrp::pair_action(a_out, a_in);
  const auto weight_part = symgrp::orbits(pairs);
  const auto bias_part = symgrp::orbits(a_out);

  Compression c;
  c.tying = {n_out, n_in, weight_part.orbit_of, bias_part.orbit_of};
  auto& l = c.report.layers.emplace_back();
  l.raw_weights = n_out * n_in;
  l.raw_bias = n_out;
  l.tied_weights = symgrp::burnside(pairs);
  l.tied_bias = symgrp::burnside(a_out);
  require(l.tied_weights == weight_part.count() && l.tied_bias == bias_part.count(), ErrorKind::NonIntegralCount,
          "orbit count disagrees with Burnside count");
  l.weight_ratio = l.tied_weights ? static_cast<double>(l.raw_weights) / static_cast<double>(l.tied_weights) : 0.0;
  l.best_case_ratio = static_cast<double>(a_out.group()->order());
  c.report.raw_total = l.raw_weights + l.raw_bias;
  c.report.tied_total = l.tied_weights + l.tied_bias;
  c.report.ratio = c.report.tied_total ? static_cast<double>(c.report.raw_total) / static_cast<double>(c.report.tied_total) : 0.0;
  return c;
}

CompressionReport compress_chain(const std::vector<SetAction>& actions) {
  require(actions.size() >= 2, ErrorKind::UsageError, "need at least two actions");
  CompressionReport out;
  for (std::size_t k = 0; k + 1 < actions.size(); ++k) {
    const auto c = compress(actions[k + 1].size(), actions[k].size(), actions[k + 1], actions[k]);
    out.layers.push_back(c.report.layers.front());
    out.raw_total += c.report.raw_total;
    out.tied_total += c.report.tied_total;
  }
  out.ratio = out.tied_total ? static_cast<double>(out.raw_total) / static_cast<double>(out.tied_total) : 0.0;
  return out;
}

Matrix materialize_tying(const TyingPattern& t, const std::vector<double>& weight_params) {
  require(weight_params.size() == t.weight_orbits(), ErrorKind::DimensionMismatch, "one parameter per weight orbit");
  Matrix w(static_cast<Eigen::Index>(t.n_out), static_cast<Eigen::Index>(t.n_in));
  for (std::size_t i = 0; i < t.n_out; ++i) {
    for (std::size_t j = 0; j < t.n_in; ++j) {
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = weight_params[t.weight_orbit[i * t.n_in + j]];
    }
  }
  return w;
}

std::vector<Vector> symmetric_grid(std::size_t dim, std::size_t per_axis) {
  require(per_axis >= 2, ErrorKind::UsageError, "grid needs at least 2 points per axis");
  const double total = std::pow(static_cast<double>(per_axis), static_cast<double>(dim));
  require(total <= 1e6, ErrorKind::BudgetExceeded, "grid would have more than 1e6 points");
  std::vector<Vector> out;
  std::vector<std::size_t> idx(dim, 0);
  const auto coord = [&](std::size_t k) {
    // Symmetric about 0 by construction: k and per_axis-1-k map to negatives.
    return (2.0 * static_cast<double>(k) - static_cast<double>(per_axis - 1)) / static_cast<double>(per_axis - 1);
  };
  while (true) {
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t d = 0; d < dim; ++d) v(static_cast<Eigen::Index>(d)) = coord(idx[d]);
    out.push_back(std::move(v));
    std::size_t d = dim;
    while (d > 0 && ++idx[d - 1] == per_axis) idx[--d] = 0;
    if (d == 0) break;
  }
  return out;
}

FitResult fit_invariant(const std::function<double(const Vector&)>& target, const Representation& r_in,
                        const std::vector<HiddenSpec>& hidden, const FitOptions& opts) {
  auto layers = std::make_shared<std::vector<BasisLayer>>();
  std::vector<Representation> chain{r_in};
  std::vector<Activation> acts;
  for (const auto& h : hidden) {
    require_same_group(r_in, h.rep);
    check_pointwise_admissible(h.rep, h.act, "hidden layer");
    chain.push_back(h.rep);
    acts.push_back(h.act);
  }
  chain.push_back(symgrp::trivial_representation(r_in.group(), 1));
  acts.push_back(Activation::identity);

  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    BasisLayer l;
    l.w_basis = symgrp::intertwiner_basis(chain[k], chain[k + 1]);
    l.b_basis = symgrp::fixed_subspace(chain[k + 1]);
    l.n_out = static_cast<Eigen::Index>(chain[k + 1].dim());
    l.n_in = static_cast<Eigen::Index>(chain[k].dim());
    l.act = acts[k];
    layers->push_back(std::move(l));
  }

  const auto grid = std::make_shared<std::vector<Vector>>(symmetric_grid(r_in.dim(), opts.grid_per_axis));
  auto targets = std::make_shared<std::vector<double>>();
  for (const auto& x : *grid) targets->push_back(target(x));

  const optdyn::DiffFunction loss("fit_invariant_mse", [layers, grid, targets](const auto& p) {
    using S = std::decay_t<decltype(p[0])>;
    S acc(0.0);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const S diff = eval_basis(*layers, p, (*grid)[i])[0] - (*targets)[i];
      acc = acc + diff * diff;
    }
    return acc / static_cast<double>(grid->size());
  });

  std::size_t n_params = 0;
  for (const auto& l : *layers) n_params += l.params();
  Vector theta = Vector::Zero(static_cast<Eigen::Index>(n_params));
  const CounterRng rng(opts.seed, 0x666974);
  std::size_t offset = 0;
  for (const auto& l : *layers) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(l.n_in, 1)));
    for (std::size_t k = 0; k < l.w_basis.size(); ++k, ++offset) {
      theta(static_cast<Eigen::Index>(offset)) = scale * rng.normal(offset);
    }
    offset += l.b_basis.size();  // biases start at zero
  }

  FitResult out;
  out.parameters = n_params;
  Vector best = theta;
  double best_loss = loss.value(theta);
  out.budget_exhausted = true;
  for (std::size_t step = 0; step < opts.budget; ++step) {
    const Vector g = loss.gradient(theta);
    if (inf_norm(g) <= opts.grad_tol) {
      out.budget_exhausted = false;
      break;
    }
    theta -= opts.lr * g;
    ++out.steps;
    const double v = loss.value(theta);
    if (v < best_loss) {
      best_loss = v;
      best = theta;
    }
  }
  if (n_params == 0) out.budget_exhausted = false;

  std::size_t off = 0;
  for (const auto& l : *layers) out.model.layers.push_back(materialize(l, best, off));
  out.final_loss = best_loss;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    out.sup_error = std::max(out.sup_error, std::abs(forward(out.model, (*grid)[i])(0) - (*targets)[i]));
  }
  return out;
}

LawReport adversarial_invariance(const DenseModel& m, const OutputLoss& loss, const Vector& x,
                                 const Representation& r_in, const AdversarialOptions& opts) {
  LawReport rep(opts.mode == AdversarialMode::orbit ? "adversarial_invariance/orbit" : "adversarial_invariance/fixed");
  require(static_cast<std::size_t>(x.size()) == r_in.dim() && m.input_dim() == r_in.dim(), ErrorKind::DimensionMismatch,
          "input, model and representation dimensions differ");
  const double base = loss(forward(m, x));
  double worst = 0.0;
  const auto& g = *r_in.group();

  if (opts.mode == AdversarialMode::orbit) {
    for (symgrp::Elem a = 0; a < g.order(); ++a) {
      rep.add_case();
      const double d = std::abs(loss(forward(m, r_in.rho(a) * x)) - base);
      worst = std::max(worst, std::isnan(d) ? INFINITY : d);
      if (!(d <= opts.tol)) rep.violate("loss_invariance", {g.name(a)}, "delta loss " + fmt_real(d));
    }
  } else {
    rep.note("fixed-subspace perturbations are measured only; model invariance does not bound them");
    const auto basis = symgrp::fixed_subspace(r_in);
    if (basis.empty()) rep.note("fixed subspace is trivial; every perturbation is zero");
    for (std::size_t k = 0; k < opts.samples; ++k) {
      rep.add_case();
      const CounterRng rng(opts.seed, k);
      Vector delta = Vector::Zero(x.size());
      for (std::size_t i = 0; i < basis.size(); ++i) delta += rng.normal(i) * basis[i];
      const double norm = delta.norm();
      delta = norm > 0.0 ? Vector(opts.eps / norm * delta) : Vector::Zero(x.size());
      const double d = std::abs(loss(forward(m, x + delta)) - base);
      worst = std::max(worst, std::isnan(d) ? INFINITY : d);
    }
  }
  rep.metrics["max_delta_loss"] = worst;
  rep.finalize();
  return rep;
}

}  // namespace symcat::equinet
