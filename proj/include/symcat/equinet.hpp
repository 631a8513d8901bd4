#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symcat/ad.hpp"
#include "symcat/symgrp.hpp"

namespace symcat::equinet {

using symgrp::Representation;
using symgrp::SetAction;

enum class Activation { identity, tanh, relu };

std::string to_string(Activation a);
/// Throws SchemaError for unknown names.
Activation parse_activation(const std::string& name);

template <class S>
S activate(Activation a, const S& x) {
  using ad::relu;
  using ad::tanh;
  using std::tanh;
  switch (a) {
    case Activation::tanh:
      return tanh(x);
    case Activation::relu:
      return relu(x);
    case Activation::identity:
      break;
  }
  return x;
}

struct Layer {
  Matrix w;
  Vector b;
  Activation act = Activation::identity;
};

struct DenseModel {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().w.cols()); }
  std::size_t output_dim() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().w.rows()); }
  std::size_t parameter_count() const;
};

/// Throws MalformedDocument on shape breaks and NonFinite on non-finite entries.
void validate_model(const DenseModel& m);

/// Affine map then pointwise activation, layer by layer.
Vector forward(const DenseModel& m, const Vector& x);

/// Random unconstrained model with N(0, 1/fan_in) weights and N(0, 0.1^2) biases.
DenseModel random_model(const std::vector<std::size_t>& widths, Activation act, std::uint64_t seed);

enum class LayerMode { reynolds, basis };

struct EquivariantLayerSpec {
  LayerMode mode = LayerMode::reynolds;
  Representation r_in;
  Representation r_out;
  std::vector<double> coefficients;       // basis mode, over intertwiner_basis(r_in, r_out)
  std::vector<double> bias_coefficients;  // basis mode, over fixed_subspace(r_out); empty means b = 0
  std::uint64_t seed = 0;                 // reynolds mode
  Activation act = Activation::identity;
};

/// Reynolds mode projects a seeded Gaussian W and b; basis mode sums
/// coefficients over the intertwiner and fixed-subspace bases.
Layer build_equivariant_layer(const EquivariantLayerSpec& spec);

/// Stack of Reynolds-mode layers through the given interface representations.
DenseModel build_equivariant_model(const std::vector<Representation>& interfaces, Activation hidden, Activation head,
                                   std::uint64_t seed);

struct EquivarianceResult {
  double max_violation = 0.0;
  LawReport report;
};

/// Max over sampled x and all g of ||f(rho_in(g) x) - rho_out(g) f(x)||_inf.
/// Throws NonPermutationWithNonlinearity when a layer is nonlinear and either
/// representation is not a permutation representation.
EquivarianceResult check_model_equivariance(const DenseModel& m, const Representation& r_in,
                                            const Representation& r_out, std::size_t n_samples, std::uint64_t seed,
                                            double tol, const CheckOptions& opts = {});

/// Orbit index for every weight position (row-major) and every bias entry.
struct TyingPattern {
  std::size_t n_out = 0;
  std::size_t n_in = 0;
  std::vector<std::size_t> weight_orbit;
  std::vector<std::size_t> bias_orbit;

  std::size_t weight_orbits() const;
  std::size_t bias_orbits() const;
};

struct LayerCompression {
  std::size_t raw_weights = 0;
  std::size_t raw_bias = 0;
  std::size_t tied_weights = 0;
  std::size_t tied_bias = 0;
  double weight_ratio = 0.0;  // raw_weights / tied_weights
  double best_case_ratio = 0.0;  // |G|, attained only by free actions on index pairs
};

struct CompressionReport {
  std::vector<LayerCompression> layers;
  std::size_t raw_total = 0;
  std::size_t tied_total = 0;
  double ratio = 0.0;
};

struct Compression {
  TyingPattern tying;
  CompressionReport report;
};

/// Ties weights along orbits of (i, j) -> (a_out(g, i), a_in(g, j)) and
/// biases along orbits of a_out.
Compression compress(std::size_t n_out, std::size_t n_in, const SetAction& a_out, const SetAction& a_in);

/// Per-layer compression for a chain of actions; layer l maps actions[l] to actions[l+1].
CompressionReport compress_chain(const std::vector<SetAction>& actions);

/// Weight matrix with every orbit of the pattern set to its own parameter.
Matrix materialize_tying(const TyingPattern& t, const std::vector<double>& weight_params);

struct HiddenSpec {
  Representation rep;
  Activation act = Activation::tanh;
};

struct FitOptions {
  std::size_t budget = 5000;  // gradient steps
  double lr = 0.05;
  double grad_tol = 1e-14;
  std::size_t grid_per_axis = 21;
  std::uint64_t seed = 0;
};

struct FitResult {
  DenseModel model;
  double sup_error = 0.0;  // over the test grid
  double final_loss = 0.0;
  std::size_t steps = 0;
  std::size_t parameters = 0;
  bool budget_exhausted = false;  // step budget ran out before the gradient fell below grad_tol
};

/// Uniform grid with `per_axis` points on [-1, 1] in every coordinate.
std::vector<Vector> symmetric_grid(std::size_t dim, std::size_t per_axis);

/// Fits an invariant model (hidden equivariant layers, then a scalar
/// invariant head) to `target` by gradient descent on the mean squared
/// error over the grid. Reports the achieved sup error rather than
/// asserting any bound.
FitResult fit_invariant(const std::function<double(const Vector&)>& target, const Representation& r_in,
                        const std::vector<HiddenSpec>& hidden, const FitOptions& opts = {});

enum class AdversarialMode { orbit, fixed };

using OutputLoss = std::function<double(const Vector&)>;

struct AdversarialOptions {
  AdversarialMode mode = AdversarialMode::orbit;
  double eps = 0.1;
  std::size_t samples = 100;  // fixed mode
  std::uint64_t seed = 0;
  double tol = 1e-12;
};

/// Max |L(f(x + delta)) - L(f(x))| with delta = rho(g) x - x for every g
/// (orbit mode, fails above tol) or delta sampled in fixed_subspace(r_in)
/// with ||delta|| = eps (fixed mode, measured only). Metric "max_delta_loss".
LawReport adversarial_invariance(const DenseModel& m, const OutputLoss& loss, const Vector& x,
                                 const Representation& r_in, const AdversarialOptions& opts = {});

}  // namespace symcat::equinet
