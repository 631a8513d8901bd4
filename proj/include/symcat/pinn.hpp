#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symcat/equinet.hpp"
#include "symcat/tape.hpp"

namespace symcat::pinn {

using Jet = ad::Jet2<double>;
/// Maps an input jet to an output jet; lets closed-form test functions
/// stand in for a network.
using JetFn = std::function<Jet(const Jet&)>;

/// u'' = f on [a, b] with Dirichlet boundary values.
struct PdeSpec {
  double a = -1.0;
  double b = 1.0;
  std::string equation = "poisson1d";
  /// Built-in source id ("cospi", "zero", "one"); ignored when `samples` is set.
  std::string source = "cospi";
  /// Source values at the collocation points, in collocation order.
  std::vector<double> samples;
  double ua = -1.0;
  double ub = -1.0;
  std::size_t collocation = 12;
  double lambda = 1.0;
};

/// Throws SchemaError (unknown equation or source) or MalformedDocument
/// (a >= b, fewer than 2 collocation points, non-finite boundary values,
/// sample table of the wrong length).
void validate_spec(const PdeSpec& spec);

/// Uniform points including both ends, mirrored exactly when a = -b.
std::vector<double> collocation_points(const PdeSpec& spec);
std::vector<double> source_values(const PdeSpec& spec);
/// Closed-form solution for built-in sources, honouring the boundary values.
std::optional<JetFn> exact_solution(const PdeSpec& spec);

struct Arch {
  std::size_t hidden_layers = 2;
  std::size_t width = 16;
};

/// "2x16" -> two tanh hidden layers of width 16. Throws UsageError.
Arch parse_arch(const std::string& text);

struct Ansatz {
  equinet::DenseModel base;  // 1 -> 1, tanh hidden layers
  bool symmetrized = false;
};

/// LeCun-normal weights (std 1/sqrt(fan_in)) and zero biases.
Ansatz init_ansatz(const Arch& arch, std::uint64_t seed);
/// u_s(x) = (u(x) + u(-x)) / 2. Throws AsymmetricDomain unless a = -b.
Ansatz symmetrize(const Ansatz& ans, const PdeSpec& spec);

/// u, u' and u'' at x.
Jet evaluate(const Ansatz& ans, double x);
JetFn as_jet_fn(const Ansatz& ans);

/// mean_i (u''(x_i) - f(x_i))^2 + lambda * ((u(a) - ua)^2 + (u(b) - ub)^2).
/// Throws NonFinite.
double residual_loss(const JetFn& u, const PdeSpec& spec);
double residual_loss(const Ansatz& ans, const PdeSpec& spec);

/// Flat parameter layout: per layer, W row-major then b.
Vector flatten(const equinet::DenseModel& m);
equinet::DenseModel unflatten(const equinet::DenseModel& shape, const Vector& p);

/// Loss and its gradient in the flat parameters, by one reverse sweep.
struct LossGradient {
  double loss = 0.0;
  Vector gradient;
};
LossGradient loss_gradient(const Ansatz& ans, const PdeSpec& spec);

/// Max over a mirrored grid on [a, b] of |u(x) - u(-x)|.
double invariance_defect(const Ansatz& ans, const PdeSpec& spec, std::size_t grid = 101);

struct TrainReport {
  bool symmetrized = false;
  std::uint64_t seed = 0;
  std::size_t steps = 0;  // steps actually taken
  std::vector<double> loss_curve;  // steps + 1 entries
  std::vector<double> defect_curve;  // invariance defect at each recorded step
  double final_loss = 0.0;
  double final_residual = 0.0;  // PDE part of the final loss
  double boundary_error = 0.0;  // max(|u(a) - ua|, |u(b) - ub|)
  double max_defect = 0.0;
  bool aborted = false;  // a non-finite loss stopped training early
  std::map<double, std::optional<std::size_t>> steps_to_threshold;
  Ansatz final_ansatz;
};

struct TrainOptions {
  std::size_t steps = 2000;
  double lr = 0.01;
  std::uint64_t seed = 0;
  std::vector<double> thresholds{1e-1, 1e-2};
};

TrainReport train(const PdeSpec& spec, const Arch& arch, bool symmetrized, const TrainOptions& opts);

struct Comparison {
  TrainReport baseline;
  TrainReport symmetrized;
  bool source_even = true;
  std::vector<std::string> warnings;
};

/// Trains baseline and symmetrized ansatzes from the same initialization.
Comparison train_compare(const PdeSpec& spec, const Arch& arch, const TrainOptions& opts);

}  // namespace symcat::pinn
