#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symcat/ad.hpp"
#include "symcat/error.hpp"
#include "symcat/symgrp.hpp"

namespace symcat::optdyn {

using symgrp::Representation;
using Map = std::function<Vector(const Vector&)>;

using D1 = ad::Dual<double>;
using D2 = ad::Dual<D1>;

/// Scalar function with value, AD gradient and second directional derivative.
/// Built from a generic callable `f(const std::vector<S>&) -> S` that is
/// instantiated for double, D1 and D2.
class DiffFunction {
 public:
  DiffFunction() = default;
  template <class F>
  DiffFunction(std::string name, F f)
      : name_(std::move(name)), f0_(f), f1_(f), f2_(f) {}

  const std::string& name() const { return name_; }
  double value(const Vector& theta) const;
  /// One forward pass per coordinate. Throws NonFinite on non-finite output.
  Vector gradient(const Vector& theta) const;
  /// d^2/dt^2 f(theta + t v) at t = 0.
  double second_directional(const Vector& theta, const Vector& v) const;

 private:
  std::string name_;
  std::function<double(const std::vector<double>&)> f0_;
  std::function<D1(const std::vector<D1>&)> f1_;
  std::function<D2(const std::vector<D2>&)> f2_;
};

Vector gradient(const DiffFunction& f, const Vector& theta);
/// Central differences with step h per coordinate.
Vector fd_gradient(const DiffFunction& f, const Vector& theta, double h = 1e-6);

struct ProbeOptions {
  std::size_t dim = 2;
  std::size_t probes = 50;
  std::uint64_t seed = 0;
  double scale = 1.0;  // probes are scale * N(0, I)
};

/// AD vs central differences. Error per probe is
/// ||g_ad - g_fd||_inf / max(1, ||g_ad||_inf, ||g_fd||_inf); metric "max_rel_error".
LawReport check_gradient(const DiffFunction& f, const ProbeOptions& p, double tol = 1e-6);

/// Named losses: "quad" = 1/2 ||theta||^2, "sumsq" = (sum_i theta_i)^2,
/// "custom-poly:c0,c1,..." = sum_i sum_k c_k theta_i^k.
DiffFunction make_loss(const std::string& spec);

/// Integer-time flow: Flow(t) applies `step` t times.
struct FlowMap {
  std::string name;
  Map step;

  Vector operator()(std::size_t t, Vector x) const;
};

/// theta -> theta - eta * grad L(theta)
FlowMap gradstep_flow(const DiffFunction& loss, double eta = 0.1);
/// "gradstep:<eta>" (or "gradstep" for the default step 0.1).
FlowMap make_flow(const std::string& spec, const DiffFunction& loss);

struct BoxSampler {
  std::size_t dim = 1;
  double lo = -1.0;
  double hi = 1.0;

  Vector sample(std::uint64_t seed, std::uint64_t index) const;
  std::string describe() const;
};

struct ContractionCertificate {
  std::size_t pairs = 0;
  std::size_t degenerate_skipped = 0;
  double max_ratio = 0.0;
  std::string sampler;
  std::uint64_t seed = 0;

  bool contraction() const { return max_ratio < 1.0; }
};

/// Max of ||F(x) - F(y)||_2 / ||x - y||_2 over sampled pairs. With a
/// representation, orbit_distance replaces the Euclidean metric.
ContractionCertificate estimate_contraction(const Map& f, const BoxSampler& sampler, std::size_t n_pairs,
                                            std::uint64_t seed, const Representation* orbit_metric = nullptr);

struct IterateResult {
  Vector theta;
  std::size_t iterations = 0;
  double residual = 0.0;       // ||F(theta_k) - theta_k||_inf at the stopping step
  double post_residual = 0.0;  // ||F(theta) - theta||_inf for the returned theta
  std::vector<double> residuals;
};

/// Thrown by banach_iterate when max_iter is reached.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& msg, Vector last, std::vector<double> residuals)
      : Error(ErrorKind::NonConvergence, msg), last_(std::move(last)), residuals_(std::move(residuals)) {}
  const Vector& last() const { return last_; }
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  Vector last_;
  std::vector<double> residuals_;
};

/// Iterates theta <- F(theta) until ||F(theta) - theta||_inf <= tol and
/// returns the last image F(theta).
IterateResult banach_iterate(const Map& f, const Vector& theta0, double tol, std::size_t max_iter);

struct SemigroupCase {
  std::size_t s = 0;
  std::size_t t = 0;
  Vector x;
};

/// Flow(s + t)(x) == Flow(s)(Flow(t)(x)) bitwise for every case.
LawReport check_semigroup(const FlowMap& flow, const std::vector<SemigroupCase>& cases, const CheckOptions& opts = {});
std::vector<SemigroupCase> random_semigroup_cases(std::size_t dim, std::size_t t_max, std::size_t n, std::uint64_t seed);

/// Max over sampled x, all g and t <= t_max of
/// ||Flow(t)(rho(g) x) - rho(g) Flow(t)(x)||_inf.
LawReport check_flow_equivariance(const FlowMap& flow, const Representation& r, std::size_t t_max,
                                  std::size_t n_samples, std::uint64_t seed, double tol,
                                  const CheckOptions& opts = {});

struct TrajectoryPoint {
  std::int64_t t = 0;
  Vector theta;
};
using Trajectory = std::vector<TrajectoryPoint>;

/// Throws MalformedDocument unless times strictly increase from 0.
void validate_trajectory(const Trajectory& traj);

/// Least recorded T (other than the final one) with d(theta_t, theta_T) < eps
/// for every recorded t > T. The final time is excluded because the
/// condition would hold there vacuously. With `orbit_metric`, d is
/// symgrp::orbit_distance.
std::optional<std::int64_t> detect_convergence(const Trajectory& traj, double eps,
                                               const Representation* orbit_metric = nullptr);

struct MetaResult {
  Vector theta;
  IterateResult iteration;
  LawReport hypothesis;  // check_update_invariance on Phi
  LawReport invariance;  // max_g ||rho(g) theta* - theta*||_inf, threshold 10 * tol
  double defect = 0.0;
};

MetaResult meta_fixed_point(const Map& phi, const Representation& r, const Vector& theta0, double tol,
                            std::size_t max_iter, std::uint64_t seed = 0);

}  // namespace symcat::optdyn
