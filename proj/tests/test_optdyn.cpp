#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "generators.hpp"
#include "symcat/enriched.hpp"
#include "symcat/optdyn.hpp"

using namespace symcat;
using namespace symcat::optdyn;
using symgrp::swap_representation;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

DiffFunction sin_product() {
  return DiffFunction("sin_product", [](const auto& th) {
    using ad::sin;
    using std::sin;
    return sin(th[0] * th[1]);
  });
}

DiffFunction soft_mix() {
  return DiffFunction("soft_mix", [](const auto& th) {
    using ad::exp;
    using ad::log;
    using ad::tanh;
    using std::exp;
    using std::log;
    using std::tanh;
    using S = std::decay_t<decltype(th[0])>;
    S acc(0.0);
    for (std::size_t i = 0; i < th.size(); ++i) acc = acc + tanh(th[i]) * exp(0.3 * th[(i + 1) % th.size()]);
    return log(1.0 + acc * acc);
  });
}

// Second difference of t -> f(theta + t v).
double fd_second(const DiffFunction& f, const Vector& theta, const Vector& v, double h = 1e-4) {
  return (f.value(theta + h * v) - 2 * f.value(theta) + f.value(theta - h * v)) / (h * h);
}

Map affine(double a, Vector c) {
  return [a, c](const Vector& x) -> Vector { return a * x + c; };
}

}  // namespace

TEST_CASE("gradient examples") {
  const auto quad = make_loss("quad");
  const Vector th = vec({0.3, -1.2, 4.0});
  CHECK(gradient(quad, th) == th);

  const auto f = sin_product();
  const Vector p = vec({0.3, 0.7});
  const Vector g = gradient(f, p);
  CHECK(g(0) == Catch::Approx(0.7 * std::cos(0.21)).epsilon(1e-15));
  CHECK(g(1) == Catch::Approx(0.3 * std::cos(0.21)).epsilon(1e-15));
  const Vector fd = fd_gradient(f, p);
  CHECK((g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff() <= 1e-6);

  const DiffFunction constant("const", [](const auto& th_) {
    using S = std::decay_t<decltype(th_[0])>;
    return S(3.0);
  });
  CHECK(gradient(constant, th) == Vector::Zero(3));
}

TEST_CASE("named losses evaluate as documented") {
  CHECK(make_loss("quad").value(vec({3, 4})) == 12.5);
  CHECK(make_loss("sumsq").value(vec({3, 4})) == 49.0);
  CHECK(make_loss("custom-poly:1,2,3").value(vec({1, 2})) == 23.0);
  CHECK(make_loss("custom-poly:0.5").value(vec({7, 8, 9})) == 1.5);
  CHECK(gradient(make_loss("sumsq"), vec({1, 2})) == vec({6, 6}));
  CHECK(gradient(make_loss("custom-poly:0,0,1"), vec({1, -2})) == vec({2, -4}));
  CHECK_THROWS_AS(make_loss("cubic"), Error);
  CHECK_THROWS_AS(make_loss("custom-poly:"), Error);
  CHECK_THROWS_AS(make_loss("custom-poly:1,x"), Error);
}

TEST_CASE("AD gradients agree with central differences on 50 probes per fixture") {
  const std::vector<std::pair<DiffFunction, std::size_t>> fixtures{
      {make_loss("quad"), 4},       {make_loss("sumsq"), 3}, {make_loss("custom-poly:0.5,-1,0.25,2"), 3},
      {sin_product(), 2},           {soft_mix(), 4},
  };
  for (const auto& [f, dim] : fixtures) {
    const auto rep = check_gradient(f, {dim, 50, 7, 1.0});
    INFO(f.name() << " max error " << rep.metrics.at("max_rel_error"));
    CHECK(rep.passed());
    CHECK(rep.cases == 50);
  }
}

TEST_CASE("second directional derivatives") {
  CounterRng rng(2);
  const auto quad = make_loss("quad");
  const Vector v = vec({1, 2, 2});
  CHECK(quad.second_directional(vec({5, -1, 0}), v) == 9.0);
  for (const auto& f : {sin_product(), soft_mix()}) {
    for (int k = 0; k < 20; ++k) {
      const Vector th = gen::gaussian(rng, 2);
      const Vector dir = gen::gaussian(rng, 2);
      const double exact = f.second_directional(th, dir);
      const double fd = fd_second(f, th, dir);
      CHECK(std::abs(exact - fd) / std::max(1.0, std::abs(exact)) <= 1e-4);
    }
  }
}

TEST_CASE("non-finite evaluations are refused") {
  const DiffFunction bad("log", [](const auto& th) {
    using ad::log;
    using std::log;
    return log(th[0]);
  });
  CHECK_THROWS_AS(bad.gradient(vec({-1.0})), Error);
  try {
    bad.gradient(vec({0.0}));
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
}

TEST_CASE("contraction estimates") {
  const BoxSampler box{3, -2.0, 2.0};
  const auto half = estimate_contraction(affine(0.5, Vector::Zero(3)), box, 200, 1);
  CHECK(std::abs(half.max_ratio - 0.5) <= 1e-12);
  CHECK(half.contraction());
  CHECK(half.pairs == 200);

  const auto step = gradstep_flow(make_loss("quad"), 0.5);
  CHECK(std::abs(estimate_contraction(step.step, box, 100, 2).max_ratio - 0.5) <= 1e-12);

  const auto twice = estimate_contraction(affine(2.0, Vector::Zero(3)), box, 100, 3);
  CHECK(twice.max_ratio >= 2.0 - 1e-12);
  CHECK_FALSE(twice.contraction());

  const auto degenerate = estimate_contraction(affine(0.5, Vector::Zero(1)), {1, 1.0, 1.0}, 10, 4);
  CHECK(degenerate.pairs == 0);
  CHECK(degenerate.degenerate_skipped == 10);

  // Same seed, same certificate.
  const auto again = estimate_contraction(affine(0.5, Vector::Zero(3)), box, 200, 1);
  CHECK(again.max_ratio == half.max_ratio);
}

TEST_CASE("contraction ratio under the orbit metric") {
  const auto swap = swap_representation();
  const auto flip = [](const Vector& x) -> Vector { return vec({x(1), x(0)}); };
  // Swapping coordinates is an isometry, and a zero map in orbit distance.
  CHECK(std::abs(estimate_contraction(flip, {2, -1, 1}, 50, 0).max_ratio - 1.0) <= 1e-12);
  const auto cert = estimate_contraction(flip, {2, -1, 1}, 50, 0, &swap);
  CHECK(std::abs(cert.max_ratio - 1.0) <= 1e-12);
}

TEST_CASE("Banach iteration examples") {
  const auto r = banach_iterate(affine(0.5, Vector::Constant(1, 1.0)), Vector::Zero(1), 1e-10, 200);
  CHECK(std::abs(r.theta(0) - 2.0) <= 1e-10);
  CHECK(r.iterations <= 60);
  CHECK(r.post_residual <= 1e-10);

  const Vector t0 = vec({3, -4});
  const auto id = banach_iterate([](const Vector& x) { return x; }, t0, 1e-10, 10);
  CHECK(id.theta == t0);
  CHECK(id.iterations == 0);
  CHECK(id.residual == 0.0);

  try {
    banach_iterate(affine(2.0, Vector::Zero(1)), Vector::Ones(1), 1e-10, 50);
    FAIL("expected NonConvergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
    CHECK(e.residuals().size() == 51);
    CHECK(e.last()(0) == std::ldexp(1.0, 50));
  }
}

TEST_CASE("Banach residuals decay at the certified rate on linear fixtures") {
  CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(trial % 4);
    Matrix a = gen::gaussian(rng, n, n);
    const double target = 0.2 + 0.7 * rng.next_uniform();
    a *= target / a.operatorNorm();
    const Vector c = gen::gaussian(rng, n);
    const Map f = [a, c](const Vector& x) -> Vector { return a * x + c; };
    const auto cert = estimate_contraction(f, {static_cast<std::size_t>(n), -3, 3}, 500, 5);
    REQUIRE(cert.contraction());
    const auto res = banach_iterate(f, gen::gaussian(rng, n), 1e-12, 2000);
    const double q = cert.max_ratio + 0.05;
    // Infinity-norm residuals are within sqrt(n) of the Euclidean ones.
    for (std::size_t k = 0; k < res.residuals.size(); ++k) {
      CHECK(res.residuals[k] <= std::sqrt(static_cast<double>(n)) * res.residuals[0] * std::pow(q, static_cast<double>(k)) + 1e-15);
    }
  }
}

TEST_CASE("semigroup law") {
  const auto flow = gradstep_flow(make_loss("quad"));
  const Vector x = vec({1, -2, 3});
  CHECK(check_semigroup(flow, {{0, 4, x}}).passed());
  CHECK(check_semigroup(flow, {{2, 3, x}}).passed());
  CHECK(flow(0, x) == x);

  for (const auto& loss : {"quad", "sumsq", "custom-poly:0,0.3,0.2,-0.1"}) {
    const auto f = gradstep_flow(make_loss(loss), 0.05);
    const auto rep = check_semigroup(f, random_semigroup_cases(3, 16, 100, 9));
    CHECK(rep.passed());
    CHECK(rep.cases == 100);
  }

  // A step with hidden state breaks the law; the check must notice.
  auto counter = std::make_shared<int>(0);
  const FlowMap stateful{"stateful", [counter](const Vector& v) -> Vector { return v + Vector::Constant(v.size(), ++*counter); }};
  CHECK_FALSE(check_semigroup(stateful, {{2, 3, x}}).passed());
}

TEST_CASE("flow equivariance") {
  const auto swap = swap_representation();
  const auto flow = gradstep_flow(make_loss("sumsq"), 0.1);
  const auto rep = check_flow_equivariance(flow, swap, 10, 100, 0, 1e-9);
  CHECK(rep.passed());

  const auto loss = make_loss("sumsq");
  const FlowMap off{"offset", [loss](const Vector& t) -> Vector { return t - 0.1 * loss.gradient(t) + vec({1, 0}); }};
  const auto bad = check_flow_equivariance(off, swap, 3, 10, 0, 1e-9);
  REQUIRE_FALSE(bad.passed());
  CHECK(bad.violations[0].witness[0] == "r1");

  CHECK(check_flow_equivariance(off, swap, 0, 10, 0, 1e-9).passed());
  const FlowMap shrink{"shrink", [](const Vector&) -> Vector { return Vector::Zero(2); }};
  const auto s3 = symgrp::permutation_representation(gen::s3_on_three());
  CHECK_THROWS_AS(check_flow_equivariance(shrink, s3, 1, 1, 0, 1e-9), Error);
}

TEST_CASE("convergence detection examples") {
  Trajectory geo;
  for (int t = 0; t <= 20; ++t) geo.push_back({t, Vector::Constant(1, std::ldexp(1.0, -t))});
  CHECK(detect_convergence(geo, 0.1) == 4);

  Trajectory constant;
  for (int t = 0; t < 5; ++t) constant.push_back({t, vec({1, 2})});
  CHECK(detect_convergence(constant, 1e-9) == 0);

  Trajectory alt;
  for (int t = 0; t < 10; ++t) alt.push_back({t, Vector::Constant(1, t % 2 ? -1.0 : 1.0)});
  CHECK_FALSE(detect_convergence(alt, 0.5).has_value());

  // Alternating between swapped points converges immediately in orbit distance.
  const auto swap = swap_representation();
  Trajectory swapped;
  for (int t = 0; t < 6; ++t) swapped.push_back({t, t % 2 ? vec({0, 1}) : vec({1, 0})});
  CHECK_FALSE(detect_convergence(swapped, 0.5).has_value());
  CHECK(detect_convergence(swapped, 0.5, &swap) == 0);

  // Reported T is a recorded time, not a position.
  Trajectory sparse{{0, vec({1})}, {5, vec({0.01})}, {9, vec({0.0})}};
  CHECK(detect_convergence(sparse, 0.1) == 5);

  CHECK_THROWS_AS(detect_convergence({}, 0.1), Error);
  CHECK_THROWS_AS(detect_convergence({{1, vec({0})}}, 0.1), Error);
  CHECK_THROWS_AS(detect_convergence({{0, vec({0})}, {0, vec({0})}}, 0.1), Error);
}

TEST_CASE("convergence time is monotone in eps") {
  CounterRng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const double q = 0.1 + 0.85 * rng.next_uniform();
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_below(3));
    const Vector a = gen::gaussian(rng, n);
    const Vector limit = gen::gaussian(rng, n);
    Trajectory traj;
    for (int t = 0; t <= 30; ++t) traj.push_back({t, limit + std::pow(q, t) * a});
    std::optional<std::int64_t> prev;
    for (double eps : {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.5, 1.0, 4.0}) {
      const auto cur = detect_convergence(traj, eps);
      if (prev && cur) CHECK(*prev >= *cur);
      if (prev) CHECK(cur.has_value());
      prev = cur;
    }
  }
}

TEST_CASE("meta fixed points") {
  const auto swap = swap_representation();
  const auto sym = meta_fixed_point(affine(0.5, vec({0.5, 0.5})), swap, Vector::Zero(2), 1e-12, 200);
  CHECK((sym.theta - vec({1, 1})).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sym.defect <= 1e-12);
  CHECK(sym.hypothesis.passed());
  CHECK(sym.invariance.passed());

  const auto zero = meta_fixed_point(affine(0.5, Vector::Zero(2)), swap, vec({1, 3}), 1e-12, 200);
  CHECK(zero.theta.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(zero.invariance.passed());

  const auto skew = meta_fixed_point(affine(0.5, vec({1, 0})), swap, Vector::Zero(2), 1e-12, 200);
  CHECK_FALSE(skew.hypothesis.passed());
  CHECK((skew.theta - vec({2, 0})).cwiseAbs().maxCoeff() <= 1e-11);
  REQUIRE_FALSE(skew.invariance.passed());
  CHECK(skew.invariance.violations[0].witness == std::vector<std::string>{"r1"});
}

TEST_CASE("equivariant contractions have invariant fixed points") {
  CounterRng rng(13);
  const std::vector<Representation> reps{swap_representation(), gen::c4_rotation(),
                                         symgrp::permutation_representation(gen::s3_on_three())};
  for (const auto& r : reps) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto n = static_cast<Eigen::Index>(r.dim());
      Matrix a = symgrp::reynolds_map(r, r, gen::gaussian(rng, n, n));
      a *= 0.8 / std::max(a.operatorNorm(), 1e-3);
      const Vector c = symgrp::reynolds_vector(r, gen::gaussian(rng, n));
      const double tol = 1e-10;
      const auto res = meta_fixed_point([a, c](const Vector& x) -> Vector { return a * x + c; }, r, gen::gaussian(rng, n),
                                        tol, 1000);
      CHECK(res.hypothesis.passed());
      CHECK(res.defect <= 10 * tol);
    }
  }
}

TEST_CASE("flow parsing") {
  const auto loss = make_loss("quad");
  CHECK(make_flow("gradstep:0.5", loss)(1, vec({2})) == vec({1}));
  CHECK(make_flow("gradstep", loss)(1, vec({1})) == vec({0.9}));
  CHECK_THROWS_AS(make_flow("euler:0.1", loss), Error);
  CHECK_THROWS_AS(make_flow("gradstep:fast", loss), Error);
}
