#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "generators.hpp"
#include "symcat/enriched.hpp"
#include "symcat/equinet.hpp"
#include "symcat/error.hpp"

using namespace symcat;
using namespace symcat::equinet;
using symgrp::cyclic;
using symgrp::permutation_representation;
using symgrp::rotation_action;
using symgrp::swap_representation;
using symgrp::trivial_representation;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Representation c4perm() { return permutation_representation(rotation_action(cyclic(4))); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::UsageError;
}

}  // namespace

TEST_CASE("basis-mode layer from coefficients") {
  EquivariantLayerSpec spec;
  spec.mode = LayerMode::basis;
  spec.r_in = swap_representation();
  spec.r_out = swap_representation();
  const auto basis = symgrp::intertwiner_basis(spec.r_in, spec.r_out);
  REQUIRE(basis.size() == 2);
  // Pick the combination of the computed basis that equals I.
  Matrix coeffs(4, 2);
  for (int k = 0; k < 2; ++k) coeffs.col(k) = basis[static_cast<std::size_t>(k)].reshaped();
  const Vector c = coeffs.colPivHouseholderQr().solve(Matrix::Identity(2, 2).reshaped());
  spec.coefficients = {c(0), c(1)};
  const auto layer = build_equivariant_layer(spec);
  CHECK(max_abs(layer.w - Matrix::Identity(2, 2)) <= 1e-15);
  CHECK(layer.b == Vector::Zero(2));

  spec.coefficients = {1.0};
  CHECK(kind_of([&] { build_equivariant_layer(spec); }) == ErrorKind::DimensionMismatch);
  spec.coefficients = {c(0), c(1)};
  spec.bias_coefficients = {2.0};
  const Vector fixed = symgrp::fixed_subspace(spec.r_out)[0];
  CHECK(build_equivariant_layer(spec).b == 2.0 * fixed);
  CHECK(fixed(0) == fixed(1));
}

TEST_CASE("Reynolds-mode layers") {
  EquivariantLayerSpec spec;
  spec.r_in = c4perm();
  spec.r_out = c4perm();
  spec.seed = 5;
  const auto layer = build_equivariant_layer(spec);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(std::abs(layer.w(i, j) - layer.w((i + 1) % 4, (j + 1) % 4)) <= 1e-12);
    CHECK(std::abs(layer.b(i) - layer.b(0)) <= 1e-15);
  }
  CHECK(max_abs(layer.w) > 0.0);

  spec.r_out = trivial_representation(cyclic(4), 1);
  const auto head = build_equivariant_layer(spec);
  for (Eigen::Index j = 1; j < 4; ++j) CHECK(std::abs(head.w(0, j) - head.w(0, 0)) <= 1e-15);

  spec.r_out = swap_representation();
  CHECK(kind_of([&] { build_equivariant_layer(spec); }) == ErrorKind::GroupMismatch);
}

TEST_CASE("forward examples") {
  DenseModel id{{{Matrix::Identity(3, 3), Vector::Zero(3), Activation::identity}}};
  CHECK(forward(id, vec({1, -2, 3})) == vec({1, -2, 3}));

  DenseModel t{{{Matrix::Ones(2, 2), vec({0.3, -0.7}), Activation::tanh}}};
  // Through volatiles so that both sides use the runtime tanh rather than a
  // correctly rounded compile-time fold.
  volatile double b0 = 0.3, b1 = -0.7;
  CHECK(forward(t, Vector::Zero(2)) == vec({std::tanh(b0), std::tanh(b1)}));

  Matrix w1(2, 2), w2(1, 2);
  w1 << 1, -1, 0.5, 2;
  w2 << 3, -2;
  DenseModel two{{{w1, vec({0.1, 0}), Activation::tanh}, {w2, vec({0.5}), Activation::identity}}};
  const double x0 = 0.4, x1 = -0.3;
  const double h0 = std::tanh(x0 - x1 + 0.1), h1 = std::tanh(0.5 * x0 + 2 * x1);
  CHECK(std::abs(forward(two, vec({x0, x1}))(0) - (3 * h0 - 2 * h1 + 0.5)) <= 1e-15);

  DenseModel relu{{{Matrix::Identity(2, 2), Vector::Zero(2), Activation::relu}}};
  CHECK(forward(relu, vec({-1, 2})) == vec({0, 2}));

  CHECK(kind_of([&] { forward(two, vec({1})); }) == ErrorKind::DimensionMismatch);
  CHECK(forward(two, vec({x0, x1})) == forward(two, vec({x0, x1})));
}

TEST_CASE("model validation") {
  DenseModel bad{{{Matrix::Identity(2, 2), Vector::Zero(3), Activation::identity}}};
  CHECK(kind_of([&] { validate_model(bad); }) == ErrorKind::MalformedDocument);
  DenseModel chain{{{Matrix::Identity(2, 2), Vector::Zero(2), Activation::identity},
                    {Matrix::Identity(3, 3), Vector::Zero(3), Activation::identity}}};
  CHECK(kind_of([&] { validate_model(chain); }) == ErrorKind::MalformedDocument);
  DenseModel nan{{{Matrix::Constant(1, 1, NAN), Vector::Zero(1), Activation::identity}}};
  CHECK(kind_of([&] { validate_model(nan); }) == ErrorKind::NonFinite);
  CHECK(kind_of([&] { validate_model({}); }) == ErrorKind::MalformedDocument);
}

TEST_CASE("constructed models are equivariant at every depth") {
  const auto g = cyclic(4);
  const auto c4 = c4perm();
  const auto reg = symgrp::regular_representation(g);
  const auto two = symgrp::direct_sum(c4, 2);
  const auto triv = trivial_representation(g, 1);
  const std::vector<std::vector<Representation>> chains{
      {c4, c4}, {c4, two, c4}, {c4, reg, two, c4}, {c4, two, reg, c4, c4}, {c4, two, c4, triv}};
  for (const auto& chain : chains) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto m = build_equivariant_model(chain, Activation::tanh, Activation::tanh, seed);
      const auto res = check_model_equivariance(m, chain.front(), chain.back(), 5, seed, 1e-9);
      CHECK(res.report.passed());
      CHECK(res.max_violation <= 1e-9);
    }
  }
  const auto s3 = permutation_representation(gen::s3_on_three());
  const auto m = build_equivariant_model({s3, symgrp::regular_representation(s3.group()), s3}, Activation::relu,
                                         Activation::identity, 3);
  CHECK(check_model_equivariance(m, s3, s3, 100, 0, 1e-9).report.passed());
}

TEST_CASE("unconstrained models fail with a witness") {
  const auto c4 = c4perm();
  const auto m = random_model({4, 8, 4}, Activation::tanh, 1);
  const auto res = check_model_equivariance(m, c4, c4, 100, 0, 1e-9);
  CHECK_FALSE(res.report.passed());
  CHECK(res.max_violation > 1e-3);
  REQUIRE_FALSE(res.report.violations.empty());
  CHECK(res.report.violations[0].witness.size() == 2);
  // The trivial group has only the identity: the quantifier is vacuous.
  const auto t = trivial_representation(symgrp::trivial_group(), 4);
  CHECK(check_model_equivariance(m, t, t, 100, 0, 1e-9).report.passed());
}

TEST_CASE("nonlinear models over non-permutation representations are refused") {
  const auto rot = gen::c4_rotation();
  const auto m = random_model({2, 2}, Activation::tanh, 0);
  DenseModel nonlinear = m;
  nonlinear.layers[0].act = Activation::tanh;
  CHECK(kind_of([&] { check_model_equivariance(nonlinear, rot, rot, 10, 0, 1e-9); }) ==
        ErrorKind::NonPermutationWithNonlinearity);
  // Linear layers over any representation are fine.
  const auto lin = build_equivariant_model({rot, rot, rot}, Activation::identity, Activation::identity, 4);
  CHECK(check_model_equivariance(lin, rot, rot, 100, 0, 1e-9).report.passed());
  CHECK(kind_of([&] { build_equivariant_model({rot, rot}, Activation::tanh, Activation::tanh, 0); }) ==
        ErrorKind::NonPermutationWithNonlinearity);
}

TEST_CASE("compression examples") {
  const auto c4 = rotation_action(cyclic(4));
  const auto c = compress(4, 4, c4, c4);
  CHECK(c.report.layers[0].raw_weights == 16);
  CHECK(c.report.layers[0].tied_weights == 4);
  CHECK(c.report.layers[0].weight_ratio == 4.0);
  CHECK(c.report.layers[0].best_case_ratio == 4.0);
  CHECK(c.report.layers[0].tied_bias == 1);
  CHECK(c.report.raw_total == 20);
  CHECK(c.report.tied_total == 5);

  const auto triv = symgrp::trivial_action(symgrp::trivial_group(), 3);
  const auto t = compress(3, 3, triv, triv);
  CHECK(t.report.layers[0].tied_weights == t.report.layers[0].raw_weights);

  const auto z2 = rotation_action(cyclic(2));
  const auto s = compress(2, 2, z2, z2);
  CHECK(s.report.layers[0].tied_weights == 2);
  CHECK(s.tying.weight_orbit == std::vector<std::size_t>{0, 1, 1, 0});

  CHECK(kind_of([&] { compress(4, 4, c4, symgrp::trivial_action(cyclic(3), 4)); }) == ErrorKind::GroupMismatch);
  CHECK(kind_of([&] { compress(4, 3, c4, c4); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("tied parameter counts equal intertwiner dimensions") {
  CounterRng rng(21);
  const std::vector<symgrp::GroupPtr> groups{cyclic(2), cyclic(3), cyclic(4), symgrp::symmetric3()};
  for (int trial = 0; trial < 40; ++trial) {
    const auto& g = groups[static_cast<std::size_t>(trial) % groups.size()];
    const auto in = gen::random_action(g, rng, 6);
    const auto out = gen::random_action(g, rng, 6);
    if (in.size() == 0 || out.size() == 0) continue;
    const auto c = compress(out.size(), in.size(), out, in);
    const auto pin = permutation_representation(in);
    const auto pout = permutation_representation(out);
    CHECK(c.report.layers[0].tied_weights == symgrp::intertwiner_basis(pin, pout).size());
    CHECK(c.report.layers[0].tied_bias == symgrp::fixed_subspace(pout).size());
    // Any tied weight matrix is an intertwiner.
    std::vector<double> params;
    for (std::size_t k = 0; k < c.tying.weight_orbits(); ++k) params.push_back(rng.next_normal());
    CHECK(symgrp::intertwiner_residual(pin, pout, materialize_tying(c.tying, params)) == 0.0);
  }
}

TEST_CASE("compression over a chain of layers") {
  const auto c4 = rotation_action(cyclic(4));
  const auto pairs = symgrp::pair_action(c4, c4);
  const auto rep = compress_chain({c4, pairs, c4});
  REQUIRE(rep.layers.size() == 2);
  CHECK(rep.layers[0].raw_weights == 64);
  CHECK(rep.layers[0].tied_weights == 16);
  CHECK(rep.raw_total == 64 + 16 + 64 + 4);
  CHECK(rep.tied_total == 16 + 4 + 16 + 1);
}

TEST_CASE("invariant fitting") {
  const auto swap = swap_representation();
  const auto sum = fit_invariant([](const Vector& x) { return x(0) + x(1); }, swap, {});
  CHECK(sum.sup_error <= 1e-6);
  CHECK(sum.parameters == 2);

  const auto constant = fit_invariant([](const Vector&) { return 0.75; }, swap, {});
  CHECK(constant.sup_error <= 1e-12);

  const auto anti = fit_invariant([](const Vector& x) { return x(0) - x(1); }, swap, {});
  CHECK(anti.sup_error >= 1.0);

  // The fitted model is invariant whatever the target.
  const auto triv = trivial_representation(swap.group(), 1);
  CHECK(check_model_equivariance(anti.model, swap, triv, 50, 0, 1e-12).report.passed());
}

TEST_CASE("invariant fitting with a hidden layer reports its error") {
  const auto swap = swap_representation();
  const auto hidden = symgrp::direct_sum(swap, 3);
  FitOptions opts;
  opts.budget = 400;
  opts.lr = 0.1;
  const auto res = fit_invariant([](const Vector& x) { return x(0) * x(1); }, swap, {{hidden, Activation::tanh}}, opts);
  CHECK(res.budget_exhausted);
  CHECK(res.steps == 400);
  CHECK(std::isfinite(res.sup_error));
  const auto triv = trivial_representation(swap.group(), 1);
  CHECK(check_model_equivariance(res.model, swap, triv, 50, 0, 1e-12).report.passed());
  // Same seed, same model.
  const auto again = fit_invariant([](const Vector& x) { return x(0) * x(1); }, swap, {{hidden, Activation::tanh}}, opts);
  CHECK(again.sup_error == res.sup_error);
}

TEST_CASE("symmetric grid") {
  const auto grid = symmetric_grid(2, 21);
  CHECK(grid.size() == 441);
  CHECK(grid.front() == vec({-1, -1}));
  CHECK(grid.back() == vec({1, 1}));
  CHECK(grid[220] == vec({0, 0}));
}

TEST_CASE("adversarial invariance in orbit mode") {
  const auto c4 = c4perm();
  const auto triv = trivial_representation(cyclic(4), 1);
  const auto invariant =
      build_equivariant_model({c4, symgrp::direct_sum(c4, 2), c4, triv}, Activation::tanh, Activation::identity, 9);
  const OutputLoss loss = [](const Vector& y) { return (y(0) - 0.3) * (y(0) - 0.3); };
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto rep = adversarial_invariance(invariant, loss, enriched::sample_vector(77, k, 4), c4);
    CHECK(rep.passed());
    CHECK(rep.metrics.at("max_delta_loss") <= 1e-12);
  }
  const auto generic = random_model({4, 6, 1}, Activation::tanh, 2);
  const auto rep = adversarial_invariance(generic, loss, vec({0.9, -0.4, 0.1, 0.6}), c4);
  CHECK_FALSE(rep.passed());
  CHECK(rep.metrics.at("max_delta_loss") > 0.0);
  CHECK(rep.violations[0].witness.size() == 1);
}

TEST_CASE("adversarial invariance in fixed mode only measures") {
  const auto c4 = c4perm();
  const auto generic = random_model({4, 6, 1}, Activation::tanh, 2);
  const OutputLoss loss = [](const Vector& y) { return y(0); };
  AdversarialOptions opts;
  opts.mode = AdversarialMode::fixed;
  opts.eps = 0.0;
  const auto zero = adversarial_invariance(generic, loss, vec({0.9, -0.4, 0.1, 0.6}), c4, opts);
  CHECK(zero.metrics.at("max_delta_loss") == 0.0);
  opts.eps = 0.5;
  const auto some = adversarial_invariance(generic, loss, vec({0.9, -0.4, 0.1, 0.6}), c4, opts);
  CHECK(some.passed());
  CHECK(some.metrics.at("max_delta_loss") > 0.0);
  CHECK_FALSE(some.notes.empty());
}
